"""
Core interfaces for rational-ptc.

This module defines the value types and enumerations shared by the engine,
the bound routes and the reporting layer.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional

from .exceptions import InconsistentResult


class Block(Enum):
    """Which side of a fibration a generator belongs to."""

    BASE = "base"
    FIBER = "fiber"


class Status(Enum):
    """How far a number can be trusted."""

    EXACT = "exact"
    AT_LEAST = "at_least"
    CONDITIONAL = "conditional"
    WINDOW_LIMITED = "window_limited"
    OPEN = "open"


class Strategy(Enum):
    """How much work ``tc_sandwich`` spends once theorem routes meet."""

    AUTO = "auto"
    FULL = "full"


KNOWN_ASSERTIONS = (
    "fiber_formal",
    "base_formal",
    "fiber_elliptic",
    "fibration_tncz_asserted",
    "cohomology_vanishes_above",
)


@dataclass(frozen=True)
class Generator:
    """A free generator of a graded-commutative algebra."""

    name: str
    degree: int
    index: int
    block: Block = Block.FIBER
    copy: Optional[int] = None

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError(f"Generator {self.name} must have degree at least 1")
        if self.index < 0:
            raise ValueError("Generator index must be non-negative")

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1


@dataclass(frozen=True)
class AssertionSet:
    """User-supplied facts the engine cannot decide, each with a justification."""

    flags: Mapping[str, str] = field(default_factory=dict)
    vanishes_above: Optional[int] = None

    def __post_init__(self) -> None:
        for flag in self.flags:
            if flag not in KNOWN_ASSERTIONS:
                raise ValueError(f"Unknown assertion flag: {flag}")
        if "cohomology_vanishes_above" in self.flags and self.vanishes_above is None:
            raise ValueError("cohomology_vanishes_above needs a degree")

    def has(self, *flags: str) -> bool:
        return all(flag in self.flags for flag in flags)

    def merged(self, other: "AssertionSet") -> "AssertionSet":
        flags = dict(self.flags)
        flags.update(other.flags)
        vanishes = other.vanishes_above if other.vanishes_above is not None else self.vanishes_above
        return AssertionSet(flags, vanishes)

    def describe(self, *flags: str) -> tuple[str, ...]:
        return tuple(f"{flag}: {self.flags[flag]}" for flag in flags if flag in self.flags)


@dataclass(frozen=True)
class Provenance:
    """Which route produced a number, and from what."""

    route: str
    detail: str
    inputs: tuple[tuple[str, str], ...] = ()
    assertions: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "route": self.route,
            "detail": self.detail,
            "inputs": {key: value for key, value in self.inputs},
            "assertions": list(self.assertions),
        }


@dataclass(frozen=True)
class VanishingCertificate:
    """Cohomology of some presentation vanishes above ``degree``."""

    degree: int
    source: str
    assertions: tuple[str, ...] = ()

    @property
    def conditional(self) -> bool:
        return self.source not in ("finite_algebra", "declared_top")


@dataclass(frozen=True)
class ComputedValue:
    """An integer invariant together with its trust status."""

    value: int
    status: Status
    provenance: Provenance
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class BoundEntry:
    """A single lower or upper bound for TC_r."""

    side: str
    value: int
    status: Status
    provenance: Provenance
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.side not in ("lower", "upper"):
            raise ValueError("Bound side must be 'lower' or 'upper'")
        if self.value < 0:
            raise ValueError("Bounds on TC_r are non-negative")


@dataclass(frozen=True)
class BoundReport:
    """Lower and upper bounds for TC_r[X -> B] with provenance."""

    model: str
    r: int
    cutoff: int
    lower: int
    lower_provenance: tuple[Provenance, ...]
    upper: Optional[int] = None
    upper_provenance: tuple[Provenance, ...] = ()
    exact: Optional[int] = None
    status: Status = Status.OPEN
    assertions_used: tuple[str, ...] = ()
    components: tuple[BoundEntry, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.upper is not None and self.lower > self.upper:
            raise InconsistentResult(
                f"Lower bound {self.lower} exceeds upper bound {self.upper} for r = {self.r}"
            )
        if self.exact is not None and self.exact != self.lower:
            raise InconsistentResult("Exact value must equal the lower bound")

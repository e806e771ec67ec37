"""
Relative Sullivan presentations of fibrations.

This module provides ``FibrationPresentation`` (a CDGA whose generators are
split into a base block C and a fiber block V), its construction and
validation, the fiber and base presentations, and the fibration-level
checks: TNCZ, purity, oddness and odd-degree extension splits.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .cdga import (
    CdgaMorphism,
    ComputationCache,
    CdgaPresentation,
    cohomology,
    collapse,
    elliptic_formal_dimension,
    induced_map,
    projection_morphism,
    top_cohomology_degree,
    validate,
    validate_morphism,
)
from .exceptions import NotRelativeSullivan, SplitInvalid, ValidationError
from .graded import GeneratorTuple, GradedPoly
from .interfaces import AssertionSet, Block, Generator, VanishingCertificate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FibrationPresentation:
    """
    A relative Sullivan algebra C -> C (x) ΛV -> ΛV.

    ``nilpotence_order`` lists the fiber generator indices so that each
    differential lies in C (x) Λ(earlier fiber generators).
    """

    total: CdgaPresentation
    nilpotence_order: tuple[int, ...]
    assertions: AssertionSet = field(default_factory=AssertionSet)
    dim_base: Optional[int] = None
    dim_fiber: Optional[int] = None
    reference: str = ""
    _models: ComputationCache = field(default_factory=ComputationCache, init=False, repr=False, compare=False)

    @property
    def name(self) -> str:
        return self.total.name

    @property
    def base_indices(self) -> tuple[int, ...]:
        return tuple(g.index for g in self.total.generators if g.block == Block.BASE)

    @property
    def fiber_indices(self) -> tuple[int, ...]:
        return tuple(g.index for g in self.total.generators if g.block == Block.FIBER)

    @property
    def base_generators(self) -> tuple[Generator, ...]:
        return tuple(self.total.generators[i] for i in self.base_indices)

    @property
    def fiber_generators(self) -> tuple[Generator, ...]:
        return tuple(self.total.generators[i] for i in self.fiber_indices)

    @cached_property
    def fiber(self) -> CdgaPresentation:
        """Total presentation modulo the base generators."""
        quotient = collapse(self.total, self.base_indices, name=f"{self.name}_fiber" if self.name else "fiber")
        return validate(quotient).presentation

    @cached_property
    def base(self) -> CdgaPresentation:
        sub = collapse(self.total, self.fiber_indices, name=f"{self.name}_base" if self.name else "base", strict=True)
        # truncation markers refer to omitted fiber generators
        return validate(replace(sub, truncated_above=None)).presentation

    @cached_property
    def fiber_restriction(self) -> CdgaMorphism:
        """The CDGA map total -> fiber sending base generators to zero."""
        return validate_morphism(projection_morphism(self.total, self.fiber))

    def with_assertions(self, extra: AssertionSet) -> "FibrationPresentation":
        return replace(self, assertions=self.assertions.merged(extra))

    def __repr__(self) -> str:
        base = ", ".join(g.name for g in self.base_generators)
        fiber = ", ".join(g.name for g in self.fiber_generators)
        return f"FibrationPresentation({self.name or 'f'}: Λ({base}) -> Λ({base}; {fiber}))"


def make_fibration(
    total: CdgaPresentation,
    assertions: Optional[AssertionSet] = None,
    dim_base: Optional[int] = None,
    dim_fiber: Optional[int] = None,
    reference: str = "",
    lines: Optional[Mapping[str, int]] = None,
) -> FibrationPresentation:
    """
    Validate a block-tagged presentation as a relative Sullivan algebra.

    Raises:
        DegreeMismatch: If a differential image has the wrong degree
        LeibnizSquareNonzero: If d(d(g)) is not zero
        ValidationError: If the base block is not closed under d
        NotRelativeSullivan: If no nilpotence ordering of the fiber exists
    """
    lines = lines or {}
    total = validate(total, lines).presentation
    base = {g.index for g in total.generators if g.block == Block.BASE}
    for index in sorted(base):
        gen = total.generators[index]
        if not total.differential[index].uses_only(base):
            raise ValidationError(
                f"d({gen.name}) leaves the base: the base must be a sub-CDGA",
                gen.name,
                lines.get(gen.name),
            )
    order = nilpotence_ordering(total, base)
    logger.debug("Nilpotence ordering for %r: %s", total, [total.generators[i].name for i in order])
    return FibrationPresentation(
        total,
        order,
        assertions or AssertionSet(),
        dim_base,
        dim_fiber,
        reference,
    )


def nilpotence_ordering(total: CdgaPresentation, base: Iterable[int]) -> tuple[int, ...]:
    """
    Order the fiber generators so each differential uses only the base and earlier ones.

    Greedy: lowest degree first among the generators that are ready.

    Raises:
        NotRelativeSullivan: If some generators can never be placed
    """
    placed = set(base)
    pending = [g for g in total.generators if g.index not in placed]
    order = []
    while pending:
        ready = [g for g in pending if total.differential[g.index].uses_only(placed)]
        if not ready:
            stuck = ", ".join(g.name for g in pending)
            raise NotRelativeSullivan(f"No nilpotence ordering exists for the fiber generators {stuck}", pending[0].name)
        chosen = min(ready, key=lambda g: (g.degree, g.index))
        order.append(chosen.index)
        placed.add(chosen.index)
        pending.remove(chosen)
    return tuple(order)


def over_point(a: CdgaPresentation, **kwargs) -> FibrationPresentation:
    """The fibration X -> X -> * with every generator in the fiber."""
    gens = tuple(replace(g, block=Block.FIBER) for g in a.generators)
    retagged = CdgaPresentation(
        gens,
        tuple(_rebase(p, gens) for p in a.differential),
        declared_top=a.declared_top,
        truncated_above=a.truncated_above,
        name=a.name,
    )
    return make_fibration(retagged, **kwargs)


def identity_fibration(a: CdgaPresentation, **kwargs) -> FibrationPresentation:
    """The fibration * -> X -> X with every generator in the base."""
    gens = tuple(replace(g, block=Block.BASE) for g in a.generators)
    retagged = CdgaPresentation(
        gens,
        tuple(_rebase(p, gens) for p in a.differential),
        declared_top=a.declared_top,
        truncated_above=a.truncated_above,
        name=a.name,
    )
    return make_fibration(retagged, **kwargs)


def _rebase(p: GradedPoly, gens: GeneratorTuple) -> GradedPoly:
    return GradedPoly(gens, dict(p.terms))


def fiber_over_point(f: FibrationPresentation) -> FibrationPresentation:
    """F -> F -> *, carrying the fiber-side declarations of ``f``."""
    flags = {k: v for k, v in f.assertions.flags.items() if k in ("fiber_formal", "fiber_elliptic")}
    return over_point(
        f.fiber,
        assertions=AssertionSet(flags),
        dim_fiber=f.dim_fiber,
        dim_base=0,
    )


@dataclass(frozen=True)
class TnczReport:
    """Per-degree surjectivity of H(total) -> H(fiber)."""

    cutoff: int
    verdicts: tuple[tuple[int, bool], ...]

    @property
    def surjective(self) -> bool:
        return all(ok for _, ok in self.verdicts)

    @property
    def first_failure(self) -> Optional[int]:
        for n, ok in self.verdicts:
            if not ok:
                return n
        return None


def tncz_check(f: FibrationPresentation, cutoff: int) -> TnczReport:
    """Check that H^n(total) -> H^n(fiber) is onto for every n <= cutoff."""
    verdicts = []
    for n in range(cutoff + 1):
        target_dim = cohomology(f.fiber, n).dim
        ok = target_dim == 0 or induced_map(f.fiber_restriction, n).matrix.rank() == target_dim
        verdicts.append((n, ok))
        if not ok:
            logger.info("%r is not TNCZ: H^%d(fiber) is not hit", f, n)
    return TnczReport(cutoff, tuple(verdicts))


def _impure_generator(f: FibrationPresentation) -> Optional[str]:
    allowed = set(f.base_indices) | {g.index for g in f.fiber_generators if not g.is_odd}
    for gen in f.fiber_generators:
        image = f.total.differential[gen.index]
        if not gen.is_odd and not image.is_zero():
            return gen.name
        if gen.is_odd and not image.uses_only(allowed):
            return gen.name
    return None


def pure_check(f: FibrationPresentation) -> bool:
    """d vanishes on even fiber generators and maps odd ones into C (x) Λ(V^even)."""
    return _impure_generator(f) is None


@dataclass(frozen=True)
class OddnessProfile:
    all_fiber_odd: bool
    dim_odd: int
    dim_even: int


def oddness_profile(f: FibrationPresentation) -> OddnessProfile:
    odd = sum(1 for g in f.fiber_generators if g.is_odd)
    even = len(f.fiber_generators) - odd
    return OddnessProfile(even == 0, odd, even)


@dataclass(frozen=True)
class ExtensionSplit:
    """``f`` as an odd-degree extension of ``f_hat`` by the ``discarded`` generators."""

    f_hat: FibrationPresentation
    discarded: tuple[str, ...]

    @property
    def m(self) -> int:
        return len(self.discarded)


def extension_split(f: FibrationPresentation, keep: Iterable[str]) -> ExtensionSplit:
    """
    Split off odd fiber generators, keeping the named ones.

    ``f`` must be pure, so that the differentials of kept generators land
    in C (x) Λ(keep). The kept fibration inherits the assertions and the
    base dimension of ``f``; its fiber dimension is not inherited.

    Raises:
        SplitInvalid: If a name is not a fiber generator, an even generator is
            dropped or ``f`` is not pure
    """
    keep = set(keep)
    fiber_names = {g.name for g in f.fiber_generators}
    unknown = keep - fiber_names
    if unknown:
        raise SplitInvalid("fiber_generators", f"not fiber generators: {', '.join(sorted(unknown))}")
    dropped_even = sorted(g.name for g in f.fiber_generators if not g.is_odd and g.name not in keep)
    if dropped_even:
        raise SplitInvalid("even_generators_kept", f"even generators must be kept: {', '.join(dropped_even)}")
    discarded = [g for g in f.fiber_generators if g.name not in keep]
    if any(not g.is_odd for g in discarded):
        raise SplitInvalid("discarded_odd", "discarded generators must all be odd")
    impure = _impure_generator(f)
    if impure is not None:
        raise SplitInvalid("pure", f"d({impure}) leaves C (x) Λ(V^even), so the fibration is not pure")
    if not discarded:
        return ExtensionSplit(f, ())
    sub = collapse(
        f.total,
        (g.index for g in discarded),
        name=f"{f.name}_hat" if f.name else "f_hat",
        strict=True,
    )
    f_hat = make_fibration(sub, assertions=f.assertions, dim_base=f.dim_base, reference=f.reference)
    logger.info("Split %r: discarded %s", f, [g.name for g in discarded])
    return ExtensionSplit(f_hat, tuple(g.name for g in discarded))


def fiber_dimension(f: FibrationPresentation) -> Optional[VanishingCertificate]:
    """
    Formal dimension of the fiber with its source.

    Computed for a finite fiber algebra, else declared, else the elliptic
    formula under the ``fiber_elliptic`` assertion.
    """
    if f.fiber.is_finite and f.fiber.truncated_above is None:
        return VanishingCertificate(top_cohomology_degree(f.fiber) or 0, "finite_algebra")
    if f.dim_fiber is not None:
        return VanishingCertificate(f.dim_fiber, "declared_dim_fiber")
    if f.assertions.has("fiber_elliptic"):
        return VanishingCertificate(
            elliptic_formal_dimension(f.fiber_generators),
            "elliptic_formula",
            f.assertions.describe("fiber_elliptic"),
        )
    return None


def base_dimension(f: FibrationPresentation) -> Optional[VanishingCertificate]:
    if f.base.is_finite:
        return VanishingCertificate(top_cohomology_degree(f.base) or 0, "finite_algebra")
    if f.dim_base is not None:
        return VanishingCertificate(f.dim_base, "declared_dim_base")
    return None

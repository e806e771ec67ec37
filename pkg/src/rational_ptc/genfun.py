"""
The TC generating function of a fibration.

``series`` collects c_r = TC_{r+1}[X -> B] for r = 1..rmax, ``fit_rational``
looks for a polynomial P with sum c_r z^r = P(z) / (1 - z)^2 on the window,
and ``diff_nil_check`` verifies zcl_{r+1} - zcl_r >= cupl(F).
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import sympy

from .cdga import cuplength, induced_map
from .config import EngineConfig, create_config, merge_configs
from .exceptions import InconsistentResult, NoFit, WindowTooSmall
from .fibration import FibrationPresentation, fiber_dimension, oddness_profile
from .interfaces import AssertionSet, ComputedValue, Provenance, Status, Strategy
from .invariants import certified_window, kernel_classes, zcl
from .rfold import copy_projection, rfold_model
from .sandwich import tc_sandwich

logger = logging.getLogger(__name__)

Z = sympy.Symbol("z")


@dataclass(frozen=True)
class SeriesCoefficient:
    """c_r = TC_{r+1} with the bounds it came from."""

    r: int
    value: Optional[int]
    lower: int
    upper: Optional[int]
    status: Status
    routes: tuple[str, ...]

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "status": self.status.value,
            "routes": list(self.routes),
        }


@dataclass(frozen=True)
class RationalFit:
    """
    P(z) with sum_{r >= 1} c_r z^r = P(z) / (1 - z)^2 on the window.

    ``numerator[j]`` is the coefficient of z^j.
    """

    numerator: tuple[int, ...]
    window: int

    @property
    def polynomial(self) -> sympy.Expr:
        return sympy.Poly(list(reversed(self.numerator)) or [0], Z).as_expr()

    @property
    def p_at_1(self) -> int:
        return sum(self.numerator)

    def expand(self, terms: int) -> list[int]:
        """The coefficients of z^1..z^terms in P(z) / (1 - z)^2."""
        expansion = sympy.series(self.polynomial / (1 - Z) ** 2, Z, 0, terms + 1).removeO()
        poly = sympy.Poly(expansion, Z)
        return [int(poly.coeff_monomial(Z**r)) for r in range(1, terms + 1)]

    def __str__(self) -> str:
        return str(self.polynomial)


def fit_rational(coefficients: Sequence[int]) -> RationalFit:
    """
    Fit P(z) / (1 - z)^2 to c_1..c_R.

    The numerator coefficients are the second differences
    p_k = c_k - 2 c_{k-1} + c_{k-2} (with c_0 = c_{-1} = 0). The fit needs
    p_k = 0 for every k from 3 to R, i.e. constant first differences across
    the whole window, so P has degree at most 2.

    Raises:
        ValueError: If fewer than three coefficients are given
        NoFit: If a second difference inside the window is nonzero
        InconsistentResult: If the fit does not re-expand to the input
    """
    if len(coefficients) < 3:
        raise ValueError("Fitting needs at least three coefficients")
    c = [0, 0] + [int(value) for value in coefficients]
    second = [c[k] - 2 * c[k - 1] + c[k - 2] for k in range(2, len(c))]
    numerator = [0] + second
    for r in range(3, len(coefficients) + 1):
        if numerator[r] != 0:
            raise NoFit(f"Second difference {numerator[r]} at r = {r}: the first differences are not constant")
    while len(numerator) > 1 and numerator[-1] == 0:
        numerator.pop()
    fit = RationalFit(tuple(numerator), len(coefficients))
    if fit.expand(len(coefficients)) != list(coefficients):
        raise InconsistentResult(f"P(z) = {fit} does not reproduce {list(coefficients)}")
    if fit.p_at_1 != coefficients[-1] - coefficients[-2]:
        raise InconsistentResult("P(1) differs from the last first difference")
    return fit


def fiber_cuplength(f: FibrationPresentation, cutoff: int) -> ComputedValue:
    """cupl(F), certified through the fiber dimension when it is known."""
    dimension = fiber_dimension(f)
    if dimension is None or dimension.source == "finite_algebra":
        return cuplength(f.fiber, cutoff)
    vanishing = AssertionSet(
        {"cohomology_vanishes_above": f"fiber dimension {dimension.degree} ({dimension.source})"},
        dimension.degree,
    )
    value = cuplength(f.fiber, cutoff, vanishing)
    return ComputedValue(
        value.value,
        value.status,
        Provenance(
            value.provenance.route,
            value.provenance.detail,
            value.provenance.inputs,
            dimension.assertions + value.provenance.assertions,
        ),
        value.notes,
    )


def cat_fiber(f: FibrationPresentation, cutoff: int) -> Optional[ComputedValue]:
    """
    cat(F) when it is known: dim V for an all-odd fiber, cup-length for a formal one.
    """
    profile = oddness_profile(f)
    if profile.all_fiber_odd and f.total.truncated_above is None:
        return ComputedValue(
            profile.dim_odd,
            Status.EXACT,
            Provenance("fiber_category", "cat(F) = dim V for an elliptic fiber concentrated in odd degrees"),
        )
    if f.assertions.has("fiber_formal"):
        value = fiber_cuplength(f, cutoff)
        if value.status != Status.AT_LEAST:
            return ComputedValue(
                value.value,
                Status.CONDITIONAL,
                Provenance(
                    "fiber_category",
                    "cat(F) = cupl(F) for a formal fiber",
                    value.provenance.inputs,
                    f.assertions.describe("fiber_formal") + value.provenance.assertions,
                ),
            )
    return None


@dataclass(frozen=True)
class SeriesReport:
    model: str
    coefficients: tuple[SeriesCoefficient, ...]
    fit: Optional[RationalFit] = None
    cat_fiber: Optional[ComputedValue] = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def values(self) -> list[Optional[int]]:
        return [c.value for c in self.coefficients]

    @property
    def p_at_1(self) -> Optional[int]:
        return self.fit.p_at_1 if self.fit is not None else None

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "coefficients": [c.as_dict() for c in self.coefficients],
            "fit": str(self.fit) if self.fit is not None else None,
            "p_at_1": self.p_at_1,
            "cat_fiber": self.cat_fiber.value if self.cat_fiber is not None else None,
            "notes": list(self.notes),
        }


def series(
    f: FibrationPresentation,
    rmax: int,
    cutoff: int,
    strategy: Optional[Strategy] = None,
    assertions: Optional[AssertionSet] = None,
    keep: Optional[Iterable[str]] = None,
    config: Optional[EngineConfig] = None,
) -> SeriesReport:
    """
    c_r = TC_{r+1}[X -> B] for r = 1..rmax, fitted when every coefficient is exact.
    """
    if rmax < 2:
        raise ValueError("rmax must be at least 2")
    config = merge_configs(config or create_config(), EngineConfig(strategy=strategy or Strategy.AUTO))
    if assertions is not None:
        f = f.with_assertions(assertions)
    keep = None if keep is None else tuple(keep)

    coefficients = []
    for r in range(1, rmax + 1):
        report = tc_sandwich(f, r + 1, cutoff, keep=keep, config=config)
        routes = tuple(p.route for p in report.lower_provenance + report.upper_provenance)
        coefficients.append(SeriesCoefficient(r, report.exact, report.lower, report.upper, report.status, routes))
        logger.info("c_%d = TC_%d = %s", r, r + 1, report.exact if report.exact is not None else "open")

    notes = []
    fit = None
    values = [c.value for c in coefficients]
    if any(value is None for value in values):
        missing = [c.r for c in coefficients if c.value is None]
        notes.append(f"no fit: c_r is not exact for r = {', '.join(map(str, missing))}")
    else:
        try:
            fit = fit_rational([int(v) for v in values if v is not None])
        except NoFit as error:
            notes.append(f"no fit: {error}")

    category = cat_fiber(f, cutoff)
    if fit is not None:
        if category is not None:
            verdict = "equals" if fit.p_at_1 == category.value else "differs from"
            notes.append(f"P(1) = {fit.p_at_1} {verdict} cat(F) = {category.value}")
        if fit.numerator and fit.numerator[0] == 0 and category is not None:
            notes.append(
                f"Summing TC_{{r+1}} from r = 1 gives P(z) = {fit} with a factor z; "
                f"the closed form cat(F)/(1-z)^2 = {category.value}/(1-z)^2 would need c_0 = cat(F)"
            )
    return SeriesReport(f.name, tuple(coefficients), fit, category, tuple(notes))


@dataclass(frozen=True)
class DiffNilRow:
    r: int
    zcl_r: int
    zcl_next: int
    holds: bool
    kernel_maps_into_kernel: bool

    @property
    def difference(self) -> int:
        return self.zcl_next - self.zcl_r


@dataclass(frozen=True)
class DiffNilReport:
    model: str
    cupl_fiber: int
    rows: tuple[DiffNilRow, ...]

    @property
    def ok(self) -> bool:
        return all(row.holds and row.kernel_maps_into_kernel for row in self.rows)

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "cupl_fiber": self.cupl_fiber,
            "ok": self.ok,
            "rows": [
                {
                    "r": row.r,
                    "zcl_r": row.zcl_r,
                    "zcl_next": row.zcl_next,
                    "difference": row.difference,
                    "holds": row.holds,
                    "kernel_maps_into_kernel": row.kernel_maps_into_kernel,
                }
                for row in self.rows
            ],
        }


def _kernel_maps_into_kernel(f: FibrationPresentation, r: int, cutoff: int) -> bool:
    smaller = rfold_model(f, r)
    larger = rfold_model(f, r + 1)
    projection = copy_projection(larger, smaller)
    window, _ = certified_window(smaller, cutoff)
    target = kernel_classes(larger, window)
    for n, part in kernel_classes(smaller, window).items():
        on_classes = induced_map(projection, n).matrix
        for vector in part.basis:
            image = on_classes.apply(vector)
            if image and (n not in target or not target[n].contains(image)):
                return False
    return True


def diff_nil_check(f: FibrationPresentation, rmax: int, cutoff: int) -> DiffNilReport:
    """
    Check zcl_{r+1} - zcl_r >= cupl(F) for 2 <= r < rmax.

    Raises:
        WindowTooSmall: If cupl(F) or some zcl_r is not certified within the cutoff
    """
    fiber_cupl = fiber_cuplength(f, cutoff)
    if fiber_cupl.status == Status.AT_LEAST:
        raise WindowTooSmall(f"cupl of the fiber of {f.name or 'f'} is not certified through degree {cutoff}")
    computed = {r: zcl(f, r, cutoff) for r in range(2, rmax + 1)}
    uncertified = [r for r, value in computed.items() if value.status == Status.AT_LEAST]
    if uncertified:
        raise WindowTooSmall(
            f"zcl_r of {f.name or 'f'} is only a lower bound through degree {cutoff} "
            f"for r = {', '.join(map(str, uncertified))}"
        )
    values = {r: value.value for r, value in computed.items()}
    rows = []
    for r in range(2, rmax):
        holds = values[r + 1] - values[r] >= fiber_cupl.value
        if not holds:
            logger.error("zcl_%d - zcl_%d < cupl(F) = %d for %r", r + 1, r, fiber_cupl.value, f)
        rows.append(DiffNilRow(r, values[r], values[r + 1], holds, _kernel_maps_into_kernel(f, r, cutoff)))
    return DiffNilReport(f.name, fiber_cupl.value, tuple(rows))

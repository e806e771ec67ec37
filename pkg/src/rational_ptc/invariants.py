"""
Cohomological invariants of the fiberwise diagonal.

This module computes the zero-divisor cup-length zcl_r (nilpotency of
Ker H(Delta_r)), the per-degree kernel table, HTC_r together with explicit
witnesses, and the TC_r(fiber) lower bound.

HTC work happens in the difference presentation of the r-fold model, where
every power of the kernel ideal is a coordinate subspace.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from sympy import QQ

from .cdga import cohomology, differential_matrix, ideal_nilpotency, induced_map
from .config import EngineConfig, get_default_config
from .fibration import FibrationPresentation, fiber_over_point, oddness_profile
from .graded import GradedPoly, coordinates, from_coordinates
from .interfaces import ComputedValue, Provenance, Status, VanishingCertificate
from .linalg import RationalMatrix, SubspaceBasis, Vector, kernel
from .rfold import RFoldModel, best_certificate, rfold_model, rfold_vanishing_certificates

logger = logging.getLogger(__name__)


def _check_r(r: int) -> None:
    if r < 2:
        raise ValueError("The number of copies r must be at least 2")


def certified_window(m: RFoldModel, cutoff: int) -> tuple[int, Optional[VanishingCertificate]]:
    """The degree window to work in and the certificate bounding it, if any."""
    certificate = best_certificate(rfold_vanishing_certificates(m), cutoff)
    if certificate is None:
        return cutoff, None
    return min(cutoff, certificate.degree), certificate


def window_status(certificate: Optional[VanishingCertificate], uncertified: Status) -> Status:
    if certificate is None:
        return uncertified
    return Status.CONDITIONAL if certificate.conditional else Status.EXACT


def _truncation_notes(m: RFoldModel, window: int) -> tuple[str, ...]:
    top = m.presentation.truncated_above
    if top is not None and window >= top:
        logger.warning("%r is truncated above %d; verdicts from degree %d on hold modulo truncation", m, top, top)
        return (f"verdicts in degrees >= {top} hold modulo truncation",)
    return ()


def kernel_classes(m: RFoldModel, window: int) -> dict[int, SubspaceBasis]:
    """Ker H^n(Delta_r) in class coordinates of H^n(r-fold model), for 1 <= n <= window."""
    result = {}
    for n in range(1, window + 1):
        part = induced_map(m.diagonal, n).kernel
        if not part.is_zero():
            result[n] = part
    logger.debug("%r: kernel of H(diagonal) has dims %s", m, {n: s.dim for n, s in result.items()})
    return result


def zcl(f: FibrationPresentation, r: int, cutoff: int) -> ComputedValue:
    """
    The r-th zero-divisor cup-length through ``cutoff``.

    Exact when H of the r-fold model is certified to vanish above a degree
    within the cutoff; conditional when that certificate rests on declared
    data; otherwise a lower bound.
    """
    _check_r(r)
    m = rfold_model(f, r)
    window, certificate = certified_window(m, cutoff)
    result = ideal_nilpotency(m.presentation, kernel_classes(m, window), window)
    status = window_status(certificate, Status.AT_LEAST)
    logger.info("zcl_%d of %r = %d (%s) through degree %d", r, f, result.nil, status.value, window)
    return ComputedValue(
        result.nil,
        status,
        Provenance(
            "zero_divisor_cup_length",
            f"nilpotency of Ker H(diagonal) for r = {r} through degree {window}",
            (
                ("r", str(r)),
                ("cutoff", str(window)),
                ("certificate", certificate.source if certificate else "none"),
            ),
            certificate.assertions if certificate else (),
        ),
        _truncation_notes(m, window),
    )


@dataclass(frozen=True)
class KernelRow:
    degree: int
    dim: int
    elements: tuple[str, ...]
    modulo_truncation: bool = False

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "dim": self.dim,
            "elements": list(self.elements),
            "modulo_truncation": self.modulo_truncation,
        }


@dataclass(frozen=True)
class KernelTable:
    """Bases of Ker H^n(Delta_r) for the degrees where the kernel is nonzero."""

    model: str
    r: int
    cutoff: int
    rows: tuple[KernelRow, ...]

    def dimension(self, n: int) -> int:
        for row in self.rows:
            if row.degree == n:
                return row.dim
        return 0

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "r": self.r,
            "cutoff": self.cutoff,
            "rows": [row.as_dict() for row in self.rows],
        }


def zcl_kernel_table(f: FibrationPresentation, r: int, cutoff: int) -> KernelTable:
    _check_r(r)
    m = rfold_model(f, r)
    top = m.presentation.truncated_above
    rows = []
    for n, part in sorted(kernel_classes(m, cutoff).items()):
        slice_ = cohomology(m.presentation, n)
        elements = tuple(
            str(slice_.representative_poly([vector.get(i, QQ.zero) for i in range(slice_.dim)])) for vector in part.basis
        )
        rows.append(KernelRow(n, part.dim, elements, top is not None and n >= top))
    return KernelTable(f.name, r, cutoff, tuple(rows))


def _restricted(matrix: RationalMatrix, positions: tuple[int, ...]) -> RationalMatrix:
    return RationalMatrix.from_columns([matrix.column(j) for j in positions], matrix.rows)


def _cocycles_in_power(m: RFoldModel, k: int, n: int) -> list[Vector]:
    """Cocycles of degree n supported on the monomials of I^k, in difference coordinates."""
    dc = m.difference_coordinates
    positions = dc.power_slice(k, n).pivots
    if not positions:
        return []
    closed = kernel(_restricted(differential_matrix(dc.presentation, n), positions))
    return [{positions[i]: c for i, c in vector.items()} for vector in closed.basis]


@dataclass(frozen=True)
class HtcWitness:
    """
    A cocycle in I^{k+1} with nonzero class, proving HTC_r >= k + 1.

    ``element`` lives in the r-fold model and ``difference_form`` in its
    difference presentation.
    """

    r: int
    k: int
    degree: int
    element: GradedPoly
    difference_form: GradedPoly
    modulo_truncation: bool = False

    @property
    def bound(self) -> int:
        return self.k + 1


def htc_witness(f: FibrationPresentation, r: int, k: int, cutoff: int) -> Optional[HtcWitness]:
    """
    Search degrees 1..cutoff, ascending, for a non-exact cocycle in I^{k+1}.

    ``None`` means no witness exists in the window; since I^{k+2} lies in
    I^{k+1}, none exists for larger k either.
    """
    _check_r(r)
    if k < 0:
        raise ValueError("k must be non-negative")
    m = rfold_model(f, r)
    window, _ = certified_window(m, cutoff)
    dc = m.difference_coordinates
    top = m.presentation.truncated_above
    for n in range(1, window + 1):
        candidates = _cocycles_in_power(m, k + 1, n)
        if not candidates:
            continue
        exact = cohomology(dc.presentation, n).coboundaries
        for vector in candidates:
            if exact.contains(vector):
                continue
            difference_form = from_coordinates(dc.presentation.generators, n, vector)
            element = dc.to_copies.apply(difference_form)
            logger.info("HTC_%d witness for k = %d in degree %d: %s", r, k, n, element)
            return HtcWitness(r, k, n, element, difference_form, top is not None and n >= top)
    return None


@dataclass(frozen=True)
class WitnessCertificate:
    """Checks on a proposed HTC witness in the r-fold model."""

    k: int
    degree: int
    cocycle: bool
    in_power: bool
    exact: bool

    @property
    def valid(self) -> bool:
        return self.cocycle and self.in_power and not self.exact


def certify_witness(m: RFoldModel, element: GradedPoly, k: int) -> WitnessCertificate:
    """Check that ``element`` is a cocycle in I^{k+1} whose class is nonzero."""
    degree = element.degree
    if degree is None:
        raise ValueError("A witness must be a nonzero homogeneous element")
    slice_ = cohomology(m.presentation, degree)
    vector = coordinates(element, degree)
    cocycle = slice_.is_cocycle(vector)
    return WitnessCertificate(
        k,
        degree,
        cocycle,
        m.difference_coordinates.in_power(element, k + 1),
        cocycle and slice_.is_exact(vector),
    )


def _rank_off(vectors: tuple[Vector, ...], positions: tuple[int, ...]) -> int:
    dropped = set(positions)
    rows = [{j: c for j, c in v.items() if j not in dropped} for v in vectors]
    rows = [row for row in rows if row]
    if not rows:
        return 0
    width = 1 + max(j for row in rows for j in row)
    return RationalMatrix.from_row_vectors(rows, width).rank()


def rho_injective(m: RFoldModel, k: int, n: int) -> bool:
    """
    Is H^n(A) -> H^n(A / I^{k+1}) injective?

    Its kernel is (Z ∩ (I^{k+1} + B)) / B, which vanishes exactly when
    Z and B drop by the same amount once the I^{k+1} coordinates are cut.
    """
    dc = m.difference_coordinates
    positions = dc.power_slice(k + 1, n).pivots
    if not positions:
        return True
    slice_ = cohomology(dc.presentation, n)
    lost_cocycles = slice_.cocycles.dim - _rank_off(slice_.cocycles.basis, positions)
    lost_coboundaries = slice_.coboundaries.dim - _rank_off(slice_.coboundaries.basis, positions)
    return lost_cocycles == lost_coboundaries


def htc(
    f: FibrationPresentation,
    r: int,
    cutoff: int,
    config: Optional[EngineConfig] = None,
) -> ComputedValue:
    """
    Least k with H(rho_k) injective in degrees 1..cutoff.

    Window-limited unless H of the r-fold model is certified to vanish
    above the window. Gives up after ``config.max_htc_k``.
    """
    _check_r(r)
    config = config or get_default_config()
    max_k = config.max_htc_k if config.max_htc_k is not None else 12
    m = rfold_model(f, r)
    window, certificate = certified_window(m, cutoff)
    for k in range(max_k + 1):
        if all(rho_injective(m, k, n) for n in range(1, window + 1)):
            status = window_status(certificate, Status.WINDOW_LIMITED)
            logger.info("HTC_%d of %r = %d (%s) through degree %d", r, f, k, status.value, window)
            return ComputedValue(
                k,
                status,
                Provenance(
                    "htc",
                    f"least k with H(rho_k) injective through degree {window}",
                    (
                        ("r", str(r)),
                        ("cutoff", str(window)),
                        ("certificate", certificate.source if certificate else "none"),
                    ),
                    certificate.assertions if certificate else (),
                ),
                _truncation_notes(m, window),
            )
    return ComputedValue(
        max_k + 1,
        Status.AT_LEAST,
        Provenance("htc", f"H(rho_k) not injective for any k <= {max_k}", (("r", str(r)), ("cutoff", str(window)))),
        _truncation_notes(m, window),
    )


def tc_fiber_lower(f: FibrationPresentation, r: int, cutoff: int) -> ComputedValue:
    """
    TC_r(fiber), a lower bound for TC_r of the fibration.

    (r - 1) dim V for an untruncated all-odd fiber, else zcl_r of the
    fiber over a point.
    """
    _check_r(r)
    profile = oddness_profile(f)
    if profile.all_fiber_odd and f.total.truncated_above is None:
        return ComputedValue(
            (r - 1) * profile.dim_odd,
            Status.EXACT,
            Provenance(
                "fiber_tc_lower",
                f"TC_{r}(F) = (r - 1) dim V for an all-odd fiber",
                (("r", str(r)), ("dim_V", str(profile.dim_odd))),
            ),
        )
    inner = zcl(fiber_over_point(f), r, cutoff)
    return ComputedValue(
        inner.value,
        inner.status,
        Provenance(
            "fiber_tc_lower",
            f"TC_{r}(F) >= zcl_{r}(F -> *)",
            inner.provenance.inputs,
            inner.provenance.assertions,
        ),
        inner.notes,
    )

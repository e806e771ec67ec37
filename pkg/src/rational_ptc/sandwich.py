"""
Lower and upper bounds for TC_r[X -> B] assembled into one report.

Lower bounds: TC_r of the fiber, the zero-divisor cup-length and HTC
witnesses. Upper bounds: the odd-fiber formula, the odd-extension bound,
the dimension bound and the formal TNCZ equality. Every route that attains
the final bound is listed.
"""

import logging
from typing import Iterable, Optional

from .bounds import DimensionRoute, ExtensionRoute, FormalTnczRoute, OddFiberRoute
from .config import EngineConfig, get_default_config
from .exceptions import MissingDimension, NotOddFiber, SplitInvalid
from .fibration import FibrationPresentation
from .interfaces import AssertionSet, BoundEntry, BoundReport, ComputedValue, Provenance, Status, Strategy
from .invariants import htc_witness, tc_fiber_lower, zcl

logger = logging.getLogger(__name__)

_UNCERTIFIED = (Status.AT_LEAST, Status.WINDOW_LIMITED)


def _entry(side: str, value: ComputedValue) -> BoundEntry:
    return BoundEntry(side, value.value, value.status, value.provenance, value.notes)


def _upper_bounds(
    f: FibrationPresentation,
    r: int,
    cutoff: int,
    keep: Optional[Iterable[str]],
    notes: list[str],
) -> list[BoundEntry]:
    entries = []
    try:
        entries.append(_entry("upper", OddFiberRoute(f).evaluate(r)))
    except NotOddFiber as error:
        logger.debug("Odd-fiber route skipped: %s", error)

    if keep is not None:
        try:
            entries.append(_entry("upper", ExtensionRoute(f, keep, cutoff).evaluate(r)))
        except SplitInvalid as error:
            notes.append(f"odd-extension bound not applied: {error}")
        except MissingDimension as error:
            notes.append(f"odd-extension bound not applied: {error}")

    try:
        entries.append(_entry("upper", DimensionRoute(f).evaluate(r)))
    except MissingDimension as error:
        notes.append(f"dimension bound not applied: {error}")

    formal = FormalTnczRoute(f, cutoff)
    value = formal.evaluate(r)
    if value is not None:
        entries.append(_entry("upper", value))
    else:
        logger.debug("%r", formal)
    return entries


def _best(entries: list[BoundEntry], pick) -> Optional[int]:
    return pick(e.value for e in entries) if entries else None


def _witness_bounds(
    f: FibrationPresentation,
    r: int,
    cutoff: int,
    start: int,
    upper: Optional[int],
    max_k: int,
) -> list[BoundEntry]:
    entries = []
    k = start
    while k <= max_k and (upper is None or k < upper):
        witness = htc_witness(f, r, k, cutoff)
        if witness is None:
            break
        # a class nonzero in the truncated presentation may vanish in the full model
        if witness.modulo_truncation:
            notes: tuple[str, ...] = ("nontriviality holds modulo truncation",)
            status = Status.WINDOW_LIMITED
        else:
            notes, status = (), Status.EXACT
        entries.append(
            BoundEntry(
                "lower",
                witness.bound,
                status,
                Provenance(
                    "htc_witness",
                    f"non-exact cocycle in I^{k + 1} of degree {witness.degree}: {witness.element}",
                    (("r", str(r)), ("k", str(k)), ("degree", str(witness.degree))),
                ),
                notes,
            )
        )
        k += 1
    return entries


def tc_sandwich(
    f: FibrationPresentation,
    r: int,
    cutoff: int,
    assertions: Optional[AssertionSet] = None,
    keep: Optional[Iterable[str]] = None,
    config: Optional[EngineConfig] = None,
) -> BoundReport:
    """
    Bound TC_r[X -> B] from both sides.

    Raises:
        InconsistentResult: If a lower bound exceeds an upper bound
    """
    if r < 2:
        raise ValueError("The number of copies r must be at least 2")
    config = config or get_default_config()
    if assertions is not None:
        f = f.with_assertions(assertions)
    keep = None if keep is None else tuple(keep)
    notes: list[str] = []

    uppers = _upper_bounds(f, r, cutoff, keep, notes)
    upper = _best(uppers, min)

    lowers = [_entry("lower", tc_fiber_lower(f, r, cutoff))]
    lower = _best(lowers, max)
    zcl_value: Optional[ComputedValue] = None
    if config.strategy == Strategy.FULL or upper is None or (lower or 0) < upper:
        zcl_value = zcl(f, r, cutoff)
        lowers.append(_entry("lower", zcl_value))
        lower = _best(lowers, max)

    if config.search_htc_witness and (upper is None or (lower or 0) < upper):
        max_k = config.max_htc_k if config.max_htc_k is not None else 12
        lowers.extend(_witness_bounds(f, r, cutoff, lower or 0, upper, max_k))
        lower = _best(lowers, max)

    assert lower is not None
    lower_attained = [e for e in lowers if e.value == lower]
    upper_attained = [e for e in uppers if e.value == upper] if upper is not None else []

    if upper is not None and lower == upper:
        exact: Optional[int] = lower
        status = Status.EXACT if any(e.status == Status.EXACT for e in upper_attained) else Status.CONDITIONAL
    else:
        exact = None
        status = Status.WINDOW_LIMITED if any(e.status in _UNCERTIFIED for e in lowers) else Status.OPEN

    if zcl_value is not None and upper is not None and zcl_value.value < upper and exact is not None:
        notes.append(f"zcl_{r} = {zcl_value.value} < {exact} = TC_{r}: the zero-divisor cup-length is not sharp here")
    for entry in lower_attained + upper_attained:
        for note in entry.notes:
            if note not in notes:
                notes.append(note)

    used: list[str] = []
    for entry in upper_attained if exact is not None else lower_attained + upper_attained:
        used.extend(a for a in entry.provenance.assertions if a not in used)

    logger.info("TC_%d of %r: lower %s, upper %s (%s)", r, f, lower, upper, status.value)
    return BoundReport(
        f.name,
        r,
        cutoff,
        lower,
        tuple(e.provenance for e in lower_attained),
        upper,
        tuple(e.provenance for e in upper_attained),
        exact,
        status,
        tuple(used),
        tuple(lowers + uppers),
        tuple(notes),
    )

"""
Upper bound through an odd-degree extension.

If ``f`` is obtained from ``f_hat`` by adding m odd fiber generators, then
TC_r[f] <= TC_r[f_hat] + m (r - 1). TC_r[f_hat] is resolved by the first
route that applies: the odd-fiber formula, the formal TNCZ equality, or the
dimension bound.
"""

import logging
from typing import Iterable, Optional

from ..exceptions import NotOddFiber
from ..fibration import FibrationPresentation, extension_split
from ..interfaces import AssertionSet, ComputedValue, Provenance
from .dimension import DimensionRoute
from .formal import FormalTnczRoute
from .odd_fiber import OddFiberRoute

logger = logging.getLogger(__name__)


class ExtensionRoute:
    """TC_r[f] <= TC_r[f_hat] + m (r - 1) for a split keeping ``keep``."""

    def __init__(self, fibration: FibrationPresentation, keep: Iterable[str], cutoff: int):
        """
        Split the fibration.

        Args:
            fibration: Validated fibration presentation
            keep: Names of the fiber generators that stay in f_hat
            cutoff: Degree window for computations on f_hat

        Raises:
            SplitInvalid: If the split is not an odd-degree extension
        """
        self.fibration = fibration
        self.cutoff = cutoff
        self.split = extension_split(fibration, keep)

    def resolve_hat(self, r: int) -> ComputedValue:
        """
        An upper bound for TC_r[f_hat].

        Raises:
            MissingDimension: If no route applies to f_hat
        """
        f_hat = self.split.f_hat
        try:
            return OddFiberRoute(f_hat).evaluate(r)
        except NotOddFiber:
            pass
        formal = FormalTnczRoute(f_hat, self.cutoff).evaluate(r)
        if formal is not None:
            return formal
        logger.info("Falling back to the dimension bound for %r", f_hat)
        return DimensionRoute(f_hat).evaluate(r)

    def evaluate(self, r: int) -> ComputedValue:
        """
        The extension bound.

        Raises:
            MissingDimension: If TC_r[f_hat] cannot be bounded
        """
        inner = self.resolve_hat(r)
        m = self.split.m
        value = inner.value + m * (r - 1)
        discarded = ", ".join(self.split.discarded) or "none"
        return ComputedValue(
            value,
            inner.status,
            Provenance(
                "odd_extension_bound",
                f"TC_{r}[f_hat] + m(r - 1) = {inner.value} + {m}({r} - 1) via {inner.provenance.route}",
                (
                    ("r", str(r)),
                    ("m", str(m)),
                    ("discarded", discarded),
                    ("f_hat_route", inner.provenance.route),
                    ("f_hat_value", str(inner.value)),
                )
                + inner.provenance.inputs,
                inner.provenance.assertions,
            ),
            inner.notes,
        )

    def __repr__(self) -> str:
        return f"ExtensionRoute({self.fibration.name or 'f'}, m={self.split.m})"


def tc_extension_bound(
    f: FibrationPresentation,
    keep: Iterable[str],
    r: int,
    cutoff: int,
    assertions: Optional[AssertionSet] = None,
) -> ComputedValue:
    """
    Upper bound for TC_r through an odd-degree extension.

    Raises:
        SplitInvalid: If the split is not an odd-degree extension
        MissingDimension: If TC_r[f_hat] cannot be bounded
    """
    if assertions is not None:
        f = f.with_assertions(assertions)
    return ExtensionRoute(f, keep, cutoff).evaluate(r)


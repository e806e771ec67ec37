"""
Dimension-counting upper bound for TC_r.

TC_r[X -> B] <= floor((r dim F + dim B + 1) / 2), using formal dimensions
that are computed for finite presentations and declared otherwise.
"""

from ..exceptions import MissingDimension
from ..fibration import FibrationPresentation, base_dimension, fiber_dimension
from ..interfaces import ComputedValue, Provenance, Status


class DimensionRoute:
    """Upper bound from the formal dimensions of fiber and base."""

    def __init__(self, fibration: FibrationPresentation):
        """
        Initialize the dimension route.

        Args:
            fibration: Validated fibration presentation

        Raises:
            MissingDimension: If the fiber or base dimension is neither computable nor declared
        """
        fiber = fiber_dimension(fibration)
        if fiber is None:
            raise MissingDimension("The fiber dimension is not computable: declare dim_fiber or assert fiber_elliptic")
        base = base_dimension(fibration)
        if base is None:
            raise MissingDimension("The base dimension is not computable: declare dim_base")

        self.fibration = fibration
        self.fiber = fiber
        self.base = base

    def evaluate(self, r: int) -> ComputedValue:
        value = (r * self.fiber.degree + self.base.degree + 1) // 2
        conditional = self.fiber.conditional or self.base.conditional
        return ComputedValue(
            value,
            Status.CONDITIONAL if conditional else Status.EXACT,
            Provenance(
                "dimension_bound",
                f"floor((r dim F + dim B + 1) / 2) with dim F = {self.fiber.degree}, dim B = {self.base.degree}",
                (
                    ("r", str(r)),
                    ("dim_F", f"{self.fiber.degree} ({self.fiber.source})"),
                    ("dim_B", f"{self.base.degree} ({self.base.source})"),
                ),
                self.fiber.assertions + self.base.assertions,
            ),
        )

    def __repr__(self) -> str:
        return f"DimensionRoute(dim F = {self.fiber.degree}, dim B = {self.base.degree})"


def svarc_bound(f: FibrationPresentation, r: int) -> ComputedValue:
    """
    floor((r dim F + dim B + 1) / 2).

    Raises:
        MissingDimension: If a formal dimension is unavailable
    """
    return DimensionRoute(f).evaluate(r)

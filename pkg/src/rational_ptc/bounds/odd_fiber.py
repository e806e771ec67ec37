"""
Exact TC_r for fibrations whose fiber model is concentrated in odd degrees.

A free algebra on odd generators is finite, hence elliptic, and it is
minimal whenever it is a presentation of the kind accepted here, so the
value (r - 1) dim V applies without user assertions.
"""

from ..exceptions import NotOddFiber
from ..fibration import FibrationPresentation, oddness_profile
from ..interfaces import ComputedValue, Provenance, Status


class OddFiberRoute:
    """TC_r[X -> B] = (r - 1) dim V for an all-odd fiber."""

    def __init__(self, fibration: FibrationPresentation):
        """
        Initialize the odd-fiber route.

        Args:
            fibration: Validated fibration presentation

        Raises:
            NotOddFiber: If a fiber generator has even degree or the presentation is truncated
        """
        profile = oddness_profile(fibration)
        if not profile.all_fiber_odd:
            raise NotOddFiber(f"{fibration.name or 'The fiber'} has {profile.dim_even} even fiber generators")
        if fibration.total.truncated_above is not None:
            raise NotOddFiber("A truncated presentation does not list every fiber generator")

        self.fibration = fibration
        self.dim_v = profile.dim_odd

    def evaluate(self, r: int) -> ComputedValue:
        if r < 1:
            raise ValueError("The number of copies r must be at least 1")
        return ComputedValue(
            (r - 1) * self.dim_v,
            Status.EXACT,
            Provenance(
                "odd_fiber_formula",
                f"TC_{r} = (r - 1) dim V for an elliptic fiber concentrated in odd degrees",
                (("r", str(r)), ("dim_V", str(self.dim_v))),
            ),
        )

    def __repr__(self) -> str:
        return f"OddFiberRoute({self.fibration.name or 'f'}, dim V = {self.dim_v})"


def tc_odd_fiber(f: FibrationPresentation, r: int) -> ComputedValue:
    """
    Exact TC_r via the odd-fiber formula.

    Raises:
        NotOddFiber: If the fiber is not concentrated in odd degrees
    """
    return OddFiberRoute(f).evaluate(r)

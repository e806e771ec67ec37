"""
Unit tests for the upper-bound routes.

This module tests the odd-fiber formula, the dimension bound, the formal
TNCZ equality and the odd-degree extension bound.
"""

import pytest

from rational_ptc.bounds import (
    DimensionRoute,
    ExtensionRoute,
    FormalTnczRoute,
    OddFiberRoute,
    svarc_bound,
    tc_extension_bound,
    tc_odd_fiber,
)
from rational_ptc.cdga import CdgaPresentation
from rational_ptc.exceptions import MissingDimension, NotOddFiber, SplitInvalid
from rational_ptc.fibration import make_fibration, over_point
from rational_ptc.interfaces import AssertionSet, Block, Status

BASE = Block.BASE
FORMAL = AssertionSet(
    {"fiber_formal": "formal fiber", "fiber_elliptic": "elliptic fiber", "base_formal": "formal base"}
)


def not_tncz(assertions=None):
    total = CdgaPresentation.build([("x", 3, BASE), ("y", 3), ("z", 5)], {"z": "x*y"}, name="not_tncz")
    return make_fibration(total, assertions=assertions)


def ky():
    return over_point(CdgaPresentation.build([("x", 3), ("y", 3), ("z", 5)], {"z": "x*y"}, name="ky"))


def s4(assertions=FORMAL):
    return over_point(CdgaPresentation.build([("x", 4), ("z", 7)], {"z": "x^2"}, name="s4"), assertions=assertions)


def stiefel():
    total = CdgaPresentation.build(
        [("a", 6, BASE), ("b", 11, BASE), ("x", 4), ("y", 5), ("z", 7)],
        {"b": "a^2", "y": "2*a", "z": "x^2"},
        name="stiefel_n2",
    )
    return make_fibration(total, assertions=FORMAL, dim_base=6, dim_fiber=9)


class TestOddFiberRoute:
    """Test TC_r = (r - 1) dim V."""

    def test_odd_fiber(self):
        """Test TC_5 = 8 for the fiber S^3 x S^5."""
        value = OddFiberRoute(not_tncz()).evaluate(5)
        assert value.value == 8
        assert value.status == Status.EXACT
        assert value.provenance.route == "odd_fiber_formula"

    def test_nonformal_fiber(self):
        """Test TC_r of Λ(x, y, z; dz = xy) is 3(r - 1)."""
        assert tc_odd_fiber(ky(), 4).value == 9

    def test_even_generator(self):
        """Test the route refuses even fiber generators."""
        with pytest.raises(NotOddFiber):
            OddFiberRoute(s4())

    def test_truncated(self):
        """Test the route refuses truncated presentations."""
        total = CdgaPresentation.build([("y", 3)], truncated_above=8)
        with pytest.raises(NotOddFiber, match="truncated"):
            OddFiberRoute(over_point(total))


class TestDimensionRoute:
    """Test floor((r dim F + dim B + 1) / 2)."""

    def test_declared_dimensions(self):
        """Test the Stiefel fibration: floor((18 + 6 + 1) / 2) = 12."""
        value = svarc_bound(stiefel(), 2)
        assert value.value == 12
        assert value.status == Status.CONDITIONAL

    def test_computed_dimensions(self):
        """Test finite fiber and base give an unconditional bound."""
        value = DimensionRoute(not_tncz()).evaluate(2)
        assert value.value == (2 * 8 + 3 + 1) // 2
        assert value.status == Status.EXACT

    def test_missing_fiber_dimension(self):
        """Test an infinite fiber without declarations."""
        with pytest.raises(MissingDimension):
            DimensionRoute(s4(assertions=None))


class TestFormalTnczRoute:
    """Test TC_r = zcl_r for pure TNCZ fibrations."""

    def test_even_sphere(self):
        """Test TC_2(S^4) <= zcl_2(S^4) = 2."""
        route = FormalTnczRoute(s4(), 10)
        assert route.applicable()
        value = route.evaluate(2)
        assert value.value == 2
        assert value.status == Status.CONDITIONAL
        assert value.provenance.route == "formal_tncz_equality"
        assert "base_formal: formal base" in value.provenance.assertions

    def test_missing_assertions(self):
        """Test the route lists missing assertions."""
        route = FormalTnczRoute(s4(assertions=AssertionSet({"fiber_formal": "yes"})), 10)
        assert route.missing == ["fiber_elliptic", "base_formal"]
        assert route.evaluate(2) is None

    def test_not_pure(self):
        """Test a non-pure fibration is refused."""
        assert FormalTnczRoute(not_tncz(FORMAL), 10).missing == ["pure"]

    def test_not_tncz(self):
        """Test the Stiefel fibration fails TNCZ in degree 5."""
        assert FormalTnczRoute(stiefel(), 40).missing == ["tncz (fails in degree 5)"]

    def test_uncertified_zcl(self):
        """Test the route gives nothing when zcl is not certified in the window."""
        assert FormalTnczRoute(s4(), 6).evaluate(2) is None


class TestExtensionRoute:
    """Test TC_r[f] <= TC_r[f_hat] + m (r - 1)."""

    def test_stiefel(self):
        """Test discarding y: TC_2 <= zcl_2(f_hat) + 1 = 3."""
        route = ExtensionRoute(stiefel(), ["x", "z"], 40)
        value = route.evaluate(2)
        assert value.value == 3
        assert value.status == Status.CONDITIONAL
        inputs = dict(value.provenance.inputs)
        assert inputs["f_hat_route"] == "formal_tncz_equality"
        assert inputs["discarded"] == "y"

    def test_discard_all_odd(self):
        """Test discarding every generator of Λ(x, y, z; dz = xy) gives 3(r - 1)."""
        value = tc_extension_bound(ky(), [], 3, 20)
        assert value.value == 6
        assert value.status == Status.EXACT

    def test_odd_fiber_hat(self):
        """Test f_hat with fiber Λ(y) is resolved by the odd-fiber formula."""
        route = ExtensionRoute(not_tncz(), ["y"], 20)
        value = route.evaluate(2)
        assert dict(value.provenance.inputs)["f_hat_route"] == "odd_fiber_formula"
        assert value.value == 1 + 1

    def test_dimension_fallback(self):
        """Test f_hat is bounded by dimension when the formal route lacks assertions."""
        f = make_fibration(stiefel().total, AssertionSet({"fiber_elliptic": "S^4"}), dim_base=6, dim_fiber=9)
        value = ExtensionRoute(f, ["x", "z"], 40).evaluate(2)
        assert dict(value.provenance.inputs)["f_hat_route"] == "dimension_bound"
        # floor((2 * 4 + 6 + 1) / 2) + 1
        assert value.value == 8

    def test_invalid_split(self):
        """Test a split that does not close up."""
        with pytest.raises(SplitInvalid):
            tc_extension_bound(ky(), ["z"], 2, 20)

    def test_assertions_are_merged(self):
        """Test extra assertions reach f_hat."""
        bare = stiefel()
        bare = make_fibration(bare.total, dim_base=6, dim_fiber=9)
        with pytest.raises(MissingDimension):
            tc_extension_bound(bare, ["x", "z"], 2, 40)
        assert tc_extension_bound(bare, ["x", "z"], 2, 40, FORMAL).value == 3

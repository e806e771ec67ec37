"""
Unit tests for interfaces and value types.

This module tests generators, assertion sets, certificates and bound reports.
"""

import pytest

from rational_ptc.exceptions import InconsistentResult
from rational_ptc.interfaces import (
    AssertionSet,
    Block,
    BoundEntry,
    BoundReport,
    Generator,
    Provenance,
    Status,
    Strategy,
    VanishingCertificate,
)


class TestEnums:
    """Test enumeration values used on the wire."""

    def test_status_values(self):
        """Test the status strings used in reports."""
        assert [s.value for s in Status] == ["exact", "at_least", "conditional", "window_limited", "open"]

    def test_block_and_strategy_values(self):
        """Test block and strategy strings."""
        assert Block("base") == Block.BASE
        assert Strategy("auto") == Strategy.AUTO


class TestGenerator:
    """Test generator validation."""

    def test_parity(self):
        """Test odd and even generators."""
        assert Generator("x", 3, 0).is_odd
        assert not Generator("a", 4, 1).is_odd

    def test_degree_must_be_positive(self):
        """Test that degree zero is rejected."""
        with pytest.raises(ValueError):
            Generator("e", 0, 0)


class TestAssertionSet:
    """Test user assertions."""

    def test_has_and_describe(self):
        """Test flag lookup and descriptions."""
        assertions = AssertionSet({"fiber_formal": "S^4 is formal"})
        assert assertions.has("fiber_formal")
        assert not assertions.has("fiber_formal", "base_formal")
        assert assertions.describe("fiber_formal", "base_formal") == ("fiber_formal: S^4 is formal",)

    def test_unknown_flag(self):
        """Test that unknown flags are rejected."""
        with pytest.raises(ValueError, match="Unknown assertion flag"):
            AssertionSet({"fiber_simply_connected": "yes"})

    def test_vanishing_needs_degree(self):
        """Test cohomology_vanishes_above without a degree."""
        with pytest.raises(ValueError):
            AssertionSet({"cohomology_vanishes_above": "degree reasons"})

    def test_merged_prefers_other(self):
        """Test merging keeps both flag sets and the newer degree."""
        a = AssertionSet({"fiber_formal": "one", "cohomology_vanishes_above": "old"}, 10)
        b = AssertionSet({"fiber_formal": "two", "base_formal": "point"})
        merged = a.merged(b)
        assert merged.flags["fiber_formal"] == "two"
        assert merged.has("base_formal", "cohomology_vanishes_above")
        assert merged.vanishes_above == 10


class TestCertificatesAndBounds:
    """Test certificates and bound reports."""

    @pytest.mark.parametrize(
        "source, conditional",
        [
            ("finite_algebra", False),
            ("declared_top", False),
            ("declared_dim_fiber", True),
            ("elliptic_formula", True),
            ("cohomology_vanishes_above", True),
        ],
    )
    def test_certificate_conditional(self, source, conditional):
        """Test which certificate sources are unconditional."""
        assert VanishingCertificate(10, source).conditional is conditional

    def test_bound_entry_validation(self):
        """Test side and sign checks on bound entries."""
        provenance = Provenance("dimension_bound", "test")
        with pytest.raises(ValueError):
            BoundEntry("middle", 1, Status.EXACT, provenance)
        with pytest.raises(ValueError):
            BoundEntry("upper", -1, Status.EXACT, provenance)

    def test_report_rejects_crossed_bounds(self):
        """Test that a lower bound above the upper bound is inconsistent."""
        with pytest.raises(InconsistentResult):
            BoundReport("m", 2, 10, 4, (), upper=3)

    def test_report_exact_must_equal_lower(self):
        """Test that the exact value is the common bound."""
        with pytest.raises(InconsistentResult):
            BoundReport("m", 2, 10, 3, (), upper=3, exact=2)

    def test_provenance_as_dict(self):
        """Test the JSON shape of a provenance record."""
        provenance = Provenance("htc", "detail", (("r", "2"),), ("fiber_formal: yes",))
        assert provenance.as_dict() == {
            "route": "htc",
            "detail": "detail",
            "inputs": {"r": "2"},
            "assertions": ["fiber_formal: yes"],
        }

"""
Unit tests for the model file parser.

This module tests section parsing, assertion lines, error line numbers,
bundled model lookup and writing presentations back out.
"""

import pytest

from rational_ptc.cdga import CdgaPresentation
from rational_ptc.exceptions import LeibnizSquareNonzero, ParseError, ValidationError
from rational_ptc.expression_parser import format_poly
from rational_ptc.fibration import FibrationPresentation
from rational_ptc.interfaces import Block
from rational_ptc.model_parser import (
    build_presentation,
    bundled_models,
    parse_assertion,
    parse_model,
    parse_model_text,
    resolve_model_path,
    serialize_model,
)

SPHERE_BUNDLE = """
# unit tangent bundle of S^4
[meta]
name = tangent
dim_base = 4
assert.base_formal = S^4 is formal

[generators]
a = 4 base
b = 7 base
y = 3

[differential]
b = a^2
y = 2*a
"""


class TestSections:
    """Test splitting text into sections."""

    def test_parse_sections(self):
        """Test meta, generators and differentials with line numbers."""
        model = parse_model_text(SPHERE_BUNDLE)
        assert model.meta["name"] == "tangent"
        assert model.integer("dim_base") == 4
        assert model.generators == [("a", 4, Block.BASE), ("b", 7, Block.BASE), ("y", 3, Block.FIBER)]
        assert model.differential == {"b": "a^2", "y": "2*a"}
        assert model.differential_lines["y"] == 15
        assert model.assertions.has("base_formal")
        assert model.kind == "fibration"

    def test_comments_and_blank_lines(self):
        """Test that inline comments are dropped."""
        model = parse_model_text("[generators]\nx = 3  # odd\n")
        assert model.generators == [("x", 3, Block.FIBER)]

    def test_hash_in_meta_values(self):
        """Test that '#' inside a meta value is kept while entry comments elsewhere are dropped."""
        model = parse_model_text(
            "[meta]\nreference = C# notes, item #3\nassert.fiber_formal = see #3 of notes\n"
            "# full-line comment\n[generators]  # fiber first\nx = 4  # even\n"
        )
        assert model.meta["reference"] == "C# notes, item #3"
        assert model.assertions.flags["fiber_formal"] == "see #3 of notes"
        assert model.generators == [("x", 4, Block.FIBER)]

    @pytest.mark.parametrize(
        "text,line",
        [
            ("[nonsense]\n", 1),
            ("x = 3\n", 1),
            ("[generators]\nx 3\n", 2),
            ("[generators]\nx = three\n", 2),
            ("[generators]\nx = 0\n", 2),
            ("[generators]\nx = 3 total\n", 2),
            ("[generators]\nx = 3\nx = 5\n", 3),
            ("[generators]\n1x = 3\n", 2),
            ("[meta]\ncolour = blue\n", 2),
            ("[meta]\ndim_base = six\n", 2),
            ("[meta]\nkind = space\n", 2),
            ("[generators]\nx = 3\n[differential]\nx = \n", 4),
        ],
    )
    def test_malformed_lines(self, text, line):
        """Test that syntax errors carry their line number."""
        with pytest.raises(ParseError) as info:
            parse_model_text(text)
        assert info.value.line == line
        assert str(info.value).startswith(f"line {line}: ")

    def test_empty_generators(self):
        """Test a file without generators."""
        with pytest.raises(ParseError):
            parse_model_text("[meta]\nname = empty\n")


class TestAssertions:
    """Test assertion lines."""

    def test_flag_with_justification(self):
        """Test a plain flag."""
        assertions = parse_assertion("fiber_formal = spheres are formal")
        assert assertions.flags == {"fiber_formal": "spheres are formal"}

    def test_vanishing_degree(self):
        """Test cohomology_vanishes_above(N)."""
        assertions = parse_assertion("assert.cohomology_vanishes_above(14) = degree reasons")
        assert assertions.vanishes_above == 14

    @pytest.mark.parametrize(
        "text",
        [
            "fiber_shiny = yes",
            "fiber_formal",
            "fiber_formal = ",
            "cohomology_vanishes_above = no degree",
            "fiber_formal(3) = no degree allowed",
        ],
    )
    def test_invalid_assertions(self, text):
        """Test unknown flags, missing justifications and misplaced degrees."""
        with pytest.raises(ParseError):
            parse_assertion(text)


class TestBuild:
    """Test building validated presentations."""

    def test_fibration(self):
        """Test the sphere bundle loads as a fibration."""
        f = build_presentation(parse_model_text(SPHERE_BUNDLE))
        assert isinstance(f, FibrationPresentation)
        assert [g.name for g in f.fiber_generators] == ["y"]
        assert f.dim_base == 4

    def test_cdga_kind(self):
        """Test kind = cdga gives a plain presentation."""
        text = "[meta]\nkind = cdga\n[generators]\nx = 3\ny = 3\nz = 5\n[differential]\nz = x*y\n"
        a = build_presentation(parse_model_text(text))
        assert isinstance(a, CdgaPresentation)

    def test_undeclared_generator_in_expression(self):
        """Test that expressions may only name declared generators."""
        text = "[generators]\nx = 3\ny = 6\n[differential]\ny = x*q\n"
        with pytest.raises(ParseError) as info:
            build_presentation(parse_model_text(text))
        assert info.value.line == 5

    def test_differential_for_unknown_generator(self):
        """Test a differential line for a generator that was never declared."""
        with pytest.raises(ParseError):
            build_presentation(parse_model_text("[generators]\nx = 3\n[differential]\nq = x\n"))

    def test_base_only_fibration(self):
        """Test that a fibration needs a fiber generator."""
        with pytest.raises(ParseError):
            build_presentation(parse_model_text("[generators]\nx = 3 base\n"))

    def test_base_must_be_closed(self):
        """Test a base generator whose differential uses the fiber."""
        text = "[generators]\ny = 5\nb = 4 base\n[differential]\nb = y\n"
        with pytest.raises(ValidationError):
            build_presentation(parse_model_text(text))

    def test_bad_model_reports_line(self):
        """Test that d(d(w)) = x^3 is reported on the line of w."""
        with pytest.raises(LeibnizSquareNonzero) as info:
            parse_model("badmodel")
        assert info.value.generator == "w"
        assert info.value.line == 12


class TestBundledModels:
    """Test the models shipped with the package."""

    def test_bundled_names(self):
        """Test the list of bundled models."""
        names = bundled_models()
        assert "stiefel_n2" in names
        assert "hyperbolic_truncated" in names
        assert "badmodel" in names

    def test_resolve_with_and_without_suffix(self):
        """Test that names resolve with or without the suffix."""
        assert resolve_model_path("ky") == resolve_model_path("ky.model")

    def test_resolve_file_on_disk(self, tmp_path):
        """Test a path to a model file outside the package."""
        path = tmp_path / "sphere.model"
        path.write_text(SPHERE_BUNDLE)
        f = parse_model(path)
        assert f.name == "tangent"

    def test_name_from_file_stem(self, tmp_path):
        """Test that an unnamed model takes its file name."""
        path = tmp_path / "lonely.model"
        path.write_text("[generators]\ny = 3\n")
        assert parse_model(path).name == "lonely"

    def test_unknown_model(self):
        """Test a name that is neither a file nor bundled."""
        with pytest.raises(ParseError, match="bundled models"):
            resolve_model_path("no_such_model")

    def test_stiefel_declarations(self):
        """Test the declarations of the Stiefel bundle."""
        f = parse_model("stiefel_n2")
        assert f.dim_base == 6
        assert f.dim_fiber == 9
        assert f.assertions.has("fiber_formal")
        assert [g.name for g in f.base_generators] == ["a", "b"]

    def test_truncated_model(self):
        """Test the truncation marker and primed names."""
        f = parse_model("hyperbolic_truncated")
        assert f.total.truncated_above == 8
        assert "b'" in [g.name for g in f.base_generators]


class TestSerialize:
    """Test writing presentations back out."""

    def test_serialize_fibration(self):
        """Test that the Stiefel bundle reads back with the same data."""
        f = parse_model("stiefel_n2")
        g = build_presentation(parse_model_text(serialize_model(f)))
        assert isinstance(g, FibrationPresentation)
        assert g.total.generators == f.total.generators
        assert [format_poly(p) for p in g.total.differential] == [format_poly(p) for p in f.total.differential]
        assert g.assertions == f.assertions
        assert (g.dim_base, g.dim_fiber) == (6, 9)

    def test_serialize_cdga(self):
        """Test the kind line for a plain CDGA."""
        a = CdgaPresentation.build([("x", 3), ("y", 3), ("z", 5)], {"z": "x*y"}, name="ky")
        text = serialize_model(a)
        assert "kind = cdga" in text
        assert "z = x*y" in text

    def test_hash_survives_round_trip(self):
        """Test that a justification and reference containing '#' read back unchanged."""
        text = SPHERE_BUNDLE.replace("S^4 is formal", "see #3 of notes")
        text = text.replace("name = tangent", "name = tangent\nreference = table #2")
        f = build_presentation(parse_model_text(text))
        g = build_presentation(parse_model_text(serialize_model(f)))
        assert g.assertions.flags["base_formal"] == "see #3 of notes"
        assert g.reference == "table #2"
        assert g.assertions == f.assertions

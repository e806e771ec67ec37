"""
Model file parser module.

This module reads sectioned model files into validated presentations and
writes them back. A model file looks like::

    # comments start with '#'; outside [meta] they may follow an entry
    [meta]
    name = stiefel_n2
    dim_base = 6
    assert.fiber_formal = S^4 x S^5 is formal
    assert.cohomology_vanishes_above(14) = degree reasons

    [generators]
    a = 6 base
    x = 4 fiber

    [differential]
    b = a^2

Generators default to the fiber block. A file with ``kind = cdga`` in
``[meta]`` declares a plain CDGA instead of a fibration.
"""

import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .cdga import CdgaPresentation, validate
from .exceptions import ParseError
from .expression_parser import IDENTIFIER, format_poly, parse_poly
from .fibration import FibrationPresentation, make_fibration
from .graded import GradedPoly
from .interfaces import KNOWN_ASSERTIONS, AssertionSet, Block, Generator

logger = logging.getLogger(__name__)

SECTIONS = ("meta", "generators", "differential")
INTEGER_META = ("declared_top", "truncated_above", "dim_base", "dim_fiber")
TEXT_META = ("name", "reference", "kind")
MODEL_SUFFIX = ".model"

_SECTION = re.compile(r"^\[(?P<name>[A-Za-z_]+)\]$")
_INLINE_COMMENT = re.compile(r"\s+#.*$")
_ENTRY = re.compile(r"^(?P<key>[^=]+?)\s*=\s*(?P<value>.*)$")
_ASSERT_KEY = re.compile(r"^assert\.(?P<flag>[a-z_]+)(?:\((?P<degree>-?\d+)\))?$")

Presentation = Union[FibrationPresentation, CdgaPresentation]


@dataclass
class ModelFile:
    """The raw sections of a model file, with source line numbers."""

    source: str = "<string>"
    meta: dict[str, str] = field(default_factory=dict)
    generators: list[tuple[str, int, Block]] = field(default_factory=list)
    differential: dict[str, str] = field(default_factory=dict)
    generator_lines: dict[str, int] = field(default_factory=dict)
    differential_lines: dict[str, int] = field(default_factory=dict)
    assertions: AssertionSet = field(default_factory=AssertionSet)

    @property
    def kind(self) -> str:
        return self.meta.get("kind", "fibration")

    def integer(self, key: str) -> Optional[int]:
        value = self.meta.get(key)
        return int(value) if value is not None else None

    @property
    def lines(self) -> dict[str, int]:
        """Source line per generator, preferring the line of its differential."""
        return {**self.generator_lines, **self.differential_lines}


def parse_assertion(text: str, line: Optional[int] = None) -> AssertionSet:
    """
    Parse ``flag = justification`` or ``cohomology_vanishes_above(N) = justification``.

    The ``assert.`` prefix of model files is optional.

    Raises:
        ParseError: If the flag is unknown or the text is malformed
    """
    key, sep, justification = text.partition("=")
    key = key.strip()
    if not key.startswith("assert."):
        key = f"assert.{key}"
    match = _ASSERT_KEY.match(key)
    if not match:
        raise ParseError(f"Malformed assertion: {text.strip()}", line)
    flag = match.group("flag")
    if flag not in KNOWN_ASSERTIONS:
        raise ParseError(f"Unknown assertion flag: {flag}", line)
    justification = justification.strip() if sep else ""
    if not justification:
        raise ParseError(f"Assertion {flag} needs a justification", line)
    degree = match.group("degree")
    if flag == "cohomology_vanishes_above":
        if degree is None:
            raise ParseError("cohomology_vanishes_above needs a degree: cohomology_vanishes_above(N)", line)
        return AssertionSet({flag: justification}, int(degree))
    if degree is not None:
        raise ParseError(f"Assertion {flag} takes no degree", line)
    return AssertionSet({flag: justification})


def parse_model_text(text: str, source: str = "<string>") -> ModelFile:
    """
    Split model file text into sections.

    Raises:
        ParseError: On unknown sections, malformed lines, duplicates or bad values
    """
    model = ModelFile(source)
    section: Optional[str] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        uncommented = _INLINE_COMMENT.sub("", line)
        # meta values are free text and keep their '#'
        if section != "meta":
            line = uncommented
        if not line:
            continue

        header = _SECTION.match(uncommented)
        if header:
            section = header.group("name")
            if section not in SECTIONS:
                raise ParseError(f"Unknown section [{section}]", number)
            continue

        entry = _ENTRY.match(line)
        if section is None:
            raise ParseError("Entry outside of a section", number)
        if not entry:
            raise ParseError(f"Expected 'key = value', got: {line}", number)
        key, value = entry.group("key").strip(), entry.group("value").strip()

        if section == "meta":
            _parse_meta(model, key, value, number)
        elif section == "generators":
            _parse_generator(model, key, value, number)
        else:
            if key in model.differential:
                raise ParseError(f"Duplicate differential for {key}", number)
            if not value:
                raise ParseError(f"Empty differential for {key}", number)
            model.differential[key] = value
            model.differential_lines[key] = number

    if not model.generators:
        raise ParseError("The [generators] section is empty")
    return model


def _parse_meta(model: ModelFile, key: str, value: str, line: int) -> None:
    if key.startswith("assert."):
        model.assertions = model.assertions.merged(parse_assertion(f"{key} = {value}", line))
    elif key in INTEGER_META:
        try:
            model.meta[key] = str(int(value))
        except ValueError:
            raise ParseError(f"{key} must be an integer, got {value!r}", line)
    elif key in TEXT_META:
        if key == "kind" and value not in ("fibration", "cdga"):
            raise ParseError(f"kind must be 'fibration' or 'cdga', got {value!r}", line)
        model.meta[key] = value
    else:
        raise ParseError(f"Unknown meta key: {key}", line)


def _parse_generator(model: ModelFile, key: str, value: str, line: int) -> None:
    if not IDENTIFIER.fullmatch(key):
        raise ParseError(f"Invalid generator name: {key}", line)
    if key in model.generator_lines:
        raise ParseError(f"Duplicate generator {key}", line)
    parts = value.split()
    if not parts or len(parts) > 2:
        raise ParseError(f"Expected '{key} = <degree> [base|fiber]'", line)
    try:
        degree = int(parts[0])
    except ValueError:
        raise ParseError(f"Degree of {key} must be an integer, got {parts[0]!r}", line)
    if degree < 1:
        raise ParseError(f"Degree of {key} must be positive", line)
    block = Block.FIBER
    if len(parts) == 2:
        try:
            block = Block(parts[1])
        except ValueError:
            raise ParseError(f"Block of {key} must be 'base' or 'fiber', got {parts[1]!r}", line)
    model.generators.append((key, degree, block))
    model.generator_lines[key] = line


def build_presentation(model: ModelFile) -> Presentation:
    """
    Turn parsed sections into a validated presentation.

    Raises:
        ParseError: If an expression does not parse or names an undeclared generator
        ValidationError: If the presentation is not a CDGA or not a relative Sullivan algebra
    """
    gens = tuple(Generator(name, degree, i, block) for i, (name, degree, block) in enumerate(model.generators))
    names = {g.name: g.index for g in gens}
    for name in model.differential:
        if name not in names:
            raise ParseError(f"Differential given for undeclared generator {name}", model.differential_lines.get(name))
    images = tuple(
        parse_poly(model.differential[g.name], gens, names, model.differential_lines.get(g.name))
        if g.name in model.differential
        else GradedPoly.zero(gens)
        for g in gens
    )
    total = CdgaPresentation(
        gens,
        images,
        declared_top=model.integer("declared_top"),
        truncated_above=model.integer("truncated_above"),
        name=model.meta.get("name") or (Path(model.source).stem if model.source != "<string>" else ""),
    )
    if model.kind == "cdga":
        return validate(total, model.lines).presentation
    if not any(block == Block.FIBER for _, _, block in model.generators):
        raise ParseError("A fibration model needs at least one fiber generator (use kind = cdga otherwise)")
    fibration = make_fibration(
        total,
        assertions=model.assertions,
        dim_base=model.integer("dim_base"),
        dim_fiber=model.integer("dim_fiber"),
        reference=model.meta.get("reference", ""),
        lines=model.lines,
    )
    logger.info("Loaded %r from %s", fibration, model.source)
    return fibration


def bundled_models() -> list[str]:
    """Names of the models shipped with the package."""
    folder = resources.files("rational_ptc.models")
    return sorted(p.name[: -len(MODEL_SUFFIX)] for p in folder.iterdir() if p.name.endswith(MODEL_SUFFIX))


def resolve_model_path(name: Union[str, Path]) -> Path:
    """
    A path on disk, or the name of a bundled model with or without ``.model``.

    Raises:
        ParseError: If neither exists
    """
    path = Path(name)
    if path.is_file():
        return path
    stem = path.name[: -len(MODEL_SUFFIX)] if path.name.endswith(MODEL_SUFFIX) else path.name
    bundled = resources.files("rational_ptc.models") / f"{stem}{MODEL_SUFFIX}"
    if bundled.is_file():
        return Path(str(bundled))
    raise ParseError(f"No model file {name} (bundled models: {', '.join(bundled_models())})")


def read_model_file(name: Union[str, Path]) -> ModelFile:
    """
    Read and split a model file.

    Raises:
        ParseError: If the file cannot be read or is malformed
    """
    path = resolve_model_path(name)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        raise ParseError(f"Cannot read {path}: {error}")
    return parse_model_text(text, str(path))


def parse_model(name: Union[str, Path]) -> Presentation:
    """
    Load a model file (or bundled model name) as a validated presentation.

    Raises:
        ParseError: On IO or syntax errors, with the line number when known
        ValidationError: If the presentation fails validation
    """
    return build_presentation(read_model_file(name))


def serialize_model(presentation: Presentation) -> str:
    """Write a presentation in the model file format; parsing the result gives it back."""
    if isinstance(presentation, FibrationPresentation):
        total = presentation.total
        meta = [("name", total.name)]
        if presentation.reference:
            meta.append(("reference", presentation.reference))
        declared = [
            ("declared_top", total.declared_top),
            ("truncated_above", total.truncated_above),
            ("dim_base", presentation.dim_base),
            ("dim_fiber", presentation.dim_fiber),
        ]
        assertions = presentation.assertions
    else:
        total = presentation
        meta = [("name", total.name), ("kind", "cdga")]
        declared = [("declared_top", total.declared_top), ("truncated_above", total.truncated_above)]
        assertions = AssertionSet()

    out = ["[meta]"]
    out.extend(f"{key} = {value}" for key, value in meta if value)
    out.extend(f"{key} = {value}" for key, value in declared if value is not None)
    for flag, justification in assertions.flags.items():
        if flag == "cohomology_vanishes_above":
            out.append(f"assert.{flag}({assertions.vanishes_above}) = {justification}")
        else:
            out.append(f"assert.{flag} = {justification}")

    out += ["", "[generators]"]
    out.extend(f"{g.name} = {g.degree} {g.block.value}" for g in total.generators)
    out += ["", "[differential]"]
    out.extend(
        f"{g.name} = {format_poly(image)}" for g, image in zip(total.generators, total.differential) if not image.is_zero()
    )
    return "\n".join(out) + "\n"

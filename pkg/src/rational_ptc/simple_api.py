"""
Simple API for rational-ptc.

This module provides one-liner entry points for loading a model and
bounding TC_r without wiring the engine modules together by hand.
"""

from pathlib import Path
from typing import Iterable, Optional, Union

from .config import EngineConfig, default_max_degree, get_default_config
from .exceptions import ParseError
from .fibration import FibrationPresentation
from .interfaces import AssertionSet, BoundReport
from .model_parser import Presentation, parse_model
from .rfold import rfold_model
from .sandwich import tc_sandwich


def load_model(model: Union[str, Path]) -> Presentation:
    """
    Load a validated presentation from a model file or a bundled model name.

    Args:
        model: Path to a ``.model`` file, or the name of a bundled model

    Returns:
        FibrationPresentation, or CdgaPresentation for ``kind = cdga`` files

    Raises:
        ParseError: If the file cannot be read or parsed
        ValidationError: If the presentation fails validation

    Examples:
        >>> f = load_model("stiefel_n2")
        >>> g = load_model("models/my_bundle.model")
    """
    if not model:
        raise ParseError("Model name cannot be empty")
    return parse_model(model)


def get_bound_report(
    model: Union[str, Path, FibrationPresentation],
    r: int = 2,
    max_degree: Optional[int] = None,
    keep: Optional[Iterable[str]] = None,
    assertions: Optional[AssertionSet] = None,
    config: Optional[EngineConfig] = None,
) -> BoundReport:
    """
    Bound TC_r[X -> B] for a model.

    Args:
        model: A fibration, a model file path or a bundled model name
        r: Number of copies
        max_degree: Degree window; defaults to 2 x the degree sum of the r-fold model, capped
        keep: Fiber generators kept in the odd-degree extension, if that route should run
        assertions: Extra assertions on top of those in the model file
        config: Engine configuration

    Returns:
        BoundReport with lower and upper bounds and their provenance

    Raises:
        ValueError: If the model is a plain CDGA or r < 2

    Examples:
        >>> report = get_bound_report("stiefel_n2", r=2, keep=["x", "z"], max_degree=40)
        >>> report.exact
        3
    """
    f = model if isinstance(model, FibrationPresentation) else load_model(model)
    if not isinstance(f, FibrationPresentation):
        raise ValueError("Bounds need a fibration model, not a plain CDGA")
    config = config or get_default_config()
    if max_degree is None:
        max_degree = default_max_degree(rfold_model(f, r).presentation, config)
    return tc_sandwich(f, r, max_degree, assertions=assertions, keep=keep, config=config)

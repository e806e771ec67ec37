"""
Configuration management module.

This module provides utilities for creating, validating, and merging the
engine configuration shared by the library entry points and the CLI.
"""

import logging
from dataclasses import dataclass, fields, replace
from typing import TYPE_CHECKING, Any, Optional

from .interfaces import Strategy

if TYPE_CHECKING:
    from .cdga import CdgaPresentation

logger = logging.getLogger(__name__)


@dataclass
class EngineConfig:
    """Tunables for bound computations and reporting."""

    max_degree_cap: Optional[int] = None
    strategy: Optional[Strategy] = None
    search_htc_witness: Optional[bool] = None
    max_htc_k: Optional[int] = None
    rmax: Optional[int] = None
    json_indent: Optional[int] = None


def get_default_config() -> EngineConfig:
    """
    Get the default engine configuration.

    Returns:
        EngineConfig with every field set
    """
    return EngineConfig(
        max_degree_cap=48,
        strategy=Strategy.FULL,
        search_htc_witness=True,
        max_htc_k=12,
        rmax=5,
        json_indent=2,
    )


def create_config(**overrides: Any) -> EngineConfig:
    """
    Create a configuration from the defaults with keyword overrides.

    Args:
        **overrides: Field values to override; ``strategy`` may be given as a string

    Returns:
        Validated EngineConfig

    Raises:
        ValueError: If an override names an unknown field or the result is invalid
    """
    known = {f.name for f in fields(EngineConfig)}
    unknown = set(overrides) - known
    if unknown:
        raise ValueError(f"Unknown configuration fields: {', '.join(sorted(unknown))}")

    if isinstance(overrides.get("strategy"), str):
        try:
            overrides["strategy"] = Strategy(overrides["strategy"])
        except ValueError:
            raise ValueError(f"Unknown strategy: {overrides['strategy']}")

    config = merge_configs(get_default_config(), EngineConfig(**overrides))
    validate_config(config)
    return config


def merge_configs(base: EngineConfig, override: EngineConfig) -> EngineConfig:
    """
    Merge two configurations, with override taking precedence.

    Args:
        base: Base configuration
        override: Configuration to merge on top of base

    Returns:
        Merged EngineConfig
    """
    overrides = {k: v for k, v in override.__dict__.items() if v is not None}

    return replace(base, **overrides)


def validate_config(config: EngineConfig) -> None:
    """
    Validate an engine configuration.

    Args:
        config: Configuration to validate

    Raises:
        ValueError: If configuration is invalid
    """
    if config.max_degree_cap is None or config.max_degree_cap < 1:
        raise ValueError("max_degree_cap must be a positive integer")

    if not isinstance(config.strategy, Strategy):
        raise ValueError("strategy must be a Strategy")

    if config.max_htc_k is None or config.max_htc_k < 0:
        raise ValueError("max_htc_k must be non-negative")

    if config.rmax is None or config.rmax < 2:
        raise ValueError("rmax must be at least 2")

    if config.json_indent is not None and config.json_indent < 0:
        raise ValueError("json_indent must be non-negative")


def default_max_degree(presentation: "CdgaPresentation", config: Optional[EngineConfig] = None) -> int:
    """
    Default degree window for a presentation.

    Twice the sum of the generator degrees, capped at ``config.max_degree_cap``.
    """
    config = config or get_default_config()
    cap = config.max_degree_cap or 48
    wanted = 2 * sum(g.degree for g in presentation.generators)
    if wanted > cap:
        logger.warning("Degree window %d capped at %d; pass --max-degree to widen it", wanted, cap)
        return cap
    return wanted

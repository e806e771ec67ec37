"""
rational-ptc - exact bounds for sequential parametrized topological complexity.

This package computes cohomological lower bounds and theorem-based upper
bounds for TC_r of fibrations given by relative Sullivan models over the
rationals, using exact sparse linear algebra.
"""

__version__ = "0.1.0"

from .cdga import CdgaPresentation, cohomology, cuplength, validate
from .config import create_config, get_default_config, merge_configs, validate_config
from .fibration import FibrationPresentation, extension_split, make_fibration
from .genfun import diff_nil_check, fit_rational, series
from .interfaces import AssertionSet, BoundReport, ComputedValue, Status, Strategy
from .invariants import htc, htc_witness, tc_fiber_lower, zcl, zcl_kernel_table
from .model_parser import parse_model, serialize_model
from .rfold import rfold_model
from .sandwich import tc_sandwich
from .simple_api import get_bound_report, load_model

__all__ = [
    "AssertionSet",
    "BoundReport",
    "CdgaPresentation",
    "ComputedValue",
    "FibrationPresentation",
    "Status",
    "Strategy",
    "cohomology",
    "create_config",
    "cuplength",
    "diff_nil_check",
    "extension_split",
    "fit_rational",
    "get_bound_report",
    "get_default_config",
    "htc",
    "htc_witness",
    "load_model",
    "make_fibration",
    "merge_configs",
    "parse_model",
    "rfold_model",
    "series",
    "serialize_model",
    "tc_fiber_lower",
    "tc_sandwich",
    "validate",
    "validate_config",
    "zcl",
    "zcl_kernel_table",
]

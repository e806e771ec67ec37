"""
Command-line interface.

Usage::

    rational-ptc tc stiefel_n2 --r 2 --keep x,z --max-degree 40
    rational-ptc zcl ky --r 4 --json ky.json

Exit codes: 0 on success, 1 when a mathematical precondition fails, 2 on
parse or IO errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__
from .cdga import CdgaPresentation, betti_numbers, cohomology, validate
from .config import EngineConfig, create_config, default_max_degree
from .exceptions import InputError, MathematicalError, ParseError, PtcError
from .fibration import FibrationPresentation
from .genfun import diff_nil_check, series
from .interfaces import AssertionSet, Strategy
from .invariants import htc, htc_witness, zcl, zcl_kernel_table
from .model_parser import Presentation, parse_assertion, parse_model
from .report import (
    bound_report_dict,
    cohomology_dict,
    computed_value_dict,
    render_bound_report,
    render_diff_nil,
    render_kernel_table,
    render_series,
    render_value,
    render_witness,
    to_json,
    validation_dict,
    witness_dict,
)
from .rfold import rfold_model
from .sandwich import tc_sandwich

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MATH = 1
EXIT_INPUT = 2

COMMANDS = ("validate", "cohomology", "zcl", "kernel-table", "htc", "htc-witness", "tc", "genfun", "diffnil")
LOG_FORMAT = "%(name)s:%(levelname)s:%(message)s"


class FibrationRequired(MathematicalError):
    """A fibration command was run on a plain CDGA model."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rational-ptc",
        description="Exact rational bounds for sequential parametrized topological complexity.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for per-degree detail")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("model", help="model file path or bundled model name")
    parser.add_argument("--r", type=int, default=2, help="number of copies (default: 2)")
    parser.add_argument("--max-degree", type=int, default=None, help="degree window (default: 2 x sum of degrees, capped)")
    parser.add_argument("--keep", default=None, help="comma-separated fiber generators kept in the odd-degree extension")
    parser.add_argument(
        "--assert",
        dest="assertions",
        action="append",
        default=[],
        metavar="FLAG=JUSTIFICATION",
        help="add an assertion, e.g. fiber_formal='S^4 is formal'",
    )
    parser.add_argument("--json", dest="json_path", default=None, help="write the machine-readable report here ('-' for stdout)")
    parser.add_argument("--rmax", type=int, default=None, help="largest r for genfun and diffnil")
    parser.add_argument("--k", type=int, default=0, help="ideal power exponent for htc-witness (searches I^(k+1))")
    parser.add_argument("--strategy", choices=[s.value for s in Strategy], default=None)
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(format=LOG_FORMAT, level=level)


def _fibration(presentation: Presentation) -> FibrationPresentation:
    if not isinstance(presentation, FibrationPresentation):
        raise FibrationRequired(f"{presentation.name or 'The model'} is a plain CDGA; this command needs a fibration model")
    return presentation


def _window(args: argparse.Namespace, presentation: CdgaPresentation, config: EngineConfig) -> int:
    if args.max_degree is not None:
        if args.max_degree < 0:
            raise ParseError("--max-degree must be non-negative")
        return args.max_degree
    return default_max_degree(presentation, config)


def _rfold_window(args: argparse.Namespace, f: FibrationPresentation, r: int, config: EngineConfig) -> int:
    if args.max_degree is not None:
        return _window(args, f.total, config)
    return default_max_degree(rfold_model(f, r).presentation, config)


def _assertions(args: argparse.Namespace) -> Optional[AssertionSet]:
    result = None
    for text in args.assertions:
        parsed = parse_assertion(text)
        result = parsed if result is None else result.merged(parsed)
    return result


def _cmd_validate(args, presentation, config):
    total = presentation.total if isinstance(presentation, FibrationPresentation) else presentation
    report = validate(total)
    text = f"{total.name or args.model}: valid ({len(report.checked)} generators, d^2 = 0)"
    return text, validation_dict(report, presentation)


def _cmd_cohomology(args, presentation, config):
    total = presentation.total if isinstance(presentation, FibrationPresentation) else presentation
    cutoff = _window(args, total, config)
    betti = betti_numbers(total, cutoff)
    representatives = {
        n: [str(p) for p in cohomology(total, n).representative_polys()] for n in range(cutoff + 1) if betti[n]
    }
    lines = [f"H^*({total.name or args.model}) through degree {cutoff}"]
    lines.extend(f"  H^{n}: dim {betti[n]}  {', '.join(reps)}" for n, reps in representatives.items())
    return "\n".join(lines), cohomology_dict(total, betti, representatives)


def _cmd_zcl(args, presentation, config):
    f = _fibration(presentation)
    value = zcl(f, args.r, _rfold_window(args, f, args.r, config))
    return render_value(f"zcl_{args.r}[{f.name}]", value), computed_value_dict(value)


def _cmd_kernel_table(args, presentation, config):
    f = _fibration(presentation)
    table = zcl_kernel_table(f, args.r, _rfold_window(args, f, args.r, config))
    return render_kernel_table(table), table.as_dict()


def _cmd_htc(args, presentation, config):
    f = _fibration(presentation)
    value = htc(f, args.r, _rfold_window(args, f, args.r, config), config)
    return render_value(f"HTC_{args.r}[{f.name}]", value), computed_value_dict(value)


def _cmd_htc_witness(args, presentation, config):
    f = _fibration(presentation)
    witness = htc_witness(f, args.r, args.k, _rfold_window(args, f, args.r, config))
    return render_witness(witness, args.r, args.k), witness_dict(witness, args.r, args.k)


def _cmd_tc(args, presentation, config):
    f = _fibration(presentation)
    keep = _keep(args)
    report = tc_sandwich(f, args.r, _rfold_window(args, f, args.r, config), keep=keep, config=config)
    return render_bound_report(report), bound_report_dict(report)


def _cmd_genfun(args, presentation, config):
    f = _fibration(presentation)
    rmax = args.rmax or config.rmax
    cutoff = _rfold_window(args, f, rmax + 1, config)
    report = series(f, rmax, cutoff, strategy=config.strategy if args.strategy else None, keep=_keep(args), config=config)
    return render_series(report), report.as_dict()


def _cmd_diffnil(args, presentation, config):
    f = _fibration(presentation)
    rmax = args.rmax or config.rmax
    report = diff_nil_check(f, rmax, _rfold_window(args, f, rmax, config))
    return render_diff_nil(report), report.as_dict()


def _keep(args: argparse.Namespace) -> Optional[tuple[str, ...]]:
    if args.keep is None:
        return None
    return tuple(name.strip() for name in args.keep.split(",") if name.strip())


HANDLERS: dict[str, Callable] = {
    "validate": _cmd_validate,
    "cohomology": _cmd_cohomology,
    "zcl": _cmd_zcl,
    "kernel-table": _cmd_kernel_table,
    "htc": _cmd_htc,
    "htc-witness": _cmd_htc_witness,
    "tc": _cmd_tc,
    "genfun": _cmd_genfun,
    "diffnil": _cmd_diffnil,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command and return its exit code.

    Args:
        argv: Command-line arguments without the program name

    Returns:
        0 on success, 1 on a failed mathematical precondition, 2 on parse or IO errors
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        overrides = {}
        if args.strategy:
            overrides["strategy"] = args.strategy
        if args.rmax is not None:
            overrides["rmax"] = args.rmax
        config = create_config(**overrides)
        presentation = parse_model(args.model)
        extra = _assertions(args)
        if extra is not None:
            if not isinstance(presentation, FibrationPresentation):
                raise FibrationRequired("Assertions apply to fibration models only")
            presentation = presentation.with_assertions(extra)
        text, payload = HANDLERS[args.command](args, presentation, config)
    except InputError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_INPUT
    except (PtcError, ValueError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_MATH

    print(text)
    if args.json_path:
        document = to_json(args.command, payload, config.json_indent)
        if args.json_path == "-":
            sys.stdout.write(document)
        else:
            try:
                Path(args.json_path).write_text(document, encoding="utf-8")
            except OSError as error:
                print(f"error: cannot write {args.json_path}: {error}", file=sys.stderr)
                return EXIT_INPUT
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

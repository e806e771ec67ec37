"""
Report rendering module.

This module turns engine results into human-readable text and into the
machine-readable JSON document written by ``--json``. Every number in the
JSON document carries its status and provenance; keys are sorted so that
identical invocations produce identical output.
"""

import json
from typing import Any, Optional

from .cdga import CdgaPresentation, ValidationReport
from .fibration import FibrationPresentation
from .genfun import DiffNilReport, SeriesReport
from .interfaces import BoundEntry, BoundReport, ComputedValue, Provenance
from .invariants import HtcWitness, KernelTable

SCHEMA_VERSION = 1


def computed_value_dict(value: ComputedValue) -> dict:
    return {
        "value": value.value,
        "status": value.status.value,
        "provenance": value.provenance.as_dict(),
        "notes": list(value.notes),
    }


def bound_entry_dict(entry: BoundEntry) -> dict:
    return {
        "side": entry.side,
        "value": entry.value,
        "status": entry.status.value,
        "provenance": entry.provenance.as_dict(),
        "notes": list(entry.notes),
    }


def bound_report_dict(report: BoundReport) -> dict:
    return {
        "model": report.model,
        "r": report.r,
        "cutoff": report.cutoff,
        "lower": {"value": report.lower, "provenance": [p.as_dict() for p in report.lower_provenance]},
        "upper": {
            "value": report.upper,
            "provenance": [p.as_dict() for p in report.upper_provenance],
        },
        "exact": report.exact,
        "status": report.status.value,
        "assertions_used": list(report.assertions_used),
        "components": [bound_entry_dict(e) for e in report.components],
        "notes": list(report.notes),
    }


def witness_dict(witness: Optional[HtcWitness], r: int, k: int) -> dict:
    if witness is None:
        return {"r": r, "k": k, "found": False}
    return {
        "r": witness.r,
        "k": witness.k,
        "found": True,
        "degree": witness.degree,
        "element": str(witness.element),
        "difference_form": str(witness.difference_form),
        "bound": witness.bound,
        "modulo_truncation": witness.modulo_truncation,
    }


def validation_dict(report: ValidationReport, presentation: Any) -> dict:
    payload = {
        "model": report.presentation.name,
        "valid": True,
        "checked": list(report.checked),
        "finite": report.finite,
    }
    if isinstance(presentation, FibrationPresentation):
        total = presentation.total
        payload["nilpotence_order"] = [total.generators[i].name for i in presentation.nilpotence_order]
        payload["base"] = [g.name for g in presentation.base_generators]
        payload["fiber"] = [g.name for g in presentation.fiber_generators]
    return payload


def cohomology_dict(presentation: CdgaPresentation, betti: list[int], representatives: dict[int, list[str]]) -> dict:
    return {
        "model": presentation.name,
        "cutoff": len(betti) - 1,
        "betti": betti,
        "representatives": {str(n): reps for n, reps in representatives.items()},
    }


def to_json(command: str, payload: dict, indent: Optional[int] = 2) -> str:
    document = {"schema": SCHEMA_VERSION, "command": command, "result": payload}
    return json.dumps(document, sort_keys=True, indent=indent) + "\n"


def _provenance_line(provenance: Provenance) -> str:
    inputs = ", ".join(f"{k}={v}" for k, v in provenance.inputs)
    line = f"{provenance.route}: {provenance.detail}"
    if inputs:
        line += f" [{inputs}]"
    if provenance.assertions:
        line += f" assuming {'; '.join(provenance.assertions)}"
    return line


def render_value(label: str, value: ComputedValue) -> str:
    lines = [f"{label} = {value.value} ({value.status.value})", f"  via {_provenance_line(value.provenance)}"]
    lines.extend(f"  note: {note}" for note in value.notes)
    return "\n".join(lines)


def render_bound_report(report: BoundReport) -> str:
    upper = "unknown" if report.upper is None else str(report.upper)
    lines = [f"TC_{report.r}[{report.model}] (degrees <= {report.cutoff})"]
    if report.exact is not None:
        lines.append(f"  TC_{report.r} = {report.exact} ({report.status.value})")
    else:
        lines.append(f"  {report.lower} <= TC_{report.r} <= {upper} ({report.status.value})")
    lines.append(f"  lower bound {report.lower}:")
    lines.extend(f"    {_provenance_line(p)}" for p in report.lower_provenance)
    lines.append(f"  upper bound {upper}:")
    lines.extend(f"    {_provenance_line(p)}" for p in report.upper_provenance)
    others = [e for e in report.components if e.provenance not in report.lower_provenance + report.upper_provenance]
    if others:
        lines.append("  other routes:")
        lines.extend(f"    {e.side} {e.value} ({e.status.value}) {_provenance_line(e.provenance)}" for e in others)
    if report.assertions_used:
        lines.append("  assertions used:")
        lines.extend(f"    {a}" for a in report.assertions_used)
    lines.extend(f"  note: {note}" for note in report.notes)
    return "\n".join(lines)


def render_kernel_table(table: KernelTable) -> str:
    lines = [f"Ker H(diagonal) for {table.model}, r = {table.r}, degrees <= {table.cutoff}"]
    if not table.rows:
        lines.append("  (empty)")
    for row in table.rows:
        mark = " (modulo truncation)" if row.modulo_truncation else ""
        lines.append(f"  degree {row.degree}: dim {row.dim}{mark}")
        lines.extend(f"    {element}" for element in row.elements)
    return "\n".join(lines)


def render_witness(witness: Optional[HtcWitness], r: int, k: int) -> str:
    if witness is None:
        return f"No HTC_{r} witness in I^{k + 1} within the window"
    mark = " (modulo truncation)" if witness.modulo_truncation else ""
    return "\n".join(
        [
            f"HTC_{r} >= {witness.bound}{mark}",
            f"  degree {witness.degree} cocycle in I^{k + 1}, not exact: {witness.element}",
            f"  in difference coordinates: {witness.difference_form}",
        ]
    )


def render_series(report: SeriesReport) -> str:
    lines = [f"TC generating function of {report.model}: sum_r TC_(r+1) z^r"]
    for c in report.coefficients:
        shown = str(c.value) if c.value is not None else f"[{c.lower}, {c.upper if c.upper is not None else '?'}]"
        lines.append(f"  c_{c.r} = TC_{c.r + 1} = {shown} ({c.status.value}; {', '.join(c.routes)})")
    if report.fit is not None:
        lines.append(f"  F(z) = ({report.fit}) / (1 - z)^2, P(1) = {report.fit.p_at_1}")
    if report.cat_fiber is not None:
        lines.append(f"  cat(F) = {report.cat_fiber.value} ({report.cat_fiber.status.value})")
    lines.extend(f"  note: {note}" for note in report.notes)
    return "\n".join(lines)


def render_diff_nil(report: DiffNilReport) -> str:
    lines = [f"zcl_(r+1) - zcl_r >= cupl(F) = {report.cupl_fiber} for {report.model}"]
    for row in report.rows:
        verdict = "ok" if row.holds and row.kernel_maps_into_kernel else "VIOLATED"
        lines.append(
            f"  r = {row.r}: zcl_{row.r} = {row.zcl_r}, zcl_{row.r + 1} = {row.zcl_next}, "
            f"difference {row.difference} {verdict}"
        )
    return "\n".join(lines)

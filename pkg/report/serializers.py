"""
Report Serializers — iterfix

Turns every library report into plain dictionaries and renders them as
JSON, CSV or text.

Complex numbers become ``{"re": x, "im": y}`` objects in JSON and adjacent
``<name>_re`` / ``<name>_im`` columns in CSV.  Polynomials are written in
the comma-separated text form.  Non-finite floats are emitted as JSON
``Infinity`` / ``NaN``.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from typing import Any, Iterable, Sequence

from bounds.bound_checks import BoundReport, ScanSummary
from dynamics.periodic_points import FixedPointReport, PeriodicPoint, classify
from identities.trace_identity import CycleSumCheck, TraceReport
from poly.polynomial import Polynomial, format_polynomial
from search.multiplier_search import SearchResult

logger = logging.getLogger(__name__)

FORMATS: tuple[str, ...] = ("json", "csv", "text")


# ---------------------------------------------------------------------------
# Dictionaries
# ---------------------------------------------------------------------------

def complex_to_dict(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def complex_from_dict(data: dict) -> complex:
    return complex(float(data["re"]), float(data["im"]))


def polynomial_to_text(p: Polynomial | None) -> str | None:
    return None if p is None else format_polynomial(p)


def point_to_dict(pt: PeriodicPoint) -> dict:
    return {
        "location": complex_to_dict(pt.location),
        "multiplier": complex_to_dict(pt.multiplier),
        "abs_multiplier": pt.abs_multiplier,
        "multiplicity": pt.multiplicity,
        "exact_period": pt.exact_period,
        "cycle_id": pt.cycle_id,
        "class": classify(pt).value,
    }


def fixed_point_report_to_dict(report: FixedPointReport) -> dict:
    return {
        "n": report.n,
        "d": report.d,
        "points": [point_to_dict(pt) for pt in report.points],
        "count_with_multiplicity": report.total_count_with_multiplicity,
        "warnings": list(report.warnings),
    }


def trace_report_to_dict(report: TraceReport) -> dict:
    return {
        "n": report.n,
        "d": report.d,
        "c": complex_to_dict(report.c),
        "lhs": complex_to_dict(report.lhs),
        "rhs": complex_to_dict(report.rhs),
        "abs_residual": report.abs_residual,
        "rel_residual": report.rel_residual,
        "w_samples": [complex_to_dict(w) for w in report.w_samples],
        "c_samples": [complex_to_dict(c) for c in report.c_samples],
    }


def cycle_sum_to_dict(check: CycleSumCheck) -> dict:
    return {name: complex_to_dict(value) for name, value in check._asdict().items()}


def bound_report_to_dict(report: BoundReport) -> dict:
    return {
        "flavor": report.flavor.value,
        "polynomial": polynomial_to_text(report.polynomial),
        "n": report.n,
        "d": report.d,
        "threshold": report.threshold,
        "observed_max": report.observed_max,
        "margin": report.margin,
        "witness": point_to_dict(report.witness),
        "passed": report.passed,
    }


def scan_summary_to_dict(summary: ScanSummary) -> dict:
    return {
        "family": {
            "d": summary.d,
            "n": summary.n,
            "flavor": summary.flavor.value,
            "sampling": summary.sampling,
        },
        "seed": summary.seed,
        "sample_count": summary.sample_count,
        "skipped": summary.skipped,
        "min_observed_max": summary.min_observed_max,
        "min_margin": summary.min_margin,
        "argmin": polynomial_to_text(summary.argmin),
        "violations": [
            {"polynomial": polynomial_to_text(p), "report": bound_report_to_dict(r)}
            for p, r in summary.violations
        ],
    }


def search_result_to_dict(result: SearchResult) -> dict:
    cfg = result.config
    return {
        "config": {
            "d": cfg.d,
            "n": cfg.n,
            "flavor": cfg.flavor.value,
            "starts": cfg.starts,
            "iters_per_start": cfg.iters_per_start,
            "seed": cfg.seed,
            "simplex_init_scale": cfg.simplex_init_scale,
            "objective_tol": cfg.objective_tol,
            "domain_radius": cfg.domain_radius,
            "sampling": f"uniform in the polydisk of radius {cfg.domain_radius:g}",
        },
        "best_value": result.best_value,
        "best_params": list(result.best_params),
        "best_polynomial": polynomial_to_text(result.best_polynomial),
        "evaluations": result.evaluations,
        "per_start_bests": list(result.per_start_bests),
        "conjecture_floor": result.conjecture_floor,
        "below_floor": result.below_floor,
    }


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, allow_nan=True)


def _is_complex_dict(value: Any) -> bool:
    return isinstance(value, dict) and set(value) == {"re", "im"}


def flatten(doc: dict, prefix: str = "") -> dict:
    """
    One CSV row from a nested document.

    Complex objects split into ``_re``/``_im`` columns, nested objects join
    keys with ``_``, and lists are kept as JSON text.
    """
    row: dict = {}
    for key, value in doc.items():
        name = f"{prefix}{key}"
        if _is_complex_dict(value):
            row[f"{name}_re"] = value["re"]
            row[f"{name}_im"] = value["im"]
        elif isinstance(value, dict):
            row.update(flatten(value, f"{name}_"))
        elif isinstance(value, (list, tuple)):
            row[name] = json.dumps(value, allow_nan=True)
        else:
            row[name] = value
    return row


def render_csv(rows: Sequence[dict]) -> str:
    """Render already-flat rows; the header is the union of keys in first-seen order."""
    fieldnames: list[str] = []
    for row in rows:
        for key in row:
            if key not in fieldnames:
                fieldnames.append(key)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def csv_rows(doc: dict, table: str | None = None) -> list[dict]:
    """
    Rows for CSV output: one per entry of ``doc[table]`` (each carrying the
    document's scalar fields) or a single flattened row when *table* is None.
    """
    if table is None:
        return [flatten(doc)]
    shared = {k: v for k, v in doc.items() if not isinstance(v, (list, tuple, dict))}
    if not doc[table]:
        return [flatten(shared)]
    return [flatten({**shared, **entry}) for entry in doc[table]]


def _text_lines(value: Any, indent: int) -> Iterable[str]:
    pad = "  " * indent
    if _is_complex_dict(value):
        yield f"{pad}{complex(value['re'], value['im'])}"
    elif isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and not _is_complex_dict(item):
                yield f"{pad}{key}:"
                yield from _text_lines(item, indent + 1)
            else:
                yield from (f"{pad}{key}: {line.strip()}" for line in _text_lines(item, 0))
    elif isinstance(value, list):
        for i, item in enumerate(value):
            if isinstance(item, dict) and not _is_complex_dict(item):
                yield f"{pad}- [{i}]"
                yield from _text_lines(item, indent + 1)
            else:
                yield from (f"{pad}- {line.strip()}" for line in _text_lines(item, 0))
    else:
        yield f"{pad}{value}"


def render_text(doc: Any) -> str:
    return "\n".join(_text_lines(doc, 0)) + "\n"


def render(doc: dict, fmt: str, table: str | None = None) -> str:
    """Render *doc* in one of :data:`FORMATS`."""
    if fmt == "json":
        return render_json(doc) + "\n"
    if fmt == "csv":
        return render_csv(csv_rows(doc, table))
    if fmt == "text":
        return render_text(doc)
    raise ValueError(f"unknown output format {fmt!r}")

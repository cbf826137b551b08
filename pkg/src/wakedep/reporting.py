"""CSV emission for sweep results and dependability analytics.

Output is byte-deterministic: floats are rendered with ``repr`` (the
shortest round-trip form, locale-independent), rows end with a single
newline, and a zero detection probability renders its log10 column as
the literal ``-inf``.
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

SWEEP_HEADER = (
    "N,policy,wus_mode,detection_prob,log10_detection_prob,"
    "ci95_lo,ci95_hi,events,mean_reports,depletion_frac"
)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _quote(field: str) -> str:
    if any(c in field for c in (",", '"', "\n", "\r")):
        return '"' + field.replace('"', '""') + '"'
    return field


def _row(fields) -> str:
    return ",".join(_quote(_fmt(f)) for f in fields)


def _log10_or_sentinel(p: float) -> float:
    if math.isnan(p):
        return math.nan
    if p <= 0.0:
        return -math.inf
    return math.log10(p)


def render_sweep_csv(cells) -> str:
    """Render sweep cells in their deterministic emission order."""
    if not cells:
        raise ValueError("no sweep results to emit")
    lines = [SWEEP_HEADER]
    for cell in cells:
        r = cell.result
        lines.append(
            _row(
                [
                    cell.n_devices,
                    cell.policy,
                    cell.wus_mode,
                    r.detection_probability,
                    _log10_or_sentinel(r.detection_probability),
                    r.ci95_lo,
                    r.ci95_hi,
                    r.events_observed,
                    r.mean_reports_per_event,
                    r.depletion_fraction,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def render_analysis_csv(rows) -> str:
    """Render (model_id, metric, value) dependability rows."""
    lines = ["model_id,metric,value"]
    for model_id, metric, value in rows:
        lines.append(_row([model_id, metric, value]))
    return "\n".join(lines) + "\n"


def write_text(text: str, destination: str | Path) -> None:
    """Write to a path, or stdout when the destination is ``-``."""
    if str(destination) == "-":
        sys.stdout.write(text)
        return
    Path(destination).write_text(text, encoding="utf-8", newline="")


def emit_csv(cells, destination: str | Path) -> None:
    """Emit sweep results as CSV to ``destination``."""
    write_text(render_sweep_csv(cells), destination)

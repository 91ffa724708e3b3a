"""Delimited report writers.

All CSVs are comma separated with a header row, decimal points, line-feed
line endings, and full-precision floats (shortest round-trip repr).
"""

from __future__ import annotations

import io
from pathlib import Path

from .harness import RocPoint, TrialRecord, ValidationRow

ROC_HEADER = "param,pf,pd,n_h0,n_h1"
SURFACE_HEADER = "x,y,value"
VALIDATION_HEADER = "target_pf,theoretical_pd,empirical_pd,abs_error,empirical_pf,threshold"


def fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int,)):
        return str(value)
    return repr(float(value))


def roc_csv(points: list[RocPoint]) -> str:
    out = io.StringIO()
    out.write(ROC_HEADER + "\n")
    for p in points:
        out.write(
            f"{fmt(p.operating_parameter)},{fmt(p.empirical_pf)},{fmt(p.empirical_pd)},"
            f"{p.n_h0},{p.n_h1}\n"
        )
    return out.getvalue()


def surface_csv(xs, ys, values) -> str:
    out = io.StringIO()
    out.write(SURFACE_HEADER + "\n")
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            out.write(f"{fmt(x)},{fmt(y)},{fmt(values[i, j])}\n")
    return out.getvalue()


def validation_csv(rows: list[ValidationRow]) -> str:
    out = io.StringIO()
    out.write(VALIDATION_HEADER + "\n")
    for r in rows:
        out.write(
            f"{fmt(r.target_pf)},{fmt(r.theoretical_pd)},{fmt(r.empirical_pd)},"
            f"{fmt(r.abs_error)},{fmt(r.empirical_pf)},{fmt(r.threshold)}\n"
        )
    return out.getvalue()


def trial_record_header(n_users: int) -> str:
    cols = ["trial", "hypothesis"]
    cols += [f"s{i + 1}" for i in range(n_users)]
    cols += [f"d{i + 1}" for i in range(n_users)]
    cols += [f"y{i + 1}" for i in range(n_users)]
    cols += ["crisp", "decision"]
    return ",".join(cols)


def trial_record_row(record: TrialRecord) -> str:
    cells = [str(record.trial_index), "h1" if record.ground_truth else "h0"]
    cells += [fmt(s) for s in record.statistics]
    cells += [str(d) for d in record.local_decisions]
    cells += [fmt(y) for y in record.received]
    cells.append("" if record.crisp_value is None else fmt(record.crisp_value))
    cells.append(str(record.decision))
    return ",".join(cells)


def write_text(path, text: str) -> None:
    Path(path).write_text(text, newline="\n")

"""Estimate reports and their CSV form.

One report records one measured estimate instance.  The CSV schema is
``estimate_id,<param columns>,lhs,rhs_bound,ratio,trials,seed,runtime_ms``
with every float printed to 17 significant digits so parsing a row back
reproduces the doubles exactly.
"""

import csv
import math
from dataclasses import dataclass, field

FIXED_COLUMNS = ("lhs", "rhs_bound", "ratio", "trials", "seed", "runtime_ms")


@dataclass
class EstimateReport:
    estimate_id: str
    params: dict
    lhs: float
    rhs_bound: float
    trials: int
    seed: int
    runtime_ms: int = 0
    ratio: float = field(default=None)

    def __post_init__(self):
        if self.ratio is None:
            self.ratio = self.lhs / self.rhs_bound
        for name in ("lhs", "rhs_bound", "ratio"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {v!r}")


def _fmt(value):
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _parse_cell(text):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def write_reports_csv(path, reports, record_runtime=False):
    """Write reports sharing one param-key set.  Sorted param columns keep the
    layout canonical; runtime_ms is zeroed unless requested so identical
    command+seed runs produce byte-identical bodies."""
    if not reports:
        raise ValueError("no reports to write")
    keys = sorted(reports[0].params.keys())
    for r in reports:
        if sorted(r.params.keys()) != keys:
            raise ValueError("reports have inconsistent param keys")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["estimate_id", *keys, *FIXED_COLUMNS])
        for r in reports:
            runtime = r.runtime_ms if record_runtime else 0
            writer.writerow(
                [r.estimate_id]
                + [_fmt(r.params[k]) for k in keys]
                + [_fmt(r.lhs), _fmt(r.rhs_bound), _fmt(r.ratio), r.trials, r.seed, runtime]
            )


def read_reports_csv(path):
    """Inverse of write_reports_csv."""
    out = []
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    n_params = len(header) - 1 - len(FIXED_COLUMNS)
    keys = header[1 : 1 + n_params]
    for row in rows[1:]:
        params = {k: _parse_cell(v) for k, v in zip(keys, row[1 : 1 + n_params])}
        lhs, rhs, ratio, trials, seed, runtime = row[1 + n_params :]
        out.append(
            EstimateReport(
                estimate_id=row[0],
                params=params,
                lhs=float(lhs),
                rhs_bound=float(rhs),
                ratio=float(ratio),
                trials=int(trials),
                seed=int(seed),
                runtime_ms=int(runtime),
            )
        )
    return out

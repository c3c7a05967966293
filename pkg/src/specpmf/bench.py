"""Benchmark grids: preset x sample size x method, scored against ground truth.

Every cell samples once per (preset, size, trial) so all methods see the same
draw, runs each estimator from scratch, and records L1/L2/TV/KL errors against
the exact preset PMF.  An estimator failure never aborts the grid; it becomes
a row with status "failed: ..." and NaN metrics.  Given the same base seed the
whole run is deterministic, and rows come back in a canonical sort order.

Wall-clock timings are measured per cell but kept out of the serialized files
by default so that repeated runs are byte-identical; pass include_timings=True
(CLI: --timings) to add the column.
"""

import csv
import json
import math
import time
from dataclasses import dataclass
from statistics import median
from typing import Optional

import numpy as np

from . import rng, synthetic
from .estimator import empirical_pmf, estimate_auto, estimate_fixed_k
from .kde import kde_estimate

METHODS = ("spectral-auto", "spectral-fixed-k", "kde", "empirical")
DEFAULT_SIZES = (100, 500, 2500, 12500)

ROW_COLUMNS = ("preset", "n", "method", "trial", "l1", "l2", "tv",
               "kl_true_to_est", "k_used", "status")
SUMMARY_METRICS = ("l1", "l2", "tv", "kl_true_to_est")


@dataclass(frozen=True)
class ExperimentGrid:
    presets: tuple
    sample_sizes: tuple = DEFAULT_SIZES
    trials: int = 10
    methods: tuple = METHODS
    base_seed: int = 0
    fixed_k: int = 16

    def __post_init__(self):
        if not self.presets or not self.sample_sizes or not self.methods:
            raise ValueError("presets, sample_sizes and methods must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; known: {list(METHODS)}")


@dataclass
class MetricRow:
    preset: str
    n: int
    method: str
    trial: int
    l1: float
    l2: float
    tv: float
    kl_true_to_est: float
    k_used: Optional[int]
    wall_time: float
    status: str = "ok"


def error_metrics(p_true: np.ndarray, q: np.ndarray):
    """(l1, l2, kl) distances from the truth; kl is +inf where q misses mass."""
    diff = q - p_true
    l1 = float(np.abs(diff).sum())
    l2 = float(math.sqrt(np.dot(diff, diff)))
    mask = p_true > 0
    if np.any(q[mask] == 0.0):
        kl = math.inf
    else:
        kl = float(np.sum(p_true[mask] * np.log(p_true[mask] / q[mask])))
    return l1, l2, kl


def run_grid(grid: ExperimentGrid):
    """All MetricRows of the grid, canonically sorted."""
    specs = {name: synthetic.preset(name) for name in grid.presets}
    rows = []
    for preset_name in grid.presets:
        spec = specs[preset_name]
        truth = synthetic.pmf(spec)
        for n in grid.sample_sizes:
            for trial in range(grid.trials):
                seed = rng.derive_seed(grid.base_seed, preset_name, n, trial)
                batch = synthetic.sample(spec, n, seed)
                for method in grid.methods:
                    rows.append(
                        _run_cell(grid, preset_name, n, trial, method,
                                  batch.values, spec.support_size, truth)
                    )
    rows.sort(key=lambda r: (r.preset, r.n, r.method, r.trial))
    return rows


def _run_cell(grid, preset_name, n, trial, method, samples, support, truth):
    start = time.perf_counter()
    try:
        q, k_used = _estimate(method, samples, support, grid.fixed_k)
    except Exception as exc:  # failure rows instead of aborted grids
        return MetricRow(
            preset=preset_name, n=n, method=method, trial=trial,
            l1=math.nan, l2=math.nan, tv=math.nan, kl_true_to_est=math.nan,
            k_used=None, wall_time=time.perf_counter() - start,
            status=f"failed: {type(exc).__name__}: {exc}",
        )
    wall = time.perf_counter() - start
    l1, l2, kl = error_metrics(truth, q)
    return MetricRow(
        preset=preset_name, n=n, method=method, trial=trial,
        l1=l1, l2=l2, tv=l1 / 2.0, kl_true_to_est=kl,
        k_used=k_used, wall_time=wall,
    )


def _estimate(method, samples, support, fixed_k):
    if method == "spectral-auto":
        est = estimate_auto(samples, support)
        return est.q, est.k_used
    if method == "spectral-fixed-k":
        est = estimate_fixed_k(samples, fixed_k, support)
        return est.q, est.k_used
    if method == "kde":
        return kde_estimate(samples, support).q, None
    if method == "empirical":
        return empirical_pmf(samples, support).p, None
    raise ValueError(f"unknown method {method!r}")


def summarize(rows):
    """Mean/median/stddev per (preset, n, method) over the successful rows."""
    if not rows:
        raise ValueError("cannot summarize an empty row list")
    groups = {}
    for row in rows:
        groups.setdefault((row.preset, row.n, row.method), []).append(row)
    summary = []
    for (preset_name, n, method), bucket in sorted(groups.items()):
        ok = [r for r in bucket if r.status == "ok"]
        entry = {
            "preset": preset_name,
            "n": n,
            "method": method,
            "trials": len(bucket),
            "failed": len(bucket) - len(ok),
        }
        for metric in SUMMARY_METRICS:
            vals = [getattr(r, metric) for r in ok]
            entry[f"{metric}_mean"] = _mean(vals)
            entry[f"{metric}_median"] = median(vals) if vals else math.nan
            entry[f"{metric}_std"] = _std(vals)
        ks = [r.k_used for r in ok if r.k_used is not None]
        entry["k_used_mean"] = _mean(ks) if ks else math.nan
        summary.append(entry)
    return summary


def _mean(vals):
    return sum(vals) / len(vals) if vals else math.nan

def _std(vals):
    if not vals:
        return math.nan
    finite = [v for v in vals if math.isfinite(v)]
    if len(finite) < len(vals):
        return math.inf
    m = sum(finite) / len(finite)
    return math.sqrt(sum((v - m) ** 2 for v in finite) / len(finite))


# ---------------------------------------------------------------------------
# serialization (schemas documented in the README)
# ---------------------------------------------------------------------------


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf"
    return value


def row_to_dict(row: MetricRow, include_timings=False):
    d = {col: _json_value(getattr(row, col)) for col in ROW_COLUMNS}
    if include_timings:
        d["wall_time"] = row.wall_time
    return d


def write_rows_csv(rows, path, include_timings=False):
    columns = ROW_COLUMNS + (("wall_time",) if include_timings else ())
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(getattr(row, col)) for col in columns])


def write_rows_json(rows, path, include_timings=False):
    doc = {"rows": [row_to_dict(r, include_timings) for r in rows]}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def write_summary_csv(summary, path):
    columns = list(summary[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for entry in summary:
            writer.writerow([_fmt(entry[c]) for c in columns])


def write_summary_json(summary, path):
    doc = {"summary": [{k: _json_value(v) for k, v in entry.items()} for entry in summary]}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def format_summary_table(summary) -> str:
    """Fixed-width text table of the headline numbers."""
    headers = ("preset", "n", "method", "trials", "failed",
               "l1_mean", "l1_std", "l2_mean", "kl_median", "k_mean")
    rows = [headers]
    for e in summary:
        rows.append((
            e["preset"], str(e["n"]), e["method"], str(e["trials"]), str(e["failed"]),
            _num(e["l1_mean"]), _num(e["l1_std"]), _num(e["l2_mean"]),
            _num(e["kl_true_to_est_median"]), _num(e["k_used_mean"]),
        ))
    widths = [max(len(r[i]) for r in rows) for i in range(len(headers))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
             for row in rows]
    return "\n".join(lines)


def _num(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "-"
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return f"{x:.4f}"

"""Command-line interface: estimate PMFs, run benchmark grids, plot results.

Exit codes: 0 success, 2 usage or input parsing problems, 3 numerical failure
inside an estimator.  Set SPECPMF_LOG=debug|info|warning|error to control log
verbosity.  All commands are deterministic given their inputs, flags and
seeds.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import bench, svgplot, synthetic
from .errors import NumericalError, ParameterError
from .estimator import estimate_auto, estimate_fixed_k

log = logging.getLogger("specpmf")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specpmf",
        description="Spectral smoothing of empirical PMFs on integer supports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate a PMF from raw samples")
    est.add_argument("input", nargs="?", default="-",
                     help="samples file, or '-' for stdin (default)")
    mode = est.add_mutually_exclusive_group()
    mode.add_argument("--auto", action="store_true",
                      help="pick the basis size automatically (default)")
    mode.add_argument("--k", type=int, metavar="INT",
                      help="use a fixed number of basis vectors")
    est.add_argument("--support", type=int, metavar="INT",
                     help="force the support size (must exceed the max sample)")
    est.add_argument("--drop-zeros", action="store_true",
                     help="discard zero-valued samples before estimating")
    est.add_argument("--shift-min", action="store_true",
                     help="shift samples so the minimum becomes 0; the offset "
                          "is recorded and outputs use original coordinates")
    est.add_argument("--scale", type=float, metavar="FLOAT",
                     help="multiply values by FLOAT and round to integers")
    est.add_argument("--format", choices=("json", "csv"), default="json",
                     help="output format (default json)")
    est.add_argument("--column", metavar="NAME|IDX",
                     help="read CSV input, using this column (name or 0-based "
                          "index); default input format is one value per line")
    est.add_argument("--no-diagnostics", action="store_true",
                     help="omit diagnostics from JSON output")
    est.add_argument("--out", metavar="FILE", help="write here instead of stdout")
    est.set_defaults(func=_cmd_estimate)

    bn = sub.add_parser("bench", help="run synthetic benchmark grids")
    bn.add_argument("--presets", metavar="LIST",
                    help="comma-separated preset names (default: all)")
    bn.add_argument("--sizes", metavar="LIST",
                    help="comma-separated sample sizes (default: "
                         + ",".join(str(s) for s in bench.DEFAULT_SIZES) + ")")
    bn.add_argument("--trials", type=int, default=10, metavar="INT")
    bn.add_argument("--seed", type=int, default=0, metavar="INT")
    bn.add_argument("--methods", metavar="LIST",
                    help="comma-separated subset of: " + ", ".join(bench.METHODS))
    bn.add_argument("--fixed-k", type=int, default=16, metavar="INT",
                    help="k used by the spectral-fixed-k method")
    bn.add_argument("--timings", action="store_true",
                    help="include wall_time in result files (breaks "
                         "byte-for-byte reproducibility)")
    bn.add_argument("--out", default="bench-out", metavar="DIR",
                    help="output directory (default bench-out)")
    bn.set_defaults(func=_cmd_bench)

    pl = sub.add_parser("plot", help="render estimate files as a static SVG")
    pl.add_argument("estimates", nargs="+", metavar="FILE",
                    help="JSON estimate files produced by 'specpmf estimate'")
    pl.add_argument("--truth", metavar="FILE",
                    help="ground-truth PMF overlay (JSON array, or an object "
                         "with a 'pmf' or 'q' field)")
    pl.add_argument("--log-y", action="store_true", help="logarithmic y axis")
    pl.add_argument("--title", help="plot title")
    pl.add_argument("--out", default="plot.svg", metavar="FILE.svg")
    pl.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage errors (code 2) and --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"specpmf: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"specpmf: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"specpmf: numerical failure: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # contract: never leak a traceback to a pipeline
        log.debug("unexpected failure", exc_info=True)
        print(f"specpmf: unexpected failure: {type(exc).__name__}: {exc} "
              "(rerun with SPECPMF_LOG=debug for details)", file=sys.stderr)
        return 1


def entrypoint():
    raise SystemExit(main())


def _configure_logging():
    level = os.environ.get("SPECPMF_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------


def _cmd_estimate(args) -> int:
    values = _ingest(args)
    offset = 0
    if args.shift_min:
        offset = int(values.min())
        values = values - offset
    if values.min() < 0:
        raise ParameterError(
            "input contains negative values; rerun with --shift-min"
        )
    log.info("estimating from %d samples (offset %d)", values.size, offset)
    if args.k is not None:
        estimate = estimate_fixed_k(values, args.k, args.support)
    else:
        estimate = estimate_auto(values, args.support)

    n_support = estimate.q.size
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(("value", "probability"))
        for i, prob in enumerate(estimate.q):
            writer.writerow((offset + i, repr(float(prob))))
        _write_output(args.out, buf.getvalue())
    else:
        payload = {
            "n": int(values.size),
            "N": int(n_support),
            "k_used": int(estimate.k_used),
            "support_offset": offset,
            "q": [float(v) for v in estimate.q],
        }
        if not args.no_diagnostics:
            counts = np.bincount(values, minlength=n_support)
            diag = {"empirical": [float(c) / values.size for c in counts],
                    "degenerate_fallback": estimate.diagnostics.degenerate_fallback}
            if estimate.diagnostics.eigenvalues is not None:
                diag["eigenvalues"] = [float(v) for v in estimate.diagnostics.eigenvalues]
            if estimate.diagnostics.max_basis is not None:
                diag["max_basis"] = int(estimate.diagnostics.max_basis)
            if estimate.diagnostics.risk is not None:
                diag["risk_curve"] = [float(v) for v in estimate.diagnostics.risk.errors]
            payload["diagnostics"] = diag
        _write_output(args.out, json.dumps(payload) + "\n")
    return 0


def _ingest(args) -> np.ndarray:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        text = Path(args.input).read_text()
    if args.column is not None:
        raw = _parse_csv(text, args.column)
    else:
        raw = _parse_lines(text)
    if not raw:
        raise ParameterError("no samples found in input")
    values = np.array(raw, dtype=np.float64)
    if args.scale is not None:
        values = values * args.scale
    rounded = np.rint(values)
    if args.scale is None and not np.array_equal(rounded, values):
        bad = int(np.nonzero(rounded != values)[0][0])
        raise ParameterError(
            f"non-integer value {values[bad]!r} in input; pass --scale to quantize"
        )
    out = rounded.astype(np.int64)
    if args.drop_zeros:
        out = out[out != 0]
        if out.size == 0:
            raise ParameterError("no samples left after --drop-zeros")
    return out


def _parse_lines(text: str):
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        token = line.strip()
        if not token:
            continue
        try:
            values.append(float(token))
        except ValueError:
            raise ParameterError(f"line {lineno}: could not parse {token!r} as a number") from None
    return values


def _parse_csv(text: str, column: str):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        return []
    start = 0
    if column.lstrip("-").isdigit():
        idx = int(column)
        if idx < 0 or idx >= len(rows[0]):
            raise ParameterError(f"column index {idx} out of range for {len(rows[0])} columns")
        try:  # a non-numeric first cell is a header row
            float(rows[0][idx])
        except ValueError:
            start = 1
    else:
        header = rows[0]
        if column not in header:
            raise ParameterError(f"column {column!r} not found in header {header}")
        idx = header.index(column)
        start = 1
    values = []
    for lineno, row in enumerate(rows[start:], start + 1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if idx >= len(row):
            raise ParameterError(f"line {lineno}: row has no column {idx}")
        token = row[idx].strip()
        try:
            values.append(float(token))
        except ValueError:
            raise ParameterError(f"line {lineno}: could not parse {token!r} as a number") from None
    return values


def _write_output(out, text: str):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def _cmd_bench(args) -> int:
    presets = _split(args.presets) or list(synthetic.preset_names())
    for name in presets:
        synthetic.preset(name)  # unknown names exit 2 before any work
    try:
        sizes = [int(s) for s in _split(args.sizes)] or list(bench.DEFAULT_SIZES)
    except ValueError:
        raise ParameterError(f"--sizes must be a comma-separated integer list, got {args.sizes!r}") from None
    methods = tuple(_split(args.methods)) or bench.METHODS
    try:
        grid = bench.ExperimentGrid(
            presets=tuple(presets), sample_sizes=tuple(sizes), trials=args.trials,
            methods=methods, base_seed=args.seed, fixed_k=args.fixed_k,
        )
    except ValueError as exc:
        raise ParameterError(str(exc)) from None

    log.info("running grid: %d presets x %d sizes x %d trials x %d methods",
             len(presets), len(sizes), args.trials, len(methods))
    rows = bench.run_grid(grid)
    summary = bench.summarize(rows)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    bench.write_rows_csv(rows, outdir / "results.csv", include_timings=args.timings)
    bench.write_rows_json(rows, outdir / "results.json", include_timings=args.timings)
    bench.write_summary_csv(summary, outdir / "summary.csv")
    bench.write_summary_json(summary, outdir / "summary.json")

    print(bench.format_summary_table(summary))
    print(f"\nwrote results.csv, results.json, summary.csv, summary.json to {outdir}")
    return 0


def _split(text):
    if not text:
        return []
    return [part.strip() for part in text.split(",") if part.strip()]


# ---------------------------------------------------------------------------
# plot
# ---------------------------------------------------------------------------


def _cmd_plot(args) -> int:
    series = []
    bars = None
    support = None
    offset = None
    for path in args.estimates:
        doc = _load_json(path)
        if "q" not in doc:
            raise ParameterError(f"{path}: not an estimate file (missing 'q')")
        q = np.asarray(doc["q"], dtype=np.float64)
        this_offset = int(doc.get("support_offset", 0))
        if support is None:
            support, offset = q.size, this_offset
        elif q.size != support or this_offset != offset:
            raise ParameterError(
                f"{path}: support mismatch (N={q.size}, offset={this_offset}) "
                f"vs (N={support}, offset={offset})"
            )
        series.append((Path(path).stem, q))
        diag = doc.get("diagnostics") or {}
        if bars is None and "empirical" in diag:
            bars = np.asarray(diag["empirical"], dtype=np.float64)

    truth = None
    if args.truth:
        truth = _load_truth(args.truth)
        if truth.size != support:
            raise ParameterError(
                f"truth has {truth.size} cells but estimates have {support}"
            )
    svg = svgplot.render(series, bars=bars, truth=truth, log_y=args.log_y,
                         title=args.title)
    Path(args.out).write_text(svg)
    print(f"wrote {args.out}")
    return 0


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path}: invalid JSON ({exc})") from None


def _load_truth(path) -> np.ndarray:
    doc = _load_json(path)
    if isinstance(doc, list):
        return np.asarray(doc, dtype=np.float64)
    for key in ("pmf", "q"):
        if isinstance(doc, dict) and key in doc:
            return np.asarray(doc[key], dtype=np.float64)
    raise ParameterError(f"{path}: expected a JSON array or an object with 'pmf' or 'q'")

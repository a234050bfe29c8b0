#!/usr/bin/env python3
"""Kitaev-chain benchmark: two stacked panels, the estimate and its error
versus measurement count, for the adaptive-depth and deep-baseline series.

Inputs: the `adfcs kitaev` CSV plus its summary JSON (which carries the
dense-backend truth drawn as a horizontal line).
"""

import argparse
import json
import sys

from csvplot import FigureDataError, read_rows, stable_savefig


def build_series(rows):
    """{series: (shots, estimate, rmse)} from the CSV cells."""
    series = {}
    for row in rows:
        xs, est, err = series.setdefault(row["series"], ([], [], []))
        xs.append(int(row["shots"]))
        est.append(float(row["estimate"]))
        err.append(float(row["rmse"]))
    if not series:
        raise FigureDataError("no series to plot")
    return series


def render(series, summary, out_base):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax_est, ax_err) = plt.subplots(2, 1, figsize=(6.0, 6.4), sharex=True)
    labels = {
        "adaptive": f"adaptive d={summary.get('adaptive_depth', '?')}",
        "baseline": f"baseline d={summary.get('baseline_depth', '?')}",
    }
    for name, (xs, est, err) in sorted(series.items()):
        order = sorted(range(len(xs)), key=xs.__getitem__)
        xs_o = [xs[i] for i in order]
        ax_est.plot(xs_o, [est[i] for i in order], marker="o", label=labels.get(name, name))
        ax_err.plot(xs_o, [err[i] for i in order], marker="o", label=labels.get(name, name))
    ax_est.axhline(summary["truth"], color="black", linestyle=":", linewidth=1, label="truth")
    ax_est.set_ylabel("estimate")
    ax_est.set_xscale("log")
    ax_est.legend(fontsize=8)
    ax_err.set_xscale("log")
    ax_err.set_yscale("log")
    ax_err.set_xlabel("measurements")
    ax_err.set_ylabel("error")
    ax_err.legend(fontsize=8)
    fig.tight_layout()
    paths = stable_savefig(fig, out_base)
    plt.close(fig)
    return paths


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="inp", required=True, help="kitaev CSV")
    ap.add_argument("--summary", required=True, help="kitaev summary JSON")
    ap.add_argument("--out", dest="out", required=True, help="output path base (no extension)")
    args = ap.parse_args(argv)
    rows = read_rows(args.inp, ["series", "n", "d", "shots", "reps", "estimate", "abs_error", "rmse"])
    with open(args.summary) as fh:
        summary = json.load(fh)
    series = build_series(rows)
    for p in render(series, summary, args.out):
        print(p)
    return 0


if __name__ == "__main__":
    try:
        sys.exit(main())
    except FigureDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)

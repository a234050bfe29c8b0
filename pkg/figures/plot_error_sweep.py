#!/usr/bin/env python3
"""Estimation error vs measurement count, one panel per index set, one line
per circuit depth, on log-log axes with a shots^(-1/2) reference guide.

Input: the `adfcs sweep-error` CSV.
"""

import argparse
import sys

from csvplot import FigureDataError, read_rows, stable_savefig


def build_panels(rows):
    """{S: {d: (shots, rmse)}} from estimable rows only."""
    panels = {}
    for row in rows:
        if row["estimable"] != "1" or row["rmse"] == "":
            continue
        depth_map = panels.setdefault(row["S"], {})
        xs, ys = depth_map.setdefault(int(row["d"]), ([], []))
        xs.append(int(row["shots"]))
        ys.append(float(row["rmse"]))
    if not panels:
        raise FigureDataError("no estimable rows to plot")
    return panels


def render(panels, out_base):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    count = len(panels)
    ncol = min(count, 3)
    nrow = (count + ncol - 1) // ncol
    fig, axes = plt.subplots(nrow, ncol, figsize=(3.6 * ncol, 3.2 * nrow), squeeze=False)
    for ax, (s, depth_map) in zip(axes.reshape(-1), sorted(panels.items())):
        for d, (xs, ys) in sorted(depth_map.items()):
            order = sorted(range(len(xs)), key=xs.__getitem__)
            ax.plot([xs[i] for i in order], [ys[i] for i in order], marker="o", label=f"d={d}")
        # reference slope -1/2, anchored to the first series' first point
        d0, (xs0, ys0) = sorted(depth_map.items())[0]
        x0, y0 = min(xs0), ys0[xs0.index(min(xs0))]
        xs_ref = sorted(set(x for xs, _ in depth_map.values() for x in xs))
        ax.plot(
            xs_ref,
            [y0 * (x0 / x) ** 0.5 for x in xs_ref],
            linestyle=":",
            color="gray",
            label="shots$^{-1/2}$",
        )
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_title(f"S = {s}", fontsize=9)
        ax.set_xlabel("measurements")
        ax.set_ylabel("error")
        ax.legend(fontsize=6)
    for ax in axes.reshape(-1)[count:]:
        ax.axis("off")
    fig.tight_layout()
    paths = stable_savefig(fig, out_base)
    plt.close(fig)
    return paths


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="inp", required=True, help="sweep-error CSV")
    ap.add_argument("--out", dest="out", required=True, help="output path base (no extension)")
    args = ap.parse_args(argv)
    rows = read_rows(
        args.inp, ["S", "k", "d_int", "n", "d", "shots", "reps", "alpha", "rmse", "estimable"]
    )
    panels = build_panels(rows)
    for p in render(panels, args.out):
        print(p)
    return 0


if __name__ == "__main__":
    try:
        sys.exit(main())
    except FigureDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)

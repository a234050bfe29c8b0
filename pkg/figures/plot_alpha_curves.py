#!/usr/bin/env python3
"""Channel-eigenvalue curves: one line per (index set, method) over depth.

Input: the `adfcs alpha-curves` CSV (columns n, S, d, alpha_exact,
alpha_product, alpha_lazy).
"""

import argparse
import sys

from csvplot import FigureDataError, read_rows, stable_savefig

METHOD_COLUMNS = [("alpha_exact", "exact"), ("alpha_product", "pair product"), ("alpha_lazy", "lazy walk")]


def build_series(rows):
    """{(S, method_label): (depths, alphas)} straight from the CSV cells."""
    series = {}
    for row in rows:
        for col, label in METHOD_COLUMNS:
            if row[col] == "":
                continue
            xs, ys = series.setdefault((row["S"], label), ([], []))
            xs.append(int(row["d"]))
            ys.append(float(row[col]))
    return series


def render(series, out_base):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (s, label), (xs, ys) in sorted(series.items()):
        order = sorted(range(len(xs)), key=xs.__getitem__)
        ax.plot(
            [xs[i] for i in order],
            [ys[i] for i in order],
            marker="o" if label == "exact" else None,
            linestyle="-" if label == "exact" else "--",
            label=f"S={s} ({label})",
        )
    ax.set_xlabel("circuit depth d")
    ax.set_ylabel("channel eigenvalue")
    ax.set_yscale("log")
    ax.legend(fontsize=7)
    fig.tight_layout()
    paths = stable_savefig(fig, out_base)
    plt.close(fig)
    return paths


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="inp", required=True, help="alpha-curves CSV")
    ap.add_argument("--out", dest="out", required=True, help="output path base (no extension)")
    args = ap.parse_args(argv)
    rows = read_rows(args.inp, ["n", "S", "d", "alpha_exact", "alpha_product", "alpha_lazy"])
    series = build_series(rows)
    for p in render(series, args.out):
        print(p)
    return 0


if __name__ == "__main__":
    try:
        sys.exit(main())
    except FigureDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)

"""Figure-script tests: artifacts are produced through the installed CLI
(the scripts' only upstream interface), rendered, and every plotted value
is traced back to its CSV cell."""

import csv
import json
import os
import subprocess
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import plot_alpha_curves
import plot_error_sweep
import plot_kitaev
from csvplot import FigureDataError, read_rows


@pytest.fixture(scope="module")
def artifacts(tmp_path_factory):
    out = tmp_path_factory.mktemp("artifacts")
    base = [sys.executable, "-m", "adfcs.cli"]
    subprocess.run(
        base + ["alpha-curves", "--n", "6", "--depths", "1,3,5", "--observable", "1 4",
                "--observable", "1 2 3 6", "--seed", "2", "--out", str(out)],
        check=True,
    )
    subprocess.run(
        base + ["sweep-error", "--n", "6", "--depths", "3,5", "--observable", "1 4",
                "--observable", "2 9", "--shots", "10,40", "--reps", "4", "--seed", "2",
                "--out", str(out)],
        check=True,
    )
    subprocess.run(
        base + ["kitaev", "--n", "4", "--adaptive-depth", "3", "--shots", "10,40",
                "--reps", "4", "--seed", "2", "--out", str(out)],
        check=True,
    )
    return out


def _csv_rows(path):
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def test_alpha_curves_series_trace_to_cells(artifacts):
    path = artifacts / "alpha_curves.csv"
    rows = read_rows(str(path), ["n", "S", "d", "alpha_exact", "alpha_product", "alpha_lazy"])
    series = plot_alpha_curves.build_series(rows)
    # 2 sets x (exact, product) plus lazy for the 2-local set
    assert len(series) == 5
    raw = _csv_rows(path)
    for (s, label), (xs, ys) in series.items():
        col = {"exact": "alpha_exact", "pair product": "alpha_product", "lazy walk": "alpha_lazy"}[label]
        for d, v in zip(xs, ys):
            match = [r for r in raw if r["S"] == s and int(r["d"]) == d]
            assert match and float(match[0][col]) == v


def test_alpha_curves_renders(artifacts, tmp_path):
    out = tmp_path / "curves"
    code = plot_alpha_curves.main(
        ["--in", str(artifacts / "alpha_curves.csv"), "--out", str(out)]
    )
    assert code == 0
    for ext in (".png", ".svg"):
        p = str(out) + ext
        assert os.path.exists(p) and os.path.getsize(p) > 0


def test_error_sweep_panels_and_render(artifacts, tmp_path):
    path = artifacts / "error_sweep.csv"
    rows = read_rows(path, ["S", "k", "d_int", "n", "d", "shots", "reps", "alpha", "rmse", "estimable"])
    panels = plot_error_sweep.build_panels(rows)
    assert set(panels) == {"1+4", "2+9"}
    for s, depth_map in panels.items():
        assert set(depth_map) == {3, 5}
    raw = _csv_rows(path)
    for s, depth_map in panels.items():
        for d, (xs, ys) in depth_map.items():
            for m, v in zip(xs, ys):
                match = [
                    r for r in raw
                    if r["S"] == s and int(r["d"]) == d and int(r["shots"]) == m
                ]
                assert match and float(match[0]["rmse"]) == v
    out = tmp_path / "sweep"
    assert plot_error_sweep.main(["--in", str(path), "--out", str(out)]) == 0
    assert os.path.getsize(str(out) + ".png") > 0
    assert os.path.getsize(str(out) + ".svg") > 0


def test_kitaev_render_and_truth_line(artifacts, tmp_path):
    path = artifacts / "kitaev.csv"
    rows = read_rows(path, ["series", "n", "d", "shots", "reps", "estimate", "abs_error", "rmse"])
    series = plot_kitaev.build_series(rows)
    assert set(series) == {"adaptive", "baseline"}
    raw = _csv_rows(path)
    for name, (xs, est, err) in series.items():
        for m, e, r in zip(xs, est, err):
            match = [r2 for r2 in raw if r2["series"] == name and int(r2["shots"]) == m]
            assert match and float(match[0]["estimate"]) == e and float(match[0]["rmse"]) == r
    out = tmp_path / "kitaev"
    code = plot_kitaev.main(
        ["--in", str(path), "--summary", str(artifacts / "kitaev_summary.json"), "--out", str(out)]
    )
    assert code == 0
    summary = json.loads((artifacts / "kitaev_summary.json").read_text())
    assert "truth" in summary
    assert os.path.getsize(str(out) + ".png") > 0


def test_empty_csv_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# provenance\nn,S,d,alpha_exact,alpha_product,alpha_lazy\n")
    with pytest.raises(FigureDataError):
        read_rows(str(empty), ["n", "S"])
    missing = tmp_path / "missing.csv"
    missing.write_text("a,b\n1,2\n")
    with pytest.raises(FigureDataError):
        read_rows(str(missing), ["a", "zz"])
    # no image file is produced on error
    code_path = tmp_path / "img"
    with pytest.raises(FigureDataError):
        plot_alpha_curves.main(["--in", str(empty), "--out", str(code_path)])
    assert not os.path.exists(str(code_path) + ".png")


def test_figures_byte_stable(artifacts, tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    args = ["--in", str(artifacts / "alpha_curves.csv")]
    plot_alpha_curves.main(args + ["--out", str(a)])
    plot_alpha_curves.main(args + ["--out", str(b)])
    for ext in (".png", ".svg"):
        assert open(str(a) + ext, "rb").read() == open(str(b) + ext, "rb").read()

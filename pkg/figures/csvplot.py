"""Shared CSV loading for the figure scripts.

The figure scripts are read-only consumers of the experiment artifacts:
every plotted number comes straight out of a CSV cell (or the companion
summary JSON); the only transforms applied are axis scales.
"""

import csv


class FigureDataError(ValueError):
    pass


def read_rows(path, required_columns):
    """Rows of an experiment CSV as dicts, skipping '#' provenance lines."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    missing = set(required_columns) - set(reader.fieldnames or ())
    if missing:
        raise FigureDataError(f"{path}: missing columns {sorted(missing)}")
    rows = list(reader)
    if not rows:
        raise FigureDataError(f"{path}: no data rows")
    return rows


def stable_savefig(fig, out_base):
    """Write PNG and SVG with byte-stable output for fixed inputs."""
    import matplotlib

    matplotlib.rcParams["svg.hashsalt"] = "adfcs-figures"
    png = f"{out_base}.png"
    svg = f"{out_base}.svg"
    fig.savefig(png, dpi=160)
    fig.savefig(svg, metadata={"Date": None})
    return png, svg

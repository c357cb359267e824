"""Figure rendering: training convergence curves and sweep comparisons.

Writes PNG images at a fixed size and DPI. Every input table is validated and
fully read before the first byte of output, so a bad request never leaves a
file behind. Input CSVs are only ever opened for reading.
"""

import os
import struct
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")  # batch report generator, no interactive windows

import matplotlib.pyplot as plt
import numpy as np

from .plotspec import PlotInputError, load_table, moving_average, validate_spec

DPI = 120
FIGSIZE = (7.0, 4.5)


@dataclass(frozen=True)
class RenderResult:
    """What a render call produced: the image file and the plotted series."""

    out_path: str
    width_px: int
    height_px: int
    series: tuple  # (label, x array, y array) per plotted line


def png_dimensions(path):
    """Width and height of a PNG file, read from its header."""
    with open(path, "rb") as fh:
        head = fh.read(24)
    if head[:8] != b"\x89PNG\r\n\x1a\n" or head[12:16] != b"IHDR":
        raise ValueError(f"{path}: not a PNG file")
    width, height = struct.unpack(">II", head[16:24])
    return int(width), int(height)


def _axis_label(column):
    return column.replace("_", " ")


def _save(fig, out_path):
    parent = os.path.dirname(out_path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    fig.savefig(out_path, dpi=DPI, format="png")
    plt.close(fig)


def plot_convergence(specs):
    """Render one figure per request, one curve per input table.

    Each table contributes y_column against x_column, smoothed by the
    request's trailing moving-average window. Returns a RenderResult per
    figure, in request order.
    """
    results = []
    for spec in specs:
        validate_spec(spec)
        series = []
        for path, label in zip(spec.csv_paths, spec.labels):
            table = load_table(path, (spec.x_column, spec.y_column))
            smoothed = moving_average(table[spec.y_column], spec.smooth_window)
            series.append((label, table[spec.x_column], smoothed))
        fig, ax = plt.subplots(figsize=FIGSIZE)
        for label, x, y in series:
            ax.plot(x, y, linewidth=1.5, label=label)
        ax.set_xlabel(_axis_label(spec.x_column))
        ax.set_ylabel(_axis_label(spec.y_column))
        ax.grid(alpha=0.3)
        ax.legend()
        _save(fig, spec.out_path)
        width, height = png_dimensions(spec.out_path)
        results.append(RenderResult(out_path=spec.out_path, width_px=width,
                                    height_px=height, series=tuple(series)))
    return results


def plot_sweep(spec, baseline_column="baseline_sum_rate"):
    """Render optimized-vs-baseline curves against a sweep axis.

    Each input table contributes a pair of lines sharing one color: y_column
    solid with round markers, baseline_column dashed with square markers, so
    single-row sweeps still show up. Tables must agree on row count. Curves
    are drawn raw; the smoothing option only applies to convergence figures.
    """
    validate_spec(spec)
    tables = [load_table(path, (spec.x_column, spec.y_column, baseline_column))
              for path in spec.csv_paths]
    sizes = [table[spec.x_column].size for table in tables]
    if len(set(sizes)) > 1:
        detail = ", ".join(f"{path}: {n} rows"
                           for path, n in zip(spec.csv_paths, sizes))
        raise PlotInputError(f"sweep series lengths differ ({detail})")
    overlay = len(tables) > 1
    series = []
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for i, (label, table) in enumerate(zip(spec.labels, tables)):
        opt_label = f"{label} optimized" if overlay else "optimized"
        base_label = f"{label} baseline" if overlay else "baseline"
        x = table[spec.x_column]
        color = f"C{i}"
        ax.plot(x, table[spec.y_column], "o-", color=color, linewidth=1.5,
                label=opt_label)
        ax.plot(x, table[baseline_column], "s--", color=color, linewidth=1.2,
                label=base_label)
        series.append((opt_label, x, table[spec.y_column]))
        series.append((base_label, x, table[baseline_column]))
    ax.set_xlabel(_axis_label(spec.x_column))
    ax.set_ylabel(_axis_label(spec.y_column))
    ax.grid(alpha=0.3)
    ax.legend()
    _save(fig, spec.out_path)
    width, height = png_dimensions(spec.out_path)
    return RenderResult(out_path=spec.out_path, width_px=width,
                        height_px=height, series=tuple(series))

"""Figure requests and CSV table loading.

A figure is described by a PlotSpec: which CSV tables to read, which columns
become the x and y series, the legend labels, where the image goes, and an
optional trailing moving-average window for noisy training curves.
"""

import csv
import os
from dataclasses import dataclass

import numpy as np


class PlotInputError(ValueError):
    """A figure request references data that is missing or malformed.

    The message names the offending file and, where relevant, the column.
    """


@dataclass(frozen=True)
class PlotSpec:
    """One figure: input tables, series columns, labels, and output path."""

    csv_paths: tuple
    out_path: str
    x_column: str = "episode"
    y_column: str = "accumulated_reward"
    labels: tuple = ()      # legend entries, one per input table
    smooth_window: int = 1  # trailing moving-average width, 1 = raw data


def make_spec(csv_paths, out_path, x_column="episode",
              y_column="accumulated_reward", labels=None, smooth_window=1):
    """Build a validated PlotSpec, deriving labels from file stems if absent."""
    paths = tuple(str(p) for p in csv_paths)
    if labels is None:
        names = tuple(os.path.splitext(os.path.basename(p))[0] for p in paths)
    else:
        names = tuple(str(label) for label in labels)
    spec = PlotSpec(csv_paths=paths, out_path=str(out_path), x_column=x_column,
                    y_column=y_column, labels=names,
                    smooth_window=int(smooth_window))
    validate_spec(spec)
    return spec


def validate_spec(spec):
    """Raise PlotInputError if the request cannot possibly render."""
    if not spec.csv_paths:
        raise PlotInputError("csv_paths: need at least one input CSV")
    if len(spec.labels) != len(spec.csv_paths):
        raise PlotInputError(f"labels: got {len(spec.labels)} labels for "
                             f"{len(spec.csv_paths)} input files")
    if spec.smooth_window < 1:
        raise PlotInputError(
            f"smooth_window: must be >= 1, got {spec.smooth_window}")
    if not str(spec.out_path).endswith(".png"):
        raise PlotInputError(
            f"out_path: expected a .png path, got {spec.out_path!r}")


def load_table(path, columns):
    """Read the named columns of a CSV file as float arrays.

    Returns {column: array}. Raises PlotInputError naming the file (and the
    column) when the file is unreadable, the header lacks a requested column,
    the body is empty, or a cell does not parse as a number.
    """
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames
            if header is None:
                raise PlotInputError(f"{path}: missing header row")
            for column in columns:
                if column not in header:
                    raise PlotInputError(f"{path}: missing column {column!r}")
            rows = list(reader)
    except OSError as exc:
        raise PlotInputError(f"{path}: cannot read input CSV ({exc})") from exc
    if not rows:
        raise PlotInputError(f"{path}: no data rows")
    table = {}
    for column in columns:
        values = np.empty(len(rows))
        for i, row in enumerate(rows):
            cell = row[column]
            try:
                values[i] = float(cell)
            except (TypeError, ValueError):
                # i + 2: 1-based line number counting the header row
                raise PlotInputError(
                    f"{path}: column {column!r}, line {i + 2}: cannot parse "
                    f"{cell!r} as a number") from None
        table[column] = values
    return table


def moving_average(values, window):
    """Trailing moving average with the same length as the input.

    Entry i averages values[max(0, i - window + 1) : i + 1]; the head of the
    series uses the partial window. window=1 returns the data unchanged.
    """
    y = np.asarray(values, dtype=float)
    if y.ndim != 1:
        raise ValueError(f"expected a 1-d series, got shape {y.shape}")
    window = int(window)
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if window == 1:
        return y.copy()
    out = np.empty_like(y)
    csum = np.cumsum(y)
    head = min(window, y.size)
    out[:head] = csum[:head] / np.arange(1, head + 1)
    if y.size > window:
        out[window:] = (csum[window:] - csum[:-window]) / window
    return out

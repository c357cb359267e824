"""Static PNG figures from training-run CSV artifacts: convergence curves
with optional moving-average smoothing, and optimized-vs-baseline sweep
comparisons.
"""

from .plotspec import (
    PlotInputError,
    PlotSpec,
    load_table,
    make_spec,
    moving_average,
    validate_spec,
)
from .render import (
    DPI,
    FIGSIZE,
    RenderResult,
    plot_convergence,
    plot_sweep,
    png_dimensions,
)

__version__ = "0.1.0"

__all__ = [
    "DPI",
    "FIGSIZE",
    "PlotInputError",
    "PlotSpec",
    "RenderResult",
    "load_table",
    "make_spec",
    "moving_average",
    "plot_convergence",
    "plot_sweep",
    "png_dimensions",
    "validate_spec",
]

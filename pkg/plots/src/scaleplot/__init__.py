"""Scaling-curve figures from evolutionary-runtime aggregate CSVs."""

from .render import PlotSpec, load_aggregate_rows, plot_scaling

__version__ = "0.1.0"

__all__ = ["PlotSpec", "load_aggregate_rows", "plot_scaling"]

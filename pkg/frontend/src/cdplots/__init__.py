"""Plotting for clusterdisco results CSVs."""

from .render import KINDS, PlotError, PlotSpec, load_rows, render

__all__ = ["KINDS", "PlotError", "PlotSpec", "load_rows", "render"]

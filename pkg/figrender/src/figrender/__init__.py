"""Offline figure rendering for ofdm-ranging CSV outputs."""

from .render import build_figure, render
from .spec import FigureSpec, SpecError, parse_figure_spec

__all__ = ["FigureSpec", "SpecError", "build_figure", "parse_figure_spec", "render"]

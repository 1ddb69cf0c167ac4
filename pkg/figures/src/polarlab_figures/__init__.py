"""Figure rendering for polarlab experiment output.

Consumes the CSV files written by the ``polarlab`` scenario runner (the
only coupling between the two packages is those file schemas) and draws
the six standard figures as PNG or SVG.
"""

__version__ = "0.1.0"

from .io import SchemaError, FIGURE_COLUMNS  # noqa: F401
from .render import FigureSpec, render, agreement_color, approx_line  # noqa: F401

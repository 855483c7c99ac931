"""CSV-driven figure regeneration for the no-click simulation outputs."""

from .figures import FIGURE_KINDS, FigureSpec, SchemaError, Table, read_table, render

__version__ = "0.1.0"

__all__ = ["FIGURE_KINDS", "FigureSpec", "SchemaError", "Table", "read_table", "render"]

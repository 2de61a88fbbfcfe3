"""Exact indecomposable decomposition of quiver representations from rank formulas."""

__version__ = "0.1.0"

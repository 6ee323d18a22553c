"""Exact dynamics of the tetrahedral twist polytope exchange family."""

__version__ = "0.1.0"

"""Basis-exchange laboratory for small matroids."""

__version__ = "0.1.0"

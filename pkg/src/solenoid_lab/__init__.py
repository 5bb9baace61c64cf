"""Exact and numerical tools for solenoidal manifolds."""

__version__ = "0.1.0"

"""Exact finite-group engine and first-order model checker for rank and dimension axioms."""

__version__ = "0.1.0"

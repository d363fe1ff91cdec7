"""Shintani cone decompositions, Barnes multiple zeta values and the invariants X, X_i."""

__version__ = "0.1.0"

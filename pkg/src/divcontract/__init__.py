"""Exact numerics for divisorial contractions to 3-fold quotient points."""

__version__ = "0.1.0"

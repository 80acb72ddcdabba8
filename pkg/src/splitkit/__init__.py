"""Finite-group toolkit for right-split exact sequences, semidirect products and induced reps."""

__version__ = "0.1.0"

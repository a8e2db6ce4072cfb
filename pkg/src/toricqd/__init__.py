"""Quantum D-module generators for toric varieties and split projective bundles."""

__version__ = "0.1.0"

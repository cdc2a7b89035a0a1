"""Numerics for generalized hypergeometric coherent states and the theta operator."""

__version__ = "0.1.0"

"""Finite computations behind surjectivity of arboreal Galois representations."""

__version__ = "0.1.0"

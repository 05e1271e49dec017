"""Finite-geometry toolkit for the PGL(3,q)-invariant (q^2+q+1)-ovoids of Q+(7,q)."""

from .gf import FiniteField

__all__ = ["FiniteField"]
__version__ = "0.1.0"

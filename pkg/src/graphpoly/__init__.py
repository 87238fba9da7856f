"""Exact graph homomorphism polynomials, specializations, and equivalence-class search."""

__version__ = "0.1.0"

"""Fundamental forms, Gauss maps, and polar duality for surfaces in the
upper half-space models of hyperbolic and de Sitter 3-space."""

from . import ambient, calculus, duality, errors, forms, gaussmaps, weierstrass, zoo

__all__ = ["ambient", "calculus", "duality", "errors", "forms", "gaussmaps",
           "weierstrass", "zoo"]

__version__ = "0.1.0"

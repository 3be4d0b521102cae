"""Computational toolkit for deformations of hyperbolic 3-cone-manifolds."""

__version__ = "0.1.0"

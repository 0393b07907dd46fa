"""Numerical laboratory for the n-th moment maximum-entropy family, its
Bregman geometry, divergence-based integer lattices and theta-function
Poisson duality."""

__version__ = "0.1.0"

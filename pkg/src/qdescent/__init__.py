"""Exact local-global descent computations for elliptic curves and
odd-degree hyperelliptic Jacobians over Q."""

__version__ = "0.1.0"

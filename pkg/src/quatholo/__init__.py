"""Exact computations in the parabolic subalgebra of sp(1, n+1) and its similarity image."""

__version__ = "0.1.0"

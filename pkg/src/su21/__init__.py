"""Exact and floating-point computations in complex hyperbolic geometry for SU(2,1)."""

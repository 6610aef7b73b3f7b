"""Numerical kernels: projective geometry, sampling, charts, flows and constants."""

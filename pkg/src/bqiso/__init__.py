"""Exact verification toolkit for braided Poisson and braided quantum ISO(p, N-p)."""

__version__ = "0.1.0"

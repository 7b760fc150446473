"""Nonstandard SU(2) bases, mutually unbiased bases and generalized quadratic Gauss sums."""

__version__ = "0.1.0"

"""Exact verification toolkit for zeta and L-function special values of
elliptic fibrations over the projective line over a finite field."""

__version__ = "0.1.0"

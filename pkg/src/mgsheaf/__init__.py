"""Moment graphs of Bruhat intervals, Braden-MacPherson sheaves and
Kazhdan-Lusztig polynomials for finite and affine Weyl groups."""

__version__ = "0.1.0"

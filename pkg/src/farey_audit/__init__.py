"""Numerical audits of Farey discrepancies, Moebius sums and Dirichlet L-functions."""

__version__ = "0.1.0"

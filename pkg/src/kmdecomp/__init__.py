"""Exact decomposition multiplicities and canonical bases for symmetric Kac-Moody data."""

__version__ = "0.1.0"

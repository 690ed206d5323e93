"""Exact verification engine for classical r-matrices of sl(4, C)."""

__version__ = "0.1.0"

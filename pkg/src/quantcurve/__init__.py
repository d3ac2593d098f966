"""Exact analysis and quantization of rank-2 spectral curves on the line."""

__version__ = "0.1.0"

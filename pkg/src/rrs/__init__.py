"""Residual risk scoring pipeline for vulnerable/patched C function pairs."""

__version__ = "0.1.0"

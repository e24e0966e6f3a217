"""Exact construction and analysis of bracket words."""
__version__ = "0.1.0"

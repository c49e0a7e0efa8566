"""Privacy-leakage audit of captured ACARS traffic."""

__version__ = "0.1.0"

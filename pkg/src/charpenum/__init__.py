"""Exact enumerative geometry of plane curves over finite fields."""

__version__ = "0.1.0"

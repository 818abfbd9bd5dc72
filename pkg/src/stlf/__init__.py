"""Falsification and bounded verification of STL requirements on discrete-time models."""

__version__ = "0.1.0"

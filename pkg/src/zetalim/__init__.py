"""Zeta functions of global fields and explicit-formula verification."""

__version__ = "0.1.0"

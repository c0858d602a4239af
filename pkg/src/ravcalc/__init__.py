"""Exact symbolic computation for raviolo loop algebras and their coinvariants."""

__version__ = "0.1.0"

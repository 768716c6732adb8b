"""Exact computations for compatible Hom-associative algebras."""

__version__ = "0.1.0"

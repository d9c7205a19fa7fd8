"""Globular and corner homology of free omega-categories on cubical models."""

__version__ = "0.1.0"

"""Generalized orbifold constructions for low-dimensional TQFTs, evaluated exactly."""

__version__ = "0.1.0"

"""Combinatorial computation of the first rational Pontryagin class."""

__version__ = "0.1.0"

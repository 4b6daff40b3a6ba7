"""Explicit Deuring-Heilbronn zero repulsion: characters, sieve weights,
rigorous L-function evaluation, certificates and the bound calculator."""

from .interval import ComplexInterval, Interval, precision

__version__ = "0.1.0"

__all__ = ["ComplexInterval", "Interval", "precision", "__version__"]

"""Exact characteristic-2 Lie superalgebra computations over GF(2)."""

__version__ = "0.1.0"

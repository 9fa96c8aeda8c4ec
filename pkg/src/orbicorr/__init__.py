"""Exact reconstruction of genus-0 and genus-1 correlators for six
elliptic orbifold targets: three orbifold projective lines and three
Landau-Ginzburg models of cubic-type singularities.

All arithmetic is exact (``fractions.Fraction``); there are no floats
anywhere in the package.
"""

from __future__ import annotations

__version__ = "1.0.0"

__all__ = ["__version__"]

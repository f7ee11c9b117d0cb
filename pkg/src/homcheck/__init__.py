"""Exact computational commutative algebra with homological checkers.

The package provides a small exact engine (polynomials, Groebner bases,
finitely presented modules, free resolutions) and, on top of it, checkers
for concrete homological statements: direct-summand splitting of finite
ring extensions, Buchsbaum-Eisenbud acyclicity, syzygy/Betti bounds,
depth/Cohen-Macaulayness, symbolic-power containments, characteristic-p
Frobenius criteria, and degree-truncated algebra modifications.
"""

__version__ = "0.1.0"

from .poly import (
    BlockElim,
    GrLex,
    GRevLex,
    Lex,
    Polynomial,
    PolyRing,
    compare,
    normal_form,
    parse_polynomial,
)
from .groebner import GroebnerBasis, Ideal

__all__ = [
    "BlockElim",
    "GrLex",
    "GRevLex",
    "GroebnerBasis",
    "Ideal",
    "Lex",
    "Polynomial",
    "PolyRing",
    "compare",
    "normal_form",
    "parse_polynomial",
    "__version__",
]

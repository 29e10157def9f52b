"""Exact decision procedures driven by elementary transformations.

Two families of objects are covered: words in a free group of finite rank
(Nielsen and Whitehead transformations) and polynomials over the rationals
in two variables (elementary automorphisms and Groebner reductions).  Every
decision returns a verdict together with a replayable certificate.
"""

__version__ = "0.1.0"

from elemtrans.freegroup import (
    CyclicWord,
    FreeWord,
    GeneratorTuple,
    cyclic_reduce,
    free_reduce,
)
from elemtrans.poly import PolyMap, Polynomial

__all__ = [
    "CyclicWord",
    "FreeWord",
    "GeneratorTuple",
    "PolyMap",
    "Polynomial",
    "cyclic_reduce",
    "free_reduce",
    "__version__",
]

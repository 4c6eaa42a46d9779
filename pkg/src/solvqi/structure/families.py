"""
Generators of the named low dimensional solvable Lie algebras, with their
admissible parameter ranges. Bracket conventions follow Mubarakzyanov's names.
"""
from fractions import Fraction
from typing import Dict

from solvqi.algebra.exactlin import to_rational
from solvqi.algebra.liealg import LieAlgebra
from solvqi.exceptions import CatalogLookupError

Params = Dict[str, Fraction]


def _algebra(name: str, dim: int, brackets, params: Params = None) -> LieAlgebra:
    suffix = ""
    if params:
        suffix = "^{" + ",".join(str(v) for v in params.values()) + "}"
    return LieAlgebra.from_brackets(dim, brackets, name=f"{name}{suffix}")


def a2() -> LieAlgebra:
    return _algebra("a2", 2, {(1, 0): {0: 1}})


def heis() -> LieAlgebra:
    return _algebra("heis", 3, {(0, 1): {2: 1}})


def g3_3() -> LieAlgebra:
    return _algebra("g3_3", 3, {(2, 0): {0: 1}, (2, 1): {1: 1}})


def g3_5(alpha) -> LieAlgebra:
    alpha = to_rational(alpha)
    if not (-1 <= alpha < 1 and alpha != 0):
        raise CatalogLookupError(f"g3_5 needs -1 <= alpha < 1 and alpha != 0, got {alpha}")
    return _algebra("g3_5", 3, {(2, 0): {0: 1}, (2, 1): {1: alpha}}, {"alpha": alpha})


def g4_5(alpha, beta) -> LieAlgebra:
    alpha, beta = to_rational(alpha), to_rational(beta)
    if not (-1 <= alpha <= beta <= 1 and alpha * beta != 0):
        raise CatalogLookupError(f"g4_5 needs -1 <= alpha <= beta <= 1 and alpha*beta != 0, got {alpha}, {beta}")
    return _algebra(
        "g4_5", 4, {(3, 0): {0: 1}, (3, 1): {1: alpha}, (3, 2): {2: beta}}, {"alpha": alpha, "beta": beta}
    )


def g4_8() -> LieAlgebra:
    return _algebra("g4_8", 4, {(0, 1): {2: 1}, (3, 0): {0: 1}, (3, 1): {1: -1}})


def g4_9(beta) -> LieAlgebra:
    beta = to_rational(beta)
    if not (-1 < beta <= 1):
        raise CatalogLookupError(f"g4_9 needs -1 < beta <= 1, got {beta}")
    return _algebra(
        "g4_9",
        4,
        {(0, 1): {2: 1}, (3, 0): {0: 1}, (3, 1): {1: beta}, (3, 2): {2: 1 + beta}},
        {"beta": beta},
    )


def g5_19(beta) -> LieAlgebra:
    """The first parameter is fixed to 1"""
    beta = to_rational(beta)
    if beta == 0:
        raise CatalogLookupError("g5_19 needs beta != 0")
    return _algebra(
        "g5_19",
        5,
        {(0, 1): {2: 1}, (4, 0): {0: 1}, (4, 2): {2: 1}, (4, 3): {3: beta}},
        {"beta": beta},
    )

"""
Quasiisometry invariants of diagonal Heintze algebras: detection, conformal
dimension, rank one Iwasawa tags and the strong pointed sphere rule table.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from solvqi.algebra.exactlin import Matrix, Vector, char_poly, rational_roots
from solvqi.algebra.liealg import (
    LieAlgebra,
    adjoint_on,
    center,
    derived_algebra,
    subalgebra,
)
from solvqi.algebra.reduction import (
    cone_dimension,
    exponential_radical,
    is_class_C1,
    radical_labels,
)
from solvqi.exceptions import IrrationalSpectrumError

logger = logging.getLogger(__name__)

ABELIAN = "abelian"
HEISENBERG = "heisenberg"
OTHER = "other"


@dataclass(frozen=True)
class HeintzeData:
    """m x| R with the R generator acting by a positive diagonalizable derivation"""
    algebra: LieAlgebra
    nilradical: LieAlgebra
    derivation: Matrix
    spectrum: Tuple[Tuple[Fraction, int], ...]
    nilradical_kind: str
    generator: Vector
    orientation: int
    scale: Fraction

    @property
    def min_eigenvalue(self) -> Fraction:
        return self.spectrum[0][0]

    @property
    def normalized_spectrum(self) -> Tuple[Tuple[Fraction, int], ...]:
        return tuple((lam * self.scale, m) for lam, m in self.spectrum)


@dataclass(frozen=True)
class NotHeintze:
    reason: str


def is_heisenberg(n: LieAlgebra) -> bool:
    """Odd dimension, one dimensional center equal to [n, n], nondegenerate induced pairing"""
    if n.dim < 3 or n.dim % 2 == 0:
        return False
    z = center(n)
    if z.dim != 1 or derived_algebra(n).space != z.space:
        return False
    z_vector = z.vectors[0]
    pivot = z.space.pivots[0]
    complement = z.space.complement_indices()
    pairing = []
    for a in complement:
        row = []
        for b in complement:
            value = n.bracket_basis(a, b)
            row.append(value[pivot] / z_vector[pivot])
        pairing.append(row)
    return Matrix.from_rows(pairing, cols=len(complement)).determinant() != 0


def nilradical_kind(n: LieAlgebra) -> str:
    if n.is_abelian():
        return ABELIAN
    if is_heisenberg(n):
        return HEISENBERG
    return OTHER


def detect_diagonal_heintze(g: LieAlgebra) -> Union[HeintzeData, NotHeintze]:
    rank = cone_dimension(g)
    if rank != 1:
        return NotHeintze(f"cone dimension is {rank}, not 1")
    radical = exponential_radical(g)
    if radical.dim == 0:
        return NotHeintze("trivial nilradical")
    certificate = is_class_C1(g)
    if not certificate.member:
        return NotHeintze(f"not in class C1: {certificate.reason}")
    generator = certificate.complement[0]
    derivation = adjoint_on(g, generator, radical)
    roots = rational_roots(char_poly(derivation))
    if not roots.fully_split:
        raise IrrationalSpectrumError(f"{g.name or 'algebra'}: derivation spectrum is not rational")
    eigenvalues = [lam for lam, _ in roots.roots]
    if all(lam < 0 for lam in eigenvalues):
        orientation = -1
        derivation = derivation.scale(-1)
        generator = tuple(-x for x in generator)
        spectrum = tuple(sorted((-lam, m) for lam, m in roots.roots))
    elif all(lam > 0 for lam in eigenvalues):
        orientation = 1
        spectrum = tuple(roots.roots)
    else:
        return NotHeintze("spectrum is not of one strict sign")
    nilradical = subalgebra(g, radical, radical_labels(g, radical), name="m")
    data = HeintzeData(
        algebra=g,
        nilradical=nilradical,
        derivation=derivation,
        spectrum=spectrum,
        nilradical_kind=nilradical_kind(nilradical),
        generator=generator,
        orientation=orientation,
        scale=1 / spectrum[0][0],
    )
    logger.debug(f"{g.name}: diagonal Heintze with spectrum {[(str(l), m) for l, m in spectrum]}")
    return data


def conformal_dimension(h: HeintzeData) -> Fraction:
    """trace(D) / lambda_min"""
    total = sum((lam * m for lam, m in h.spectrum), Fraction(0))
    return total / h.min_eigenvalue


@dataclass(frozen=True)
class SymmetricTag:
    family: str
    n: Optional[int] = None

    def describe(self) -> str:
        if self.family == "SO_n1":
            return f"SO({self.n + 1},1)"
        if self.family == "SU_n1":
            return f"SU({self.n + 1},1)"
        return "none"


def identify_rank_one_iwasawa(h: HeintzeData) -> SymmetricTag:
    normalized: Dict[Fraction, int] = dict(h.normalized_spectrum)
    dim = h.nilradical.dim
    if h.nilradical_kind == ABELIAN and normalized == {Fraction(1): dim}:
        return SymmetricTag("SO_n1", dim)
    if h.nilradical_kind == HEISENBERG:
        n = (dim - 1) // 2
        if normalized == {Fraction(1): 2 * n, Fraction(2): 1}:
            return SymmetricTag("SU_n1", n)
    return SymmetricTag("none")


class Tristate(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SPSPResult:
    value: Tristate
    rule: str
    citation: str


SPSP_ABELIAN = (
    "spsp-abelian",
    "a diagonal Heintze group with abelian nilradical that is not a maximal completely "
    "solvable subgroup of SO(n,1) has the strong pointed sphere property",
)
SPSP_HEISENBERG = (
    "spsp-heisenberg",
    "the Heintze groups on the three dimensional Heisenberg group with weights (1, beta, 1+beta), "
    "beta != 1, have the strong pointed sphere property",
)
SPSP_SYMMETRIC = (
    "spsp-symmetric",
    "isometry groups of rank one symmetric spaces act transitively on the boundary",
)
SPSP_UNKNOWN = ("spsp-unknown", "no effective criterion for this nilradical")


def strong_pointed_sphere(h: HeintzeData) -> SPSPResult:
    tag = identify_rank_one_iwasawa(h)
    if tag.family != "none":
        return SPSPResult(Tristate.FALSE, *SPSP_SYMMETRIC)
    if h.nilradical_kind == ABELIAN:
        return SPSPResult(Tristate.TRUE, *SPSP_ABELIAN)
    if h.nilradical_kind == HEISENBERG and h.nilradical.dim == 3:
        beta = heisenberg_beta(h)
        if beta is None:
            return SPSPResult(Tristate.UNKNOWN, *SPSP_UNKNOWN)
        return SPSPResult(Tristate.TRUE if beta != 1 else Tristate.FALSE, *SPSP_HEISENBERG)
    return SPSPResult(Tristate.UNKNOWN, *SPSP_UNKNOWN)


def heisenberg_beta(h: HeintzeData) -> Optional[Fraction]:
    """min/max of the weights on the horizontal layer, when the spectrum has the shape {a, b, a+b}"""
    values = sorted(lam for lam, m in h.spectrum for _ in range(m))
    a, b, top = values
    if a + b != top:
        return None
    return a / b

"""
Recognizers for the catalog families.

Each recognizer builds an explicit basis from the eigenvectors of a semisimple
element acting on the nilradical and certifies it: the algebra transported to
that basis must equal the generator output constant for constant.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from solvqi.algebra.exactlin import (
    Matrix,
    RationalRoots,
    Subspace,
    Vector,
    char_poly,
    eigenspace,
    is_zero_vector,
    linear_combination,
    rational_roots,
    scale_vector,
    unit_vector,
)
from solvqi.algebra.geometry import is_heisenberg
from solvqi.algebra.liealg import (
    AlgebraSubspace,
    LieAlgebra,
    adjoint_on,
    center,
    derived_algebra,
    is_nilpotent,
    nilradical,
    subalgebra,
    transport,
    triangularize,
    whole,
)
from solvqi.algebra.reduction import cartan_subalgebra, semisimple_elements
from solvqi.exceptions import SingularMatrixError, UnsupportedInstanceError
from solvqi.structure import families

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Recognition:
    """transport(g, basis) equals the generator output at params"""
    name: str
    params: Tuple[Tuple[str, Fraction], ...]
    basis: Matrix

    @property
    def param_dict(self) -> Dict[str, Fraction]:
        return dict(self.params)

    def key(self) -> Tuple[str, Tuple[Tuple[str, Fraction], ...]]:
        return self.name, self.params


Recognizer = Callable[[LieAlgebra], Optional[Recognition]]


def certify(g: LieAlgebra, vectors: Sequence[Vector], name: str, params: Dict[str, Fraction],
            expected: LieAlgebra) -> Optional[Recognition]:
    if len(vectors) != g.dim:
        return None
    basis = Matrix.from_columns(list(vectors), rows=g.dim)
    try:
        transported = transport(g, basis)
    except SingularMatrixError:
        return None
    if transported != expected:
        logger.debug(f"{name}: candidate basis does not reproduce the normal form")
        return None
    return Recognition(name, tuple(params.items()), basis)


@dataclass(frozen=True)
class RankOneFrame:
    """Codimension one nilradical with a semisimple element t outside it"""
    g: LieAlgebra
    nil: AlgebraSubspace
    t: Vector
    roots: RationalRoots

    @property
    def weights(self) -> List[Fraction]:
        return [lam for lam, m in self.roots.roots for _ in range(m)]

    def eigen(self, lam: Fraction) -> Subspace:
        return eigenspace(self.g.ad(self.t), lam).intersection(self.nil.space)

    def lift(self, space: AlgebraSubspace) -> Subspace:
        """Subspace of the nilradical subalgebra, back in coordinates of g"""
        return Subspace.span(
            [linear_combination(v, self.nil.vectors, self.g.dim) for v in space.vectors], self.g.dim
        )


def rank_one_frame(g: LieAlgebra) -> Optional[RankOneFrame]:
    flag = triangularize(g)
    if not flag.success:
        return None
    nil = nilradical(g, flag)
    if g.dim - nil.dim != 1:
        return None
    t0 = next(unit_vector(g.dim, i) for i in range(g.dim) if not nil.contains(unit_vector(g.dim, i)))
    try:
        toral = semisimple_elements(g, cartan_subalgebra(g, t0), whole(g))
    except UnsupportedInstanceError:
        return None
    t = next((v for v in toral.vectors if not nil.contains(v)), None)
    if t is None:
        return None
    roots = rational_roots(char_poly(adjoint_on(g, t, nil)))
    if not roots.fully_split:
        return None
    return RankOneFrame(g, nil, t, roots)


def _nil_algebra(frame: RankOneFrame) -> LieAlgebra:
    return subalgebra(frame.g, frame.nil)


def _remove_once(values: List[Fraction], value: Fraction) -> List[Fraction]:
    out = list(values)
    out.remove(value)
    return out


def _greatest(candidates: List[Tuple[Tuple[Fraction, ...], Callable[[], Optional[Recognition]]]]) -> Optional[Recognition]:
    """Try candidates by lexicographically greatest parameter tuple first"""
    for _, attempt in sorted(candidates, key=lambda c: c[0], reverse=True):
        found = attempt()
        if found is not None:
            return found
    return None


# ---------------------------------------------------------------------------
# Abelian nilradical with a diagonal action: a2, g3_3, g3_5, g4_5
# ---------------------------------------------------------------------------

def _diagonal_abelian(g: LieAlgebra, dim: int) -> Optional[Recognition]:
    if g.dim != dim:
        return None
    frame = rank_one_frame(g)
    if frame is None or not _nil_algebra(frame).is_abelian():
        return None
    weights = frame.weights
    if any(w == 0 for w in weights):
        return None
    top = max(abs(w) for w in weights)

    def build(w: Fraction) -> Optional[Recognition]:
        rest = sorted(x / w for x in _remove_once(weights, w))
        pools = {lam: list(frame.eigen(lam).vectors) for lam in set(weights)}
        vectors = [pools[w].pop(0)]
        for x in rest:
            vectors.append(pools[x * w].pop(0))
        vectors.append(scale_vector(1 / w, frame.t))
        if dim == 2:
            return certify(g, vectors, "a2", {}, families.a2())
        if dim == 3 and rest == [1]:
            return certify(g, vectors, "g3_3", {}, families.g3_3())
        if dim == 3:
            alpha = rest[0]
            if not (-1 <= alpha < 1):
                return None
            return certify(g, vectors, "g3_5", {"alpha": alpha}, families.g3_5(alpha))
        alpha, beta = rest
        if not (-1 <= alpha <= beta <= 1):
            return None
        return certify(g, vectors, "g4_5", {"alpha": alpha, "beta": beta}, families.g4_5(alpha, beta))

    candidates = []
    for w in sorted(set(weights)):
        if abs(w) == top:
            params = tuple(sorted(x / w for x in _remove_once(weights, w)))
            candidates.append((params, lambda w=w: build(w)))
    return _greatest(candidates)


def recognize_a2(g: LieAlgebra) -> Optional[Recognition]:
    return _diagonal_abelian(g, 2)


def recognize_g3_3(g: LieAlgebra) -> Optional[Recognition]:
    found = _diagonal_abelian(g, 3)
    return found if found is not None and found.name == "g3_3" else None


def recognize_g3_5(g: LieAlgebra) -> Optional[Recognition]:
    found = _diagonal_abelian(g, 3)
    return found if found is not None and found.name == "g3_5" else None


def recognize_g4_5(g: LieAlgebra) -> Optional[Recognition]:
    return _diagonal_abelian(g, 4)


# ---------------------------------------------------------------------------
# Heisenberg nilradical: heis, g4_8, g4_9
# ---------------------------------------------------------------------------

def _first_pairing(g: LieAlgebra, a: Vector, candidates: Sequence[Vector]) -> Optional[Vector]:
    return next((b for b in candidates if not is_zero_vector(g.bracket(a, b))), None)


def recognize_heis(g: LieAlgebra) -> Optional[Recognition]:
    if g.dim != 3 or not is_nilpotent(g) or not is_heisenberg(g):
        return None
    z = center(g)
    a, b = (unit_vector(3, i) for i in z.space.complement_indices())
    return certify(g, [a, b, g.bracket(a, b)], "heis", {}, families.heis())


def _heisenberg_frame(g: LieAlgebra) -> Optional[Tuple[RankOneFrame, Subspace, Fraction, List[Fraction]]]:
    if g.dim != 4:
        return None
    frame = rank_one_frame(g)
    if frame is None:
        return None
    n_alg = _nil_algebra(frame)
    if not is_heisenberg(n_alg):
        return None
    z = frame.lift(center(n_alg))
    z_vector = z.vectors[0]
    image = g.bracket(frame.t, z_vector)
    pivot = z.pivots[0]
    w_z = image[pivot] / z_vector[pivot]
    horizontal = _remove_once(frame.weights, w_z)
    return frame, z, w_z, horizontal


def recognize_g4_8(g: LieAlgebra) -> Optional[Recognition]:
    found = _heisenberg_frame(g)
    if found is None:
        return None
    frame, z, w_z, horizontal = found
    if w_z != 0 or horizontal[0] != -horizontal[1]:
        return None
    w = max(horizontal)
    a = frame.eigen(w).vectors[0]
    b = _first_pairing(g, a, frame.eigen(-w).vectors)
    if b is None:
        return None
    vectors = [a, b, g.bracket(a, b), scale_vector(1 / w, frame.t)]
    return certify(g, vectors, "g4_8", {}, families.g4_8())


def recognize_g4_9(g: LieAlgebra) -> Optional[Recognition]:
    found = _heisenberg_frame(g)
    if found is None:
        return None
    frame, z, w_z, horizontal = found
    if w_z == 0:
        return None
    top = max(abs(w) for w in horizontal)

    def build(w_a: Fraction) -> Optional[Recognition]:
        w_b = _remove_once(horizontal, w_a)[0]
        beta = w_b / w_a
        if not (-1 < beta <= 1):
            return None
        a = next((v for v in frame.eigen(w_a).vectors if not z.contains(v)), None)
        if a is None:
            return None
        b = _first_pairing(g, a, frame.eigen(w_b).vectors)
        if b is None:
            return None
        vectors = [a, b, g.bracket(a, b), scale_vector(1 / w_a, frame.t)]
        return certify(g, vectors, "g4_9", {"beta": beta}, families.g4_9(beta))

    candidates = []
    for w in sorted(set(horizontal)):
        if abs(w) == top:
            candidates.append(((_remove_once(horizontal, w)[0] / w,), lambda w=w: build(w)))
    return _greatest(candidates)


# ---------------------------------------------------------------------------
# g5_19 with first parameter 1
# ---------------------------------------------------------------------------

def recognize_g5_19(g: LieAlgebra) -> Optional[Recognition]:
    if g.dim != 5:
        return None
    frame = rank_one_frame(g)
    if frame is None:
        return None
    n_alg = _nil_algebra(frame)
    derived = frame.lift(derived_algebra(n_alg))
    if derived.dim != 1:
        return None
    d_vector = derived.vectors[0]
    pivot = derived.pivots[0]
    w3 = g.bracket(frame.t, d_vector)[pivot] / d_vector[pivot]
    if w3 == 0:
        return None
    normalized = [w / w3 for w in frame.weights]
    try:
        rest = _remove_once(_remove_once(_remove_once(normalized, Fraction(1)), Fraction(1)), Fraction(0))
    except ValueError:
        return None
    beta = rest[0]
    if beta == 0:
        return None
    zero_space = frame.eigen(Fraction(0))
    if zero_space.dim != 1:
        return None
    e2 = zero_space.vectors[0]
    e1 = next((v for v in frame.eigen(w3).vectors if not is_zero_vector(g.bracket(v, e2))), None)
    if e1 is None:
        return None
    e3 = g.bracket(e1, e2)
    central = frame.lift(center(n_alg)).intersection(frame.eigen(beta * w3))
    e4 = next((v for v in central.vectors if not Subspace.span([e3], g.dim).contains(v)), None)
    if e4 is None:
        return None
    vectors = [e1, e2, e3, e4, scale_vector(1 / w3, frame.t)]
    return certify(g, vectors, "g5_19", {"beta": beta}, families.g5_19(beta))


def identical_constants(name: str, reference: LieAlgebra, params: Dict[str, Fraction] = None) -> Recognizer:
    """Recognizer for entries without a normal-form construction: exact table equality only"""

    def recognize(g: LieAlgebra) -> Optional[Recognition]:
        if g != reference:
            return None
        return Recognition(name, tuple((params or {}).items()), Matrix.identity(g.dim))

    return recognize

"""
Lie algebras given by rational structure constants.

Constants are stored sparsely as c^k_{ij} with i < j (0-based indices), so that
[e_i, e_j] = sum_k c^k_{ij} e_k and antisymmetry is implied.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from solvqi.algebra.exactlin import (
    ONE,
    ZERO,
    Matrix,
    RationalLike,
    Subspace,
    Vector,
    char_poly,
    eigenspace,
    is_zero_vector,
    kernel,
    rational_roots,
    to_rational,
    unit_vector,
    zero_vector,
)
from solvqi.exceptions import (
    DerivationActionError,
    DimensionMismatchError,
    InvariantViolationError,
    NotAnIdealError,
    NotInvariantError,
    ParentMismatchError,
    TriangularizationError,
)

logger = logging.getLogger(__name__)

Key = Tuple[int, int, int]

DEFAULT_MAX_EIGEN_COMBINATIONS = 20000


@dataclass(frozen=True)
class LieAlgebra:
    """Structure-constant table; equality compares the table, not labels or name"""
    dim: int
    constants: Tuple[Tuple[Key, Fraction], ...]
    labels: Tuple[str, ...] = field(default=(), compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        cleaned = {}
        for (i, j, k), c in self.constants:
            c = to_rational(c)
            if not (0 <= i < j < self.dim and 0 <= k < self.dim):
                raise DimensionMismatchError(f"constant key {(i, j, k)} out of range for dimension {self.dim}")
            if c != 0:
                cleaned[(i, j, k)] = c
        object.__setattr__(self, "constants", tuple(sorted(cleaned.items())))
        labels = tuple(self.labels) if self.labels else tuple(f"e{i + 1}" for i in range(self.dim))
        if len(labels) != self.dim:
            raise DimensionMismatchError(f"{len(labels)} labels for dimension {self.dim}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_brackets(
        cls,
        dim: int,
        brackets: Mapping[Tuple[int, int], Mapping[int, RationalLike]],
        labels: Optional[Sequence[str]] = None,
        name: str = "",
    ) -> "LieAlgebra":
        """Build from {(i, j): {k: c}} with any orientation of (i, j)"""
        table: Dict[Key, Fraction] = {}
        for (i, j), terms in brackets.items():
            if i == j:
                raise InvariantViolationError(f"bracket of e{i + 1} with itself")
            sign = ONE if i < j else -ONE
            a, b = min(i, j), max(i, j)
            for k, c in terms.items():
                table[(a, b, k)] = table.get((a, b, k), ZERO) + sign * to_rational(c)
        return cls(dim, tuple(table.items()), tuple(labels or ()), name)

    @cached_property
    def _table(self) -> Dict[Tuple[int, int], Vector]:
        rows: Dict[Tuple[int, int], List[Fraction]] = {}
        for (i, j, k), c in self.constants:
            rows.setdefault((i, j), [ZERO] * self.dim)[k] += c
        table = {}
        for (i, j), v in rows.items():
            table[(i, j)] = tuple(v)
            table[(j, i)] = tuple(-x for x in v)
        return table

    def c(self, i: int, j: int, k: int) -> Fraction:
        v = self._table.get((i, j))
        return v[k] if v else ZERO

    def bracket_basis(self, i: int, j: int) -> Vector:
        return self._table.get((i, j), zero_vector(self.dim))

    def bracket(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatchError(f"bracket of vectors of lengths {len(x)}, {len(y)} in dimension {self.dim}")
        out = [ZERO] * self.dim
        for (i, j), v in self._table.items():
            w = x[i] * y[j]
            if w == 0:
                continue
            for k in range(self.dim):
                if v[k]:
                    out[k] += w * v[k]
        return tuple(out)

    def ad(self, x: Sequence[Fraction]) -> Matrix:
        """Matrix of ad(x); column j is [x, e_j]"""
        return Matrix.from_columns([self.bracket(x, unit_vector(self.dim, j)) for j in range(self.dim)], rows=self.dim)

    def ad_basis(self, i: int) -> Matrix:
        return self.ad(unit_vector(self.dim, i))

    def basis(self) -> List[Vector]:
        return [unit_vector(self.dim, i) for i in range(self.dim)]

    def is_abelian(self) -> bool:
        return not self.constants

    def bracket_lines(self) -> List[Tuple[int, int, Dict[int, Fraction]]]:
        grouped: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (i, j, k), c in self.constants:
            grouped.setdefault((i, j), {})[k] = c
        return [(i, j, terms) for (i, j), terms in grouped.items()]

    def relabel(self, labels: Optional[Sequence[str]] = None, name: Optional[str] = None) -> "LieAlgebra":
        return LieAlgebra(self.dim, self.constants, tuple(labels or self.labels), self.name if name is None else name)

    def describe(self) -> List[str]:
        """Human readable bracket table, one '[a,b] = ...' string per nonzero bracket"""
        out = []
        for i, j, terms in self.bracket_lines():
            out.append(f"[{self.labels[i]},{self.labels[j]}] = {format_combination(terms, self.labels)}")
        return out

    def __repr__(self):
        return f"LieAlgebra(name={self.name!r}, dim={self.dim}, brackets={self.describe()})"


def format_combination(terms: Mapping[int, Fraction], labels: Sequence[str]) -> str:
    parts = []
    for k in sorted(terms):
        c = terms[k]
        if c == 0:
            continue
        magnitude = abs(c)
        body = labels[k] if magnitude == 1 else f"{magnitude} {labels[k]}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def abelian(n: int, name: Optional[str] = None) -> LieAlgebra:
    return LieAlgebra(n, (), name=name if name is not None else f"R^{n}")


# ---------------------------------------------------------------------------
# Axioms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    triple: Optional[Tuple[int, int, int]] = None
    residual: Optional[Vector] = None
    labels: Tuple[str, ...] = ()

    def describe(self) -> str:
        if self.ok:
            return "ok"
        a, b, c = (self.labels[i] for i in self.triple)
        return f"Jacobi fails on ({a}, {b}, {c}) with residual {[str(x) for x in self.residual]}"


def jacobi_residual(g: LieAlgebra, i: int, j: int, k: int) -> Vector:
    e = g.basis()
    first = g.bracket(e[i], g.bracket_basis(j, k))
    second = g.bracket(e[j], g.bracket_basis(k, i))
    third = g.bracket(e[k], g.bracket_basis(i, j))
    return tuple(a + b + c for a, b, c in zip(first, second, third))


def validate(g: LieAlgebra) -> JacobiReport:
    """Jacobi identity on every basis triple i < j < k; the first failure is reported"""
    for i, j, k in combinations(range(g.dim), 3):
        residual = jacobi_residual(g, i, j, k)
        if not is_zero_vector(residual):
            logger.debug(f"{g.name or 'algebra'}: Jacobi fails on {(i, j, k)}")
            return JacobiReport(False, (i, j, k), residual, g.labels)
    return JacobiReport(True, labels=g.labels)


def ensure_valid(g: LieAlgebra) -> LieAlgebra:
    report = validate(g)
    if not report.ok:
        raise InvariantViolationError(f"{g.name or 'algebra'}: {report.describe()}")
    return g


# ---------------------------------------------------------------------------
# Subspaces of an algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraSubspace:
    parent: LieAlgebra
    space: Subspace

    def __post_init__(self):
        if self.space.ambient_dim != self.parent.dim:
            raise DimensionMismatchError(
                f"subspace of ambient dimension {self.space.ambient_dim} in algebra of dimension {self.parent.dim}"
            )

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def vectors(self) -> List[Vector]:
        return self.space.vectors

    def contains(self, v: Sequence[Fraction]) -> bool:
        return self.space.contains(v)

    def is_subspace_of(self, other: "AlgebraSubspace") -> bool:
        return self.space.is_subspace_of(other.space)

    def to_strings(self) -> List[List[str]]:
        return self.space.basis.to_strings()


def whole(g: LieAlgebra) -> AlgebraSubspace:
    return AlgebraSubspace(g, Subspace.full(g.dim))


def zero_subspace(g: LieAlgebra) -> AlgebraSubspace:
    return AlgebraSubspace(g, Subspace.zero(g.dim))


def span(g: LieAlgebra, vectors) -> AlgebraSubspace:
    return AlgebraSubspace(g, Subspace.span(vectors, g.dim))


def product_space(g: LieAlgebra, a: AlgebraSubspace, b: AlgebraSubspace) -> AlgebraSubspace:
    """span of [x, y] over basis vectors x of a and y of b"""
    if a.parent != g or b.parent != g:
        raise ParentMismatchError("subspaces belong to a different algebra")
    brackets = [g.bracket(x, y) for x in a.vectors for y in b.vectors]
    return AlgebraSubspace(g, Subspace.span(brackets, g.dim))


def derived_algebra(g: LieAlgebra) -> AlgebraSubspace:
    full = whole(g)
    return product_space(g, full, full)


def is_ideal(g: LieAlgebra, a: AlgebraSubspace) -> bool:
    return product_space(g, whole(g), a).is_subspace_of(a)


def is_subalgebra(g: LieAlgebra, a: AlgebraSubspace) -> bool:
    return product_space(g, a, a).is_subspace_of(a)


@dataclass(frozen=True)
class SeriesReport:
    kind: str
    terms: Tuple[AlgebraSubspace, ...]

    @property
    def dims(self) -> List[int]:
        return [t.dim for t in self.terms]

    @property
    def last(self) -> AlgebraSubspace:
        return self.terms[-1]


def _series(g: LieAlgebra, kind: str) -> SeriesReport:
    terms = [whole(g)]
    full = terms[0]
    while True:
        last = terms[-1]
        nxt = product_space(g, full, last) if kind == "lower_central" else product_space(g, last, last)
        if nxt.space == last.space:
            break
        terms.append(nxt)
    return SeriesReport(kind, tuple(terms))


def lower_central_series(g: LieAlgebra) -> SeriesReport:
    return _series(g, "lower_central")


def derived_series(g: LieAlgebra) -> SeriesReport:
    return _series(g, "derived")


def center(g: LieAlgebra) -> AlgebraSubspace:
    if g.dim == 0:
        return zero_subspace(g)
    stacked = Matrix(0, g.dim, ())
    for i in range(g.dim):
        stacked = stacked.vstack(g.ad_basis(i))
    return AlgebraSubspace(g, kernel(stacked))


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g).last.dim == 0


def is_solvable(g: LieAlgebra) -> bool:
    return derived_series(g).last.dim == 0


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def transport(g: LieAlgebra, basis: Matrix, labels: Optional[Sequence[str]] = None, name: Optional[str] = None) -> LieAlgebra:
    """The same algebra written in the basis given by the columns of `basis`"""
    inverse = basis.inverse()
    columns = basis.column_list()
    brackets = {}
    for i, j in combinations(range(g.dim), 2):
        v = g.bracket(columns[i], columns[j])
        if is_zero_vector(v):
            continue
        coords = inverse.apply(v)
        brackets[(i, j)] = {k: c for k, c in enumerate(coords) if c}
    return LieAlgebra.from_brackets(g.dim, brackets, labels, g.name if name is None else name)


def subalgebra(g: LieAlgebra, a: AlgebraSubspace, labels: Optional[Sequence[str]] = None, name: str = "") -> LieAlgebra:
    """The subalgebra a in the canonical basis of its subspace"""
    if a.parent != g:
        raise ParentMismatchError("subspace belongs to a different algebra")
    vectors = a.vectors
    brackets = {}
    for i, j in combinations(range(a.dim), 2):
        v = g.bracket(vectors[i], vectors[j])
        if not a.contains(v):
            raise NotInvariantError("subspace is not closed under the bracket")
        coords = a.space.coordinates(v)
        if any(coords):
            brackets[(i, j)] = {k: c for k, c in enumerate(coords) if c}
    return LieAlgebra.from_brackets(a.dim, brackets, labels, name)


@dataclass(frozen=True)
class QuotientResult:
    algebra: LieAlgebra
    projection: Matrix
    section: Matrix
    complement: Tuple[int, ...]


def quotient(g: LieAlgebra, ideal: AlgebraSubspace, name: str = "") -> QuotientResult:
    """g / ideal on the lexicographically first standard complement"""
    if ideal.parent != g:
        raise ParentMismatchError("ideal belongs to a different algebra")
    if not is_ideal(g, ideal):
        raise NotAnIdealError("subspace is not an ideal")
    complement = ideal.space.complement_indices()
    q = len(complement)
    section = Matrix.from_columns([unit_vector(g.dim, i) for i in complement], rows=g.dim) if q else Matrix(g.dim, 0, ())
    adapted = Matrix.from_columns(ideal.vectors + [unit_vector(g.dim, i) for i in complement], rows=g.dim)
    inverse = adapted.inverse() if g.dim else adapted
    projection = Matrix.from_rows([inverse.row(ideal.dim + r) for r in range(q)], cols=g.dim) if q else Matrix(0, g.dim, ())
    brackets = {}
    for a, b in combinations(range(q), 2):
        v = g.bracket_basis(complement[a], complement[b])
        coords = projection.apply(v)
        if any(coords):
            brackets[(a, b)] = {k: c for k, c in enumerate(coords) if c}
    algebra = LieAlgebra.from_brackets(q, brackets, [g.labels[i] for i in complement], name)
    if q and not (projection @ section) == Matrix.identity(q):
        raise InvariantViolationError("projection does not invert the section")
    return QuotientResult(algebra, projection, section, tuple(complement))


def direct_sum(a: LieAlgebra, b: LieAlgebra, name: Optional[str] = None) -> LieAlgebra:
    shift = a.dim
    constants = list(a.constants) + [((i + shift, j + shift, k + shift), c) for (i, j, k), c in b.constants]
    labels = list(a.labels) + list(b.labels)
    if len(set(labels)) != len(labels):
        labels = [f"e{i + 1}" for i in range(a.dim + b.dim)]
    if name is None:
        name = " + ".join(x for x in (a.name, b.name) if x)
    return LieAlgebra(a.dim + b.dim, tuple(constants), tuple(labels), name)


@dataclass(frozen=True)
class DerivationAction:
    """Action of source on target by the matrices, one per basis element of source"""
    source: LieAlgebra
    target: LieAlgebra
    matrices: Tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.matrices) != self.source.dim:
            raise DimensionMismatchError(f"{len(self.matrices)} matrices for a {self.source.dim}-dimensional source")
        for m in self.matrices:
            if (m.rows, m.cols) != (self.target.dim, self.target.dim):
                raise DimensionMismatchError("action matrix does not match the target dimension")

    def matrix_of(self, x: Sequence[Fraction]) -> Matrix:
        acc = Matrix.zeros(self.target.dim)
        for c, m in zip(x, self.matrices):
            if c:
                acc = acc + m.scale(c)
        return acc

    def check(self):
        """Raise DerivationActionError unless the action is by derivations and is a homomorphism"""
        n = self.target
        basis = n.basis()
        for a, m in enumerate(self.matrices):
            for i, j in combinations(range(n.dim), 2):
                lhs = m.apply(n.bracket_basis(i, j))
                rhs = tuple(
                    p + q for p, q in zip(n.bracket(m.apply(basis[i]), basis[j]), n.bracket(basis[i], m.apply(basis[j])))
                )
                if lhs != rhs:
                    raise DerivationActionError(
                        f"action of {self.source.labels[a]} violates the Leibniz rule on "
                        f"({n.labels[i]}, {n.labels[j]})"
                    )
        for a, b in combinations(range(self.source.dim), 2):
            expected = self.matrix_of(self.source.bracket_basis(a, b))
            if self.matrices[a].commutator(self.matrices[b]) != expected:
                raise DerivationActionError(
                    f"action is not a homomorphism on ({self.source.labels[a]}, {self.source.labels[b]})"
                )


def semidirect_product(n: LieAlgebra, h: LieAlgebra, act: DerivationAction, name: str = "") -> LieAlgebra:
    """n x| h on the basis of n followed by the basis of h"""
    if act.source != h or act.target != n:
        raise ParentMismatchError("action does not act between the given algebras")
    act.check()
    shift = n.dim
    constants = list(n.constants) + [((i + shift, j + shift, k + shift), c) for (i, j, k), c in h.constants]
    for a, m in enumerate(act.matrices):
        for i in range(n.dim):
            for k in range(n.dim):
                c = m[k, i]
                if c:
                    # [n_i, h_a] = -[h_a, n_i]
                    constants.append(((i, shift + a, k), -c))
    labels = list(n.labels) + list(h.labels)
    if len(set(labels)) != len(labels):
        labels = [f"e{i + 1}" for i in range(n.dim + h.dim)]
    return ensure_valid(LieAlgebra(n.dim + h.dim, tuple(constants), tuple(labels), name))


def adjoint_on(g: LieAlgebra, x: Sequence[Fraction], inv: AlgebraSubspace) -> Matrix:
    """ad(x) restricted to inv, in inv's canonical basis"""
    if inv.parent != g:
        raise ParentMismatchError("subspace belongs to a different algebra")
    columns = []
    for v in inv.vectors:
        w = g.bracket(x, v)
        if not inv.contains(w):
            raise NotInvariantError("subspace is not invariant under ad(x)")
        columns.append(inv.space.coordinates(w))
    if not columns:
        return Matrix(0, 0, ())
    return Matrix.from_columns(columns, rows=inv.dim)


# ---------------------------------------------------------------------------
# Complete solvability
# ---------------------------------------------------------------------------

NOT_SOLVABLE = "not solvable"
NO_COMMON_EIGENVECTOR = "no rational common eigenvector"
BUDGET_EXHAUSTED = "search budget exhausted"


class _BudgetExhausted(Exception):
    pass


@dataclass(frozen=True)
class TriangularizationResult:
    success: bool
    flag: Tuple[AlgebraSubspace, ...] = ()
    reason: Optional[str] = None

    def flag_basis(self) -> List[Vector]:
        """f_1..f_n with f_t in flag[t-1] and outside flag[t]"""
        out = []
        for t in range(1, len(self.flag)):
            out.extend(self.flag[t].space.complement_within(self.flag[t - 1].space))
        return out


def _common_eigenvector(g: LieAlgebra, budget: List[int]) -> Optional[Vector]:
    ads = [g.ad_basis(i) for i in range(g.dim)]
    spectra = [[r for r, _ in rational_roots(char_poly(m)).roots] for m in ads]

    def search(i: int, space: Subspace) -> Optional[Vector]:
        if i == len(ads):
            return space.vectors[0]
        for lam in spectra[i]:
            budget[0] -= 1
            if budget[0] < 0:
                raise _BudgetExhausted()
            narrowed = space.intersection(eigenspace(ads[i], lam))
            if narrowed.dim:
                found = search(i + 1, narrowed)
                if found is not None:
                    return found
        return None

    return search(0, Subspace.full(g.dim))


def _triangularize(g: LieAlgebra, budget: List[int]) -> Optional[List[Subspace]]:
    if g.dim == 0:
        return [Subspace.zero(0)]
    v = _common_eigenvector(g, budget)
    if v is None:
        return None
    line = span(g, [v])
    q = quotient(g, line)
    lower = _triangularize(q.algebra, budget)
    if lower is None:
        return None
    flag = []
    for member in lower:
        lifted = [q.section.apply(w) for w in member.vectors]
        flag.append(Subspace.span(lifted + [v], g.dim))
    flag.append(Subspace.zero(g.dim))
    return flag


def triangularize(g: LieAlgebra, max_eigen_combinations: int = DEFAULT_MAX_EIGEN_COMBINATIONS) -> TriangularizationResult:
    """Full flag of ideals with one-dimensional steps and rational weights, or the reason it fails"""
    if not is_solvable(g):
        return TriangularizationResult(False, reason=NOT_SOLVABLE)
    try:
        flag = _triangularize(g, [max_eigen_combinations])
    except _BudgetExhausted:
        logger.warning(f"{g.name or 'algebra'}: eigenvalue search stopped after {max_eigen_combinations} combinations")
        return TriangularizationResult(False, reason=BUDGET_EXHAUSTED)
    if flag is None:
        logger.debug(f"{g.name or 'algebra'}: no rational common eigenvector")
        return TriangularizationResult(False, reason=NO_COMMON_EIGENVECTOR)
    members = tuple(AlgebraSubspace(g, s) for s in flag)
    for m in members:
        if not is_ideal(g, m):
            raise InvariantViolationError("flag member is not an ideal")
    return TriangularizationResult(True, members)


def weights(g: LieAlgebra, flag: Optional[TriangularizationResult] = None) -> List[Vector]:
    """Diagonal of ad in a flag basis, as linear functionals on g (coefficients on e_1..e_n)"""
    flag = flag or triangularize(g)
    if not flag.success:
        raise TriangularizationError(flag.reason)
    basis = flag.flag_basis()
    if not basis:
        return []
    change = Matrix.from_columns(basis, rows=g.dim).inverse()
    out = []
    for t, f in enumerate(basis):
        out.append(tuple(change.apply(g.bracket(e, f))[t] for e in g.basis()))
    return out


def nilradical(g: LieAlgebra, flag: Optional[TriangularizationResult] = None) -> AlgebraSubspace:
    """ad-nilpotent elements of a completely solvable algebra: the common kernel of its weights"""
    functionals = [w for w in weights(g, flag) if any(w)]
    if not functionals:
        return whole(g)
    return AlgebraSubspace(g, kernel(Matrix.from_rows(functionals, cols=g.dim)))


@dataclass(frozen=True)
class GradedAlgebra:
    algebra: LieAlgebra
    basis: Matrix
    degrees: Tuple[int, ...]


def associated_graded(g: LieAlgebra, name: Optional[str] = None) -> GradedAlgebra:
    """sum of C^i/C^(i+1) with the induced brackets, for nilpotent g"""
    series = lower_central_series(g)
    if series.last.dim != 0:
        raise InvariantViolationError("associated graded algebra requires a nilpotent algebra")
    vectors: List[Vector] = []
    degrees: List[int] = []
    for d in range(len(series.terms) - 1):
        layer = series.terms[d + 1].space.complement_within(series.terms[d].space)
        vectors.extend(layer)
        degrees.extend([d + 1] * len(layer))
    if not vectors:
        return GradedAlgebra(g, Matrix(0, 0, ()), ())
    basis = Matrix.from_columns(vectors, rows=g.dim)
    inverse = basis.inverse()
    brackets = {}
    for i, j in combinations(range(g.dim), 2):
        target = degrees[i] + degrees[j]
        coords = inverse.apply(g.bracket(vectors[i], vectors[j]))
        kept = {k: c for k, c in enumerate(coords) if c and degrees[k] == target}
        if kept:
            brackets[(i, j)] = kept
    algebra = LieAlgebra.from_brackets(g.dim, brackets, g.labels, g.name if name is None else name)
    return GradedAlgebra(ensure_valid(algebra), basis, tuple(degrees))

"""
Exact linear and polynomial algebra over the rationals.

Everything is immutable: matrices, polynomials and subspaces are frozen values
and every function is pure. No floating point is used anywhere.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import divisors

from solvqi.exceptions import (
    DimensionMismatchError,
    InvariantViolationError,
    NonSquareMatrixError,
    SingularMatrixError,
    ZeroPolynomialError,
)

logger = logging.getLogger(__name__)

Rational = Fraction
Vector = Tuple[Fraction, ...]
RationalLike = Union[int, str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and strings such as '3/4' to a reduced Fraction"""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use a Fraction or 'p/q' string")
    return Fraction(value)


def vector(values: Iterable[RationalLike]) -> Vector:
    return tuple(to_rational(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def add_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatchError(f"cannot add vectors of lengths {len(u)} and {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def scale_vector(c: Fraction, v: Sequence[Fraction]) -> Vector:
    return tuple(c * x for x in v)


def linear_combination(coefficients: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], n: int) -> Vector:
    out = [ZERO] * n
    for c, vec in zip(coefficients, vectors):
        if c == 0:
            continue
        for k in range(n):
            out[k] += c * vec[k]
    return tuple(out)


# ---------------------------------------------------------------------------
# Matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    """Row-major rational matrix"""
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(to_rational(x) for x in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatchError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RationalLike]], rows: Optional[int] = None) -> "Matrix":
        if not columns:
            return cls(rows or 0, 0, ())
        return cls.from_rows(list(zip(*columns)), cols=len(columns)) if columns[0] else cls(0, len(columns), ())

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[RationalLike]) -> "Matrix":
        n = len(values)
        return cls(n, n, tuple(to_rational(values[i]) if i == j else ZERO for i in range(n) for j in range(n)))

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self) -> List[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def column_list(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c: RationalLike) -> "Matrix":
        c = to_rational(c)
        return Matrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        other_cols = other.column_list()
        for i in range(self.rows):
            r = self.row(i)
            for col in other_cols:
                out.append(sum((a * b for a, b in zip(r, col) if a and b), ZERO))
        return Matrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(v)} against {self.cols} columns")
        return tuple(sum((a * b for a, b in zip(self.row(i), v) if a and b), ZERO) for i in range(self.rows))

    def power(self, k: int) -> "Matrix":
        self._check_square()
        result = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    def trace(self) -> Fraction:
        self._check_square()
        return sum((self[i, i] for i in range(self.rows)), ZERO)

    def determinant(self) -> Fraction:
        self._check_square()
        grid = [list(r) for r in self.row_list()]
        n = self.rows
        det = ONE
        for c in range(n):
            pivot = next((r for r in range(c, n) if grid[r][c] != 0), None)
            if pivot is None:
                return ZERO
            if pivot != c:
                grid[c], grid[pivot] = grid[pivot], grid[c]
                det = -det
            det *= grid[c][c]
            for r in range(c + 1, n):
                f = grid[r][c] / grid[c][c]
                if f:
                    for k in range(c, n):
                        grid[r][k] -= f * grid[c][k]
        return det

    def inverse(self) -> "Matrix":
        self._check_square()
        n = self.rows
        augmented = Matrix.from_rows([list(self.row(i)) + list(Matrix.identity(n).row(i)) for i in range(n)])
        reduced, _ = rref(augmented)
        for i in range(n):
            if reduced.row(i)[:n] != Matrix.identity(n).row(i):
                raise SingularMatrixError("matrix is singular")
        return Matrix.from_rows([reduced.row(i)[n:] for i in range(n)], cols=n)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise DimensionMismatchError("column counts differ")
        return Matrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def to_strings(self) -> List[List[str]]:
        return [[str(x) for x in self.row(i)] for i in range(self.rows)]

    def _check_square(self):
        if not self.is_square:
            raise NonSquareMatrixError(f"expected a square matrix, got {self.rows}x{self.cols}")

    def _check_same_shape(self, other: "Matrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError(
                f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __repr__(self):
        return f"Matrix({self.to_strings()})"


def rref(m: Matrix) -> Tuple[Matrix, int]:
    """Reduced row-echelon form and rank"""
    grid = [list(m.row(i)) for i in range(m.rows)]
    n_rows, n_cols = m.rows, m.cols
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r == n_rows:
            break
        i_row = next((r for r in range(piv_r, n_rows) if grid[r][piv_c] != 0), None)
        if i_row is None:
            continue
        if i_row != piv_r:
            grid[piv_r], grid[i_row] = grid[i_row], grid[piv_r]
        fp = grid[piv_r][piv_c]
        if fp != 1:
            grid[piv_r] = [x / fp for x in grid[piv_r]]
        for r in range(n_rows):
            if r == piv_r:
                continue
            fr = grid[r][piv_c]
            if fr == 0:
                continue
            grid[r] = [a - fr * b for a, b in zip(grid[r], grid[piv_r])]
        piv_r += 1
    return Matrix(n_rows, n_cols, tuple(x for r in grid for x in r)), piv_r


def pivot_columns(reduced: Matrix) -> List[int]:
    pivots = []
    for i in range(reduced.rows):
        r = reduced.row(i)
        j = next((k for k, x in enumerate(r) if x != 0), None)
        if j is not None:
            pivots.append(j)
    return pivots


def kernel(m: Matrix) -> "Subspace":
    """{v : m v = 0}"""
    reduced, rank = rref(m)
    pivots = pivot_columns(reduced)
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -reduced[r, f]
        basis.append(tuple(v))
    for v in basis:
        if not is_zero_vector(m.apply(v)):
            raise InvariantViolationError("kernel vector does not annihilate the matrix")
    space = Subspace.span(basis, m.cols)
    if rank + space.dim != m.cols:
        raise InvariantViolationError("rank-nullity failed")
    return space


def eigenspace(m: Matrix, lam: RationalLike) -> "Subspace":
    if not m.is_square:
        raise NonSquareMatrixError(f"expected a square matrix, got {m.rows}x{m.cols}")
    return kernel(m - Matrix.identity(m.rows).scale(lam))


# ---------------------------------------------------------------------------
# Subspace
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Row space of an RREF basis; equality is equality of the canonical basis"""
    ambient_dim: int
    basis: Matrix

    @classmethod
    def span(cls, vectors: Iterable[Sequence[RationalLike]], ambient_dim: int) -> "Subspace":
        rows = [vector(v) for v in vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise DimensionMismatchError(f"vector of length {len(r)} in ambient dimension {ambient_dim}")
        if not rows:
            return cls.zero(ambient_dim)
        reduced, rank = rref(Matrix.from_rows(rows, cols=ambient_dim))
        return cls(ambient_dim, Matrix(rank, ambient_dim, reduced.entries[:rank * ambient_dim]))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, Matrix(0, n, ()))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Matrix.identity(n))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def vectors(self) -> List[Vector]:
        return self.basis.row_list()

    @property
    def pivots(self) -> List[int]:
        return pivot_columns(self.basis)

    def coordinates(self, v: Sequence[Fraction]) -> Vector:
        """Coordinates in the canonical basis, read off the pivot columns"""
        coords = tuple(v[p] for p in self.pivots)
        if tuple(v) != linear_combination(coords, self.vectors, self.ambient_dim):
            raise InvariantViolationError("vector is not in the subspace")
        return coords

    def contains(self, v: Sequence[Fraction]) -> bool:
        coords = tuple(v[p] for p in self.pivots)
        return tuple(v) == linear_combination(coords, self.vectors, self.ambient_dim)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.vectors)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError("ambient dimensions differ")
        return Subspace.span(self.vectors + other.vectors, self.ambient_dim)

    def annihilator(self) -> "Subspace":
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        return kernel(self.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError("ambient dimensions differ")
        constraints = self.annihilator().vectors + other.annihilator().vectors
        if not constraints:
            return Subspace.full(self.ambient_dim)
        return kernel(Matrix.from_rows(constraints, cols=self.ambient_dim))

    def complement_indices(self) -> List[int]:
        """Lexicographically first standard basis vectors completing this subspace"""
        chosen = []
        current = self
        for i in range(self.ambient_dim):
            e = unit_vector(self.ambient_dim, i)
            if not current.contains(e):
                chosen.append(i)
                current = current + Subspace.span([e], self.ambient_dim)
        return chosen

    def complement_within(self, outer: "Subspace") -> List[Vector]:
        """Vectors from outer's canonical basis completing self to outer"""
        chosen = []
        current = self
        for v in outer.vectors:
            if not current.contains(v):
                chosen.append(v)
                current = current + Subspace.span([v], self.ambient_dim)
        return chosen

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={self.basis.to_strings()})"


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

def _trim(coefficients: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    coefficients = list(coefficients)
    while coefficients and coefficients[-1] == 0:
        coefficients.pop()
    return tuple(coefficients)


@dataclass(frozen=True)
class Poly:
    """Polynomial with rational coefficients in ascending degree"""
    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _trim(to_rational(c) for c in self.coefficients))

    @classmethod
    def x(cls) -> "Poly":
        return cls((ZERO, ONE))

    @classmethod
    def constant(cls, c: RationalLike) -> "Poly":
        return cls((to_rational(c),))

    @classmethod
    def from_roots(cls, roots: Iterable[Tuple[RationalLike, int]]) -> "Poly":
        p = cls((ONE,))
        for r, m in roots:
            for _ in range(m):
                p = p * cls((-to_rational(r), ONE))
        return p

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else ZERO

    def is_zero(self) -> bool:
        return not self.coefficients

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (ZERO,) * (n - len(self.coefficients))
        b = other.coefficients + (ZERO,) * (n - len(other.coefficients))
        return Poly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly(())
        out = [ZERO] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Poly(tuple(out))

    def scale(self, c: RationalLike) -> "Poly":
        c = to_rational(c)
        return Poly(tuple(c * a for a in self.coefficients))

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroPolynomialError("division by the zero polynomial")
        remainder = list(self.coefficients)
        quotient = [ZERO] * max(len(remainder) - len(other.coefficients) + 1, 0)
        lead = other.leading
        while len(remainder) >= len(other.coefficients) and remainder:
            shift = len(remainder) - len(other.coefficients)
            factor = remainder[-1] / lead
            quotient[shift] = factor
            for i, c in enumerate(other.coefficients):
                remainder[shift + i] -= factor * c
            remainder = list(_trim(remainder))
        return Poly(tuple(quotient)), Poly(tuple(remainder))

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coefficients) if i > 0))

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ZeroPolynomialError("the zero polynomial has no monic normalization")
        return self.scale(ONE / self.leading)

    def __call__(self, x: RationalLike) -> Fraction:
        x = to_rational(x)
        acc = ZERO
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' if mono else ''}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) is 0"""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_xgcd(a: Poly, b: Poly) -> Tuple[Poly, Poly, Poly]:
    """(g, s, t) with s*a + t*b = g, g monic"""
    r0, r1 = a, b
    s0, s1 = Poly((ONE,)), Poly(())
    t0, t1 = Poly(()), Poly((ONE,))
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lead = r0.leading
    return r0.scale(ONE / lead), s0.scale(ONE / lead), t0.scale(ONE / lead)


def inverse_mod(a: Poly, modulus: Poly) -> Poly:
    g, s, _ = poly_xgcd(a % modulus, modulus)
    if g.degree != 0:
        raise InvariantViolationError(f"{a} is not invertible modulo {modulus}")
    return s % modulus


def compose_mod(p: Poly, w: Poly, modulus: Poly) -> Poly:
    """p(w(x)) reduced modulo modulus, by Horner"""
    acc = Poly(())
    for c in reversed(p.coefficients):
        acc = (acc * w + Poly((c,))) % modulus
    return acc


def char_poly(m: Matrix) -> Poly:
    """Monic characteristic polynomial by the Faddeev-LeVerrier recursion"""
    if not m.is_square:
        raise NonSquareMatrixError(f"expected a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    coefficients = [ZERO] * (n + 1)
    coefficients[n] = ONE
    identity = Matrix.identity(n)
    previous = Matrix.zeros(n)
    for k in range(1, n + 1):
        current = m @ previous + identity.scale(coefficients[n - k + 1])
        coefficients[n - k] = -(m @ current).trace() / k
        previous = current
    return Poly(tuple(coefficients))


def companion(p: Poly) -> Matrix:
    """Companion matrix of a monic polynomial; its characteristic polynomial is p"""
    if p.is_zero() or p.leading != ONE:
        raise InvariantViolationError(f"companion matrix needs a monic polynomial, got {p}")
    n = p.degree
    columns = [unit_vector(n, k + 1) for k in range(n - 1)]
    columns.append(tuple(-c for c in p.coefficients[:n]))
    return Matrix.from_columns(columns, rows=n)


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    rows = []
    for i in range(a.rows):
        for k in range(b.rows):
            rows.append([a[i, j] * b[k, l] for j in range(a.cols) for l in range(b.cols)])
    return Matrix.from_rows(rows, cols=a.cols * b.cols)


def eval_poly_at_matrix(p: Poly, m: Matrix) -> Matrix:
    if not m.is_square:
        raise NonSquareMatrixError(f"expected a square matrix, got {m.rows}x{m.cols}")
    identity = Matrix.identity(m.rows)
    acc = Matrix.zeros(m.rows)
    for c in reversed(p.coefficients):
        acc = acc @ m + identity.scale(c)
    return acc


def min_poly(m: Matrix) -> Poly:
    """Monic annihilating polynomial of least degree"""
    if not m.is_square:
        raise NonSquareMatrixError(f"expected a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    powers = [Matrix.identity(n).entries]
    current = Matrix.identity(n)
    for k in range(1, n + 1):
        current = current @ m
        powers.append(current.entries)
        relations = kernel(Matrix.from_columns(powers, rows=n * n))
        if relations.dim:
            relation = relations.vectors[0]
            return Poly(relation).monic()
    raise InvariantViolationError("no annihilating polynomial up to the dimension (Cayley-Hamilton violated)")


def squarefree_part(p: Poly) -> Poly:
    """p / gcd(p, p'), monic"""
    if p.is_zero():
        raise ZeroPolynomialError("squarefree part of the zero polynomial")
    if p.degree == 0:
        return Poly((ONE,))
    return (p // poly_gcd(p, p.derivative())).monic()


@dataclass(frozen=True)
class RationalRoots:
    roots: Tuple[Tuple[Fraction, int], ...]
    fully_split: bool

    def as_dict(self):
        return dict(self.roots)


def _integer_coefficients(p: Poly) -> List[int]:
    denominator = lcm(*(c.denominator for c in p.coefficients))
    return [int(c * denominator) for c in p.coefficients]


def rational_roots(p: Poly) -> RationalRoots:
    """All rational roots with multiplicities, by the rational-root test"""
    if p.is_zero():
        raise ZeroPolynomialError("rational roots of the zero polynomial")
    found = []
    remaining = p
    zero_multiplicity = 0
    while remaining.degree > 0 and remaining.coefficients[0] == 0:
        remaining = Poly(remaining.coefficients[1:])
        zero_multiplicity += 1
    if zero_multiplicity:
        found.append((ZERO, zero_multiplicity))
    if remaining.degree > 0:
        ints = _integer_coefficients(remaining)
        candidates = set()
        for num in divisors(abs(ints[0])):
            for den in divisors(abs(ints[-1])):
                candidates.add(Fraction(num, den))
                candidates.add(Fraction(-num, den))
        for r in sorted(candidates):
            multiplicity = 0
            linear = Poly((-r, ONE))
            while remaining.degree > 0 and remaining(r) == 0:
                remaining = remaining // linear
                multiplicity += 1
            if multiplicity:
                found.append((r, multiplicity))
            if remaining.degree <= 0:
                break
    found.sort(key=lambda item: item[0])
    return RationalRoots(tuple(found), remaining.degree == 0)


def is_nilpotent_matrix(m: Matrix) -> bool:
    return m.power(m.rows).is_zero()

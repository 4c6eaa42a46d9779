import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_invertible
from solvqi.algebra.exactlin import (
    Matrix,
    Poly,
    Subspace,
    char_poly,
    companion,
    eigenspace,
    eval_poly_at_matrix,
    is_nilpotent_matrix,
    kernel,
    kronecker,
    min_poly,
    poly_xgcd,
    rational_roots,
    rref,
    squarefree_part,
    to_rational,
)
from solvqi.algebra.reduction import jordan_chevalley
from solvqi.exceptions import (
    InvariantViolationError,
    IrrationalSpectrumError,
    SingularMatrixError,
    ZeroPolynomialError,
)

x = Poly.x()
half = Fraction(1, 2)


def linear(root) -> Poly:
    return x - Poly.constant(root)


class TestRref:
    def test_identity(self):
        reduced, rank = rref(Matrix.identity(2))
        assert reduced == Matrix.identity(2)
        assert rank == 2

    def test_already_reduced(self):
        m = Matrix.from_rows([[0, 1], [0, 0]])
        assert rref(m) == (m, 1)

    def test_dependent_rows(self):
        reduced, rank = rref(Matrix.from_rows([[1, 2], [2, 4]]))
        assert reduced == Matrix.from_rows([[1, 2], [0, 0]])
        assert rank == 1


class TestKernel:
    def test_identity_has_zero_kernel(self):
        assert kernel(Matrix.identity(3)).dim == 0

    def test_zero_matrix_kernel_is_everything(self):
        assert kernel(Matrix.zeros(3)) == Subspace.full(3)

    def test_row_vector(self):
        assert kernel(Matrix.from_rows([[1, 1]])) == Subspace.span([(1, -1)], 2)


class TestPolynomials:
    def test_char_poly_of_nilpotent_block(self):
        assert char_poly(Matrix.from_rows([[0, 1], [0, 0]])) == x * x

    def test_char_poly_of_identity(self):
        assert char_poly(Matrix.identity(2)) == linear(1) * linear(1)

    def test_char_poly_of_diagonal(self):
        assert char_poly(Matrix.diagonal([1, half])) == linear(1) * linear(half)

    def test_min_poly(self):
        assert min_poly(Matrix.identity(2)) == linear(1)
        assert min_poly(Matrix.from_rows([[0, 1], [0, 0]])) == x * x
        assert min_poly(Matrix.diagonal([1, 1, 2])) == linear(1) * linear(2)

    def test_squarefree_part(self):
        assert squarefree_part(linear(1) * linear(1)) == linear(1)
        assert squarefree_part(x * x) == x
        assert squarefree_part(linear(1) * linear(2)) == linear(1) * linear(2)

    def test_squarefree_part_of_zero(self):
        with pytest.raises(ZeroPolynomialError):
            squarefree_part(Poly(()))

    def test_rational_roots(self):
        roots = rational_roots(linear(1) * linear(half))
        assert roots.roots == ((half, 1), (Fraction(1), 1))
        assert roots.fully_split

        irrational = rational_roots(x * x - Poly.constant(2))
        assert irrational.roots == ()
        assert not irrational.fully_split

        repeated = rational_roots(x * x * linear(1))
        assert repeated.roots == ((Fraction(0), 2), (Fraction(1), 1))
        assert repeated.fully_split

    def test_eval_poly_at_matrix(self):
        m = Matrix.from_rows([[1, 2], [3, 4]])
        assert eval_poly_at_matrix(x, m) == m
        assert eval_poly_at_matrix(char_poly(m), m).is_zero()
        assert eval_poly_at_matrix(linear(1), Matrix.identity(3)).is_zero()

    def test_str(self):
        assert str(x * x - Poly.constant(half)) == "x^2 - 1/2"

    def test_xgcd(self):
        a = linear(1) * linear(2)
        b = linear(1) * linear(half)
        g, s, t = poly_xgcd(a, b)
        assert g == linear(1)
        assert s * a + t * b == g


class TestSubspace:
    def test_span_is_canonical(self):
        assert Subspace.span([(1, 1, 0), (1, -1, 0)], 3) == Subspace.span([(1, 0, 0), (0, 1, 0)], 3)

    def test_coordinates(self):
        plane = Subspace.span([(1, 0, 2), (0, 1, 3)], 3)
        assert plane.coordinates((2, -1, 1)) == (2, -1)
        assert not plane.contains((0, 0, 1))

    def test_intersection_and_sum(self):
        a = Subspace.span([(1, 0, 0), (0, 1, 0)], 3)
        b = Subspace.span([(0, 1, 0), (0, 0, 1)], 3)
        assert a.intersection(b) == Subspace.span([(0, 1, 0)], 3)
        assert a + b == Subspace.full(3)
        assert a.intersection(b).is_subspace_of(a)
        assert not a.is_subspace_of(b)

    def test_complement_within(self):
        line = Subspace.span([(0, 1, 0)], 3)
        assert line.complement_within(Subspace.full(3)) == [(1, 0, 0), (0, 0, 1)]


class TestEigenspace:
    def test_identity(self):
        assert eigenspace(Matrix.identity(2), 1) == Subspace.full(2)

    def test_diagonal(self):
        assert eigenspace(Matrix.diagonal([1, half]), half) == Subspace.span([(0, 1)], 2)

    def test_nilpotent_block(self):
        assert eigenspace(Matrix.from_rows([[0, 1], [0, 0]]), 0) == Subspace.span([(1, 0)], 2)


class TestMatrix:
    def test_inverse(self, rng):
        m = random_invertible(4, rng)
        assert m @ m.inverse() == Matrix.identity(4)

    def test_singular_inverse(self):
        with pytest.raises(SingularMatrixError):
            Matrix.from_rows([[1, 2], [2, 4]]).inverse()

    def test_floats_are_rejected(self):
        with pytest.raises(TypeError):
            to_rational(0.5)

    def test_strings_are_accepted(self):
        assert Matrix.from_rows([["1/2", "3"]]).to_strings() == [["1/2", "3"]]

    def test_companion(self):
        p = x * x * x - Poly.constant(2) * x + Poly.constant(5)
        assert char_poly(companion(p)) == p
        assert companion(x * x + Poly.constant(1)) == Matrix.from_rows([[0, -1], [1, 0]])
        with pytest.raises(InvariantViolationError):
            companion(Poly.constant(2) * x)

    def test_kronecker(self):
        b = Matrix.from_rows([[1, 2], [3, 4]])
        assert kronecker(Matrix.identity(2), b) == Matrix.from_rows(
            [[1, 2, 0, 0], [3, 4, 0, 0], [0, 0, 1, 2], [0, 0, 3, 4]]
        )
        assert kronecker(b, Matrix.from_rows([[2]])) == b.scale(2)


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=2**32))
@settings(max_examples=40, deadline=None)
def test_char_poly_matches_sympy(n, seed):
    local = random.Random(seed)
    rows = [[Fraction(local.randint(-3, 3), local.choice([1, 2])) for _ in range(n)] for _ in range(n)]
    ours = char_poly(Matrix.from_rows(rows))
    t = sympy.Symbol("t")
    exact = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in rows])
    theirs = exact.charpoly(t).all_coeffs()
    assert [sympy.Rational(c.numerator, c.denominator) for c in reversed(ours.coefficients)] == theirs


# ---------------------------------------------------------------------------
# Jordan-Chevalley
# ---------------------------------------------------------------------------

DIAGONAL_VALUES = [Fraction(v) for v in (-2, -1, 0, 1, 2)] + [half, Fraction(-1, 3)]


@st.composite
def upper_triangular(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if j < i:
                row.append(Fraction(0))
            elif j == i:
                row.append(draw(st.sampled_from(DIAGONAL_VALUES)))
            else:
                row.append(Fraction(draw(st.integers(min_value=-2, max_value=2))))
        rows.append(row)
    return Matrix.from_rows(rows)


@given(upper_triangular())
@settings(max_examples=200, deadline=None)
def test_jordan_chevalley_properties(m):
    pair = jordan_chevalley(m)
    s, n = pair.semisimple, pair.nilpotent
    assert s + n == m
    assert s @ n == n @ s
    assert squarefree_part(min_poly(s)) == min_poly(s)
    assert is_nilpotent_matrix(n)
    assert n.power(m.rows).is_zero()
    assert eval_poly_at_matrix(pair.witness, m) == s


@st.composite
def commuting_pair(draw):
    """(D, N0) with D diagonal by blocks of equal eigenvalue and N0 strictly upper triangular inside the blocks"""
    sizes = draw(st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=3))
    values = draw(st.lists(st.sampled_from(DIAGONAL_VALUES), min_size=len(sizes), max_size=len(sizes), unique=True))
    n = sum(sizes)
    d = [[Fraction(0)] * n for _ in range(n)]
    nil = [[Fraction(0)] * n for _ in range(n)]
    offset = 0
    for size, value in zip(sizes, values):
        for i in range(size):
            d[offset + i][offset + i] = value
            for j in range(i + 1, size):
                nil[offset + i][offset + j] = Fraction(draw(st.integers(min_value=-2, max_value=2)))
        offset += size
    seed = draw(st.integers(min_value=0, max_value=2**32))
    return Matrix.from_rows(d), Matrix.from_rows(nil), random_invertible(n, random.Random(seed))


@given(commuting_pair())
@settings(max_examples=60, deadline=None)
def test_jordan_chevalley_recovers_constructed_pair(pair):
    d, nil, p = pair
    inverse = p.inverse()
    m = p @ (d + nil) @ inverse
    found = jordan_chevalley(m)
    assert found.semisimple == p @ d @ inverse
    assert found.nilpotent == p @ nil @ inverse


def test_jordan_chevalley_examples():
    block = Matrix.from_rows([[0, 1], [0, 0]])
    assert jordan_chevalley(block).semisimple.is_zero()
    assert jordan_chevalley(Matrix.identity(2)).nilpotent.is_zero()
    pair = jordan_chevalley(Matrix.from_rows([[1, 1], [0, 1]]))
    assert pair.semisimple == Matrix.identity(2)
    assert pair.nilpotent == block


def test_jordan_chevalley_irrational_spectrum():
    with pytest.raises(IrrationalSpectrumError):
        jordan_chevalley(Matrix.from_rows([[0, 2], [1, 0]]))

from fractions import Fraction

import pytest

from conftest import random_invertible, rotation, sampled_catalog, sl2_pattern
from solvqi.algebra.exactlin import Matrix, Subspace, unit_vector
from solvqi.algebra.liealg import (
    BUDGET_EXHAUSTED,
    NO_COMMON_EIGENVECTOR,
    NOT_SOLVABLE,
    DerivationAction,
    LieAlgebra,
    abelian,
    adjoint_on,
    associated_graded,
    center,
    derived_algebra,
    derived_series,
    direct_sum,
    is_nilpotent,
    is_solvable,
    lower_central_series,
    nilradical,
    quotient,
    semidirect_product,
    span,
    transport,
    triangularize,
    validate,
    weights,
)
from solvqi.algebra.reduction import exponential_radical
from solvqi.exceptions import DerivationActionError, DimensionMismatchError, InvariantViolationError, NotAnIdealError
from solvqi.structure import families

half = Fraction(1, 2)


class TestValidate:
    def test_heisenberg(self, heis):
        assert validate(heis).ok

    def test_g4_9(self):
        assert validate(families.g4_9(half)).ok

    def test_violation_is_located(self):
        broken = LieAlgebra.from_brackets(3, {(0, 1): {2: 1}, (2, 0): {0: 1}}, name="broken")
        report = validate(broken)
        assert not report.ok
        assert report.triple == (0, 1, 2)
        assert report.residual == (0, 0, -1)
        assert report.describe() == "Jacobi fails on (e1, e2, e3) with residual ['0', '0', '-1']"

    def test_heisenberg_with_extra_bracket_into_the_plane_is_still_valid(self):
        # [e1,e3] = e2 only contributes [e2,[e3,e1]] = -[e2,e2] = 0 to the single triple
        g = LieAlgebra.from_brackets(3, {(0, 1): {2: 1}, (0, 2): {1: 1}})
        assert validate(g).ok

    def test_key_out_of_range(self):
        with pytest.raises(DimensionMismatchError):
            LieAlgebra(2, (((0, 2, 1), Fraction(1)),))


class TestBracket:
    def test_heisenberg(self, heis):
        assert heis.bracket_basis(0, 1) == (0, 0, 1)
        assert heis.bracket_basis(1, 0) == (0, 0, -1)

    def test_antisymmetry(self, heis):
        v = (Fraction(1), Fraction(2), Fraction(3))
        assert heis.bracket(v, v) == (0, 0, 0)

    def test_parameter(self):
        g = families.g3_5(half)
        assert g.bracket_basis(2, 1) == (0, half, 0)

    def test_ad_columns(self, g3_3):
        assert g3_3.ad_basis(2) == Matrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 0]])

    def test_describe(self):
        assert families.g3_5(half).describe() == ["[e1,e3] = -e1", "[e2,e3] = -1/2 e2"]


class TestSeries:
    def test_derived_algebra(self, heis, example_g4_9_0):
        assert derived_algebra(heis).space == Subspace.span([(0, 0, 1)], 3)
        assert derived_algebra(example_g4_9_0).space == Subspace.span([unit_vector(4, 0), unit_vector(4, 1)], 4)

    def test_lower_central(self, heis):
        assert lower_central_series(heis).dims == [3, 1, 0]
        assert lower_central_series(families.a2()).dims == [2, 1]
        assert lower_central_series(abelian(3)).dims == [3, 0]
        assert lower_central_series(families.g3_3()).dims == [3, 2]

    def test_derived(self, heis):
        assert derived_series(heis).dims == [3, 1, 0]
        assert derived_series(families.g3_5(half)).dims == [3, 2, 0]
        assert derived_series(abelian(4)).dims == [4, 0]

    def test_center(self, heis):
        assert center(heis).space == Subspace.span([(0, 0, 1)], 3)
        assert center(families.a2()).dim == 0
        assert center(abelian(2)).dim == 2

    def test_nilpotent_and_solvable(self, heis):
        assert is_nilpotent(heis)
        a2 = families.a2()
        assert not is_nilpotent(a2)
        assert is_solvable(a2)
        assert not is_solvable(sl2_pattern())


class TestConstructions:
    def test_quotient_by_center(self, heis):
        q = quotient(heis, center(heis))
        assert q.algebra.dim == 2
        assert q.algebra.is_abelian()

    def test_quotient_by_exponential_radical(self, example_g4_9_0):
        q = quotient(example_g4_9_0, exponential_radical(example_g4_9_0))
        assert q.algebra.dim == 2
        assert q.algebra.is_abelian()

    def test_quotient_by_zero(self, g3_3):
        q = quotient(g3_3, span(g3_3, []))
        assert q.algebra == g3_3

    def test_quotient_requires_an_ideal(self, g3_3):
        with pytest.raises(NotAnIdealError):
            quotient(g3_3, span(g3_3, [unit_vector(3, 2)]))

    def test_direct_sum(self, heis):
        g = direct_sum(heis, families.a2())
        assert g.dim == 5
        assert validate(g).ok
        assert g.bracket_basis(4, 3) == (0, 0, 0, 1, 0)
        assert direct_sum(abelian(0), heis) == heis

    def test_semidirect_product(self):
        plane = abelian(2)
        line = abelian(1)
        scalar = semidirect_product(plane, line, DerivationAction(line, plane, (Matrix.identity(2),)))
        assert scalar == families.g3_3()
        skewed = semidirect_product(plane, line, DerivationAction(line, plane, (Matrix.diagonal([1, half]),)))
        assert skewed == families.g3_5(half)
        assert semidirect_product(plane, abelian(0), DerivationAction(abelian(0), plane, ())) == plane

    def test_semidirect_product_rejects_non_derivations(self, heis):
        line = abelian(1)
        with pytest.raises(DerivationActionError):
            semidirect_product(heis, line, DerivationAction(line, heis, (Matrix.diagonal([1, 0, 0]),)))

    def test_adjoint_on_exponential_radical(self, example_g4_9_0):
        radical = exponential_radical(example_g4_9_0)
        assert adjoint_on(example_g4_9_0, unit_vector(4, 3), radical) == Matrix.identity(2)
        nil = adjoint_on(example_g4_9_0, unit_vector(4, 2), radical)
        assert nil == Matrix.from_rows([[0, -1], [0, 0]])
        assert nil.power(2).is_zero()

    def test_central_element_acts_by_zero(self, heis):
        assert adjoint_on(heis, unit_vector(3, 2), derived_algebra(heis)).is_zero()

    def test_transport_round_trip(self, g3_3, rng):
        basis = random_invertible(3, rng)
        moved = transport(g3_3, basis)
        assert validate(moved).ok
        assert transport(moved, basis.inverse()) == g3_3


class TestTriangularize:
    @pytest.mark.parametrize("name,params,algebra", sampled_catalog())
    def test_catalog_entries_are_completely_solvable(self, name, params, algebra):
        result = triangularize(algebra)
        assert result.success
        assert [m.dim for m in result.flag] == list(range(algebra.dim, -1, -1))

    def test_g4_9(self):
        assert triangularize(families.g4_9(half)).success

    def test_not_solvable(self):
        result = triangularize(sl2_pattern())
        assert not result.success
        assert result.reason == NOT_SOLVABLE == "not solvable"

    def test_rotation(self):
        result = triangularize(rotation())
        assert not result.success
        assert result.reason == NO_COMMON_EIGENVECTOR == "no rational common eigenvector"

    def test_exhausted_budget_is_reported_separately(self):
        result = triangularize(families.g4_5(half, 1), max_eigen_combinations=1)
        assert not result.success
        assert result.reason == BUDGET_EXHAUSTED == "search budget exhausted"
        assert triangularize(families.g4_5(half, 1)).success


class TestWeights:
    def test_g3_5(self):
        found = sorted(weights(families.g3_5(half)))
        assert found == [(0, 0, 0), (0, 0, half), (0, 0, 1)]

    def test_nilradical(self, example_g4_9_0):
        assert nilradical(families.g3_5(half)).space == Subspace.span([unit_vector(3, 0), unit_vector(3, 1)], 3)
        expected = Subspace.span([unit_vector(4, i) for i in range(3)], 4)
        assert nilradical(example_g4_9_0).space == expected

    def test_nilpotent_is_its_own_nilradical(self, heis):
        assert nilradical(heis).dim == 3


class TestAssociatedGraded:
    def test_heisenberg_is_graded(self, heis):
        graded = associated_graded(heis)
        assert graded.algebra == heis
        assert graded.degrees == (1, 1, 2)

    def test_filiform_degrees(self):
        g = LieAlgebra.from_brackets(4, {(0, 1): {2: 1}, (0, 2): {3: 1}, (1, 2): {3: 1}})
        graded = associated_graded(g)
        assert graded.degrees == (1, 1, 2, 3)
        assert validate(graded.algebra).ok

    def test_requires_nilpotent(self, g3_3):
        with pytest.raises(InvariantViolationError):
            associated_graded(g3_3)

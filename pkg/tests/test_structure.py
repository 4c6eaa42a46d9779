from fractions import Fraction

import pytest

from conftest import r_times, random_invertible, sampled_catalog, sl2_pattern
from solvqi.algebra.geometry import Tristate
from solvqi.algebra.liealg import LieAlgebra, abelian, direct_sum, transport, validate
from solvqi.algebra.reduction import rho1
from solvqi.exceptions import CatalogLookupError, DocumentError
from solvqi.language.parser import parse_file
from solvqi.structure import families
from solvqi.structure.catalog import (
    FactorSpec,
    ImageSpec,
    build,
    catalog,
    extended_entry,
    lookup,
    match,
)
from solvqi.structure.fingerprint import fingerprint
from solvqi.structure.isomorphism import isomorphic, normal_form
from solvqi.structure.splitting import split_euclidean, split_factors

half = Fraction(1, 2)


def filiform() -> LieAlgebra:
    """Nilpotent and four dimensional, so outside every catalog family"""
    return LieAlgebra.from_brackets(4, {(0, 1): {2: 1}, (0, 2): {3: 1}}, name="n4")


class TestFingerprint:
    def test_heisenberg(self, heis):
        fp = fingerprint(heis)
        assert fp.dim == 3
        assert fp.lcs_dims == (3, 1, 0)
        assert fp.center_dim == 1
        assert fp.exprad_dim == 0
        assert fp.nilpotent

    def test_g3_3(self, g3_3):
        fp = fingerprint(g3_3)
        assert fp.lcs_dims == (3, 2)
        assert fp.exprad_dim == 2
        assert fp.cone_dim == 1
        assert fp.completely_solvable

    def test_abelian(self):
        fp = fingerprint(abelian(4))
        assert fp.lcs_dims == (4, 0)
        assert fp.center_dim == 4

    def test_differences(self, heis, g3_3):
        assert "center_dim" in fingerprint(heis).differences(fingerprint(g3_3))
        assert fingerprint(heis).differences(fingerprint(heis)) == []

    def test_relabelled_example_agrees(self, example_g4_9_0, sample_path):
        alias = parse_file(sample_path("g4_9_0_alias")).to_algebra()
        assert fingerprint(alias) == fingerprint(example_g4_9_0)
        assert match(alias).key() == match(example_g4_9_0).key()


class TestSplitting:
    def test_split_euclidean(self, heis, g3_3):
        g = direct_sum(abelian(2), g3_3)
        split = split_euclidean(g)
        assert split.euclidean_dim == 2
        assert split.complement.dim == 3
        assert transport(g, split.change_of_basis) == direct_sum(abelian(2), split.complement)
        assert split_euclidean(heis).euclidean_dim == 0

    def test_example_image(self, example_g4_9_0):
        split = split_factors(rho1(example_g4_9_0).output)
        assert split.euclidean_dim == 1
        assert [f.dim for f in split.factors] == [3]
        assert split.complete

    def test_heisenberg_has_no_euclidean_factor(self, heis):
        split = split_factors(heis)
        assert split.euclidean_dim == 0
        assert len(split.factors) == 1
        assert not split.complete

    def test_abelian(self):
        split = split_factors(abelian(3))
        assert split.euclidean_dim == 3
        assert split.factors == ()

    def test_heisenberg_times_a2(self, heis):
        g = direct_sum(heis, families.a2())
        split = split_factors(g)
        assert split.euclidean_dim == 0
        assert sorted(f.dim for f in split.factors) == [2, 3]
        assert sorted(match(f).name for f in split.factors) == ["a2", "heis"]

    def test_g5_19_image(self):
        split = split_factors(rho1(families.g5_19(half)).output)
        assert split.euclidean_dim == 1
        assert match(split.factors[0]).key() == ("g4_5", (("alpha", half), ("beta", Fraction(1))))

    def test_mixed_heisenberg_is_one_block(self, heis, rng):
        split = split_factors(transport(heis, random_invertible(3, rng)))
        assert len(split.factors) == 1
        assert not split.complete

    @pytest.mark.parametrize("name,params,algebra", sampled_catalog())
    def test_recombines(self, name, params, algebra):
        g = r_times(algebra, 2)
        split = split_factors(g)
        recombined = abelian(split.euclidean_dim)
        for factor in split.factors:
            recombined = direct_sum(recombined, factor)
        assert transport(g, split.change_of_basis) == recombined


class TestCatalog:
    def test_g4_8(self):
        expected = LieAlgebra.from_brackets(4, {(0, 1): {2: 1}, (3, 0): {0: 1}, (3, 1): {1: -1}})
        assert lookup("g4_8").build() == expected

    def test_g5_19(self):
        g = build("g5_19", {"beta": "1/2"})
        assert g == families.g5_19(half)
        assert g.bracket_basis(0, 1) == (0, 0, 1, 0, 0)

    def test_a2(self):
        assert lookup("a2").build().bracket_basis(1, 0) == (1, 0)

    def test_unknown_name(self):
        with pytest.raises(CatalogLookupError):
            lookup("g6_1")

    def test_wrong_parameters(self):
        with pytest.raises(CatalogLookupError):
            build("g3_5", {"beta": 1})

    def test_inadmissible_parameter(self):
        with pytest.raises(CatalogLookupError):
            build("g3_5", {"alpha": 1})

    def test_every_entry_is_valid(self):
        for entry in catalog():
            for _, algebra in entry.sample_algebras():
                assert validate(algebra).ok

    @pytest.mark.parametrize("name,params,algebra", sampled_catalog())
    def test_recognizer_inverts_generator(self, name, params, algebra):
        found = match(algebra)
        assert found is not None
        assert found.key() == (name, tuple(params.items()))
        assert transport(algebra, found.basis) == algebra

    def test_diagonal_action(self):
        g = LieAlgebra.from_brackets(3, {(2, 0): {0: 1}, (2, 1): {1: Fraction(1, 3)}})
        assert match(g).key() == ("g3_5", (("alpha", Fraction(1, 3)),))

    def test_rescaled_generator(self):
        g = LieAlgebra.from_brackets(3, {(2, 0): {0: 3}, (2, 1): {1: 1}})
        assert match(g).key() == ("g3_5", (("alpha", Fraction(1, 3)),))

    def test_no_match(self):
        assert match(sl2_pattern()) is None
        assert match(filiform()) is None

    def test_image_tokens(self):
        image = ImageSpec.from_tokens(("euclidean=1", "g4_5", "alpha=1", "beta=1"))
        assert image == ImageSpec(1, (FactorSpec("g4_5", (("alpha", Fraction(1)), ("beta", Fraction(1)))),))
        assert image.describe() == "R x g4_5^{1,1}"
        assert ImageSpec.from_tokens(image.to_tokens()) == image
        assert ImageSpec(2, (FactorSpec("g3_3"),)).describe() == "R^2 x g3_3"

    def test_image_tokens_reject_decimals(self):
        with pytest.raises(DocumentError):
            ImageSpec.from_tokens(("euclidean=1", "g4_9", "beta=x"))

    def test_extended_entry(self):
        reference = families.g4_8()
        entry = extended_entry("sample", reference, {"conedim": ("1",), "dehn": ("cubic",), "source": ("mubarakzyanov",)})
        assert entry.extended
        assert entry.conedim == 1
        assert entry.dehn_type == "cubic"
        assert entry.recognizer(reference).key() == ("sample", ())
        assert entry.recognizer(families.g4_9(1)) is None

    def test_extended_entry_rejects_unknown_dehn_type(self):
        with pytest.raises(DocumentError):
            extended_entry("sample", families.g4_8(), {"dehn": ("polynomial",)})


@pytest.mark.parametrize("name,params,algebra", sampled_catalog())
def test_basis_change_robustness(name, params, algebra, rng):
    expected = fingerprint(algebra)
    for _ in range(20):
        moved = transport(algebra, random_invertible(algebra.dim, rng))
        assert validate(moved).ok
        assert fingerprint(moved) == expected
        found = match(moved)
        assert found is not None
        assert found.key() == (name, tuple(params.items()))


class TestIsomorphic:
    def test_example_image(self, example_g4_9_0):
        a = rho1(example_g4_9_0).output
        b = r_times(families.g3_3())
        result = isomorphic(a, b)
        assert result.value == Tristate.TRUE
        assert transport(a, result.witness) == b

    def test_recognized_parameters_differ(self):
        result = isomorphic(families.g3_5(half), families.g3_5(Fraction(1, 3)))
        assert result.value == Tristate.FALSE
        assert "normal forms differ" in result.reason

    def test_fingerprints_differ(self, heis, g3_3):
        result = isomorphic(heis, g3_3)
        assert result.value == Tristate.FALSE
        assert "fingerprints differ" in result.reason

    def test_dimensions_differ(self, heis):
        assert isomorphic(heis, families.a2()).value == Tristate.FALSE

    def test_outside_the_catalog_is_unknown(self, rng):
        g = filiform()
        moved = transport(g, random_invertible(4, rng))
        assert moved != g
        result = isomorphic(g, moved)
        assert result.value == Tristate.UNKNOWN
        assert not result

    def test_identity(self, g3_3):
        result = isomorphic(g3_3, g3_3)
        assert result
        assert result.witness is not None

    @pytest.mark.parametrize("name,params,algebra", sampled_catalog())
    def test_witness_after_basis_change(self, name, params, algebra, rng):
        moved = transport(algebra, random_invertible(algebra.dim, rng))
        result = isomorphic(algebra, moved)
        assert result.value == Tristate.TRUE
        assert transport(algebra, result.witness) == moved

    def test_normal_form_of_products(self, heis):
        form = normal_form(direct_sum(families.a2(), heis))
        assert form.fully_matched
        assert [name for name, _ in form.keys] == ["a2", "heis"]

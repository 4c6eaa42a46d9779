from fractions import Fraction
from itertools import combinations

import pytest

from conftest import EXTENDED, r_times, random_invertible, rotation
from solvqi.algebra.liealg import LieAlgebra, transport
from solvqi.algebra.reduction import rho1
from solvqi.config.settings import EngineConfig, TriangularizeSettings
from solvqi.exceptions import SearchBudgetExhaustedError, TriangularizationError
from solvqi.language.parser import parse_file
from solvqi.services.qi_engine import (
    FIRED,
    NOT_APPLICABLE,
    SYMMETRIC_RIGIDITY,
    QIEngine,
    VerdictKind,
    replay,
    verdict_summary,
)
from solvqi.structure import families

half = Fraction(1, 2)
ALPHAS = [Fraction(1, 3), half, Fraction(2, 3)]
BETAS = [Fraction(1, 3), half, Fraction(2, 3), Fraction(3, 4)]


@pytest.fixture(scope="module")
def engine():
    return QIEngine()


def extended(name: str) -> LieAlgebra:
    return parse_file(EXTENDED / f"{name}.lie").to_algebra()


def filiform() -> LieAlgebra:
    return LieAlgebra.from_brackets(4, {(0, 1): {2: 1}, (0, 2): {3: 1}}, name="n4")


@pytest.mark.parametrize("a,b", list(combinations(ALPHAS, 2)))
def test_g3_5_separated_by_conformal_dimension(engine, a, b):
    verdict = engine.compare(families.g3_5(a), families.g3_5(b))
    assert verdict.kind == VerdictKind.NOT_QUASIISOMETRIC
    deciding = verdict.deciding_rule
    assert deciding.rule_id == "R2-conformal-dimension"
    assert deciding.inputs["cdims"] == [str(1 + 1 / a), str(1 + 1 / b)]


@pytest.mark.parametrize("a,b", list(combinations(BETAS, 2)))
def test_g5_19_separated_by_product_matching(engine, a, b):
    verdict = engine.compare(families.g5_19(a), families.g5_19(b))
    assert verdict.kind == VerdictKind.NOT_QUASIISOMETRIC
    assert [app.rule_id for app in verdict.certificate if app.conclusion == NOT_APPLICABLE] == [
        "R2-conformal-dimension"
    ]
    deciding = verdict.deciding_rule
    assert deciding.rule_id == "R3-product-matching"
    assert "conformal dimensions" in deciding.inputs["separations"]


def test_growth_separates_nilpotent_from_exponential(engine, heis, g3_3):
    verdict = engine.compare(heis, g3_3)
    assert verdict.kind == VerdictKind.NOT_QUASIISOMETRIC
    assert verdict.deciding_rule.rule_id == "R0-growth"
    assert len(verdict.certificate) == 3


def test_cone_dimension_separates(engine, g3_3):
    verdict = engine.compare(r_times(g3_3), families.g4_5(half, 1))
    assert verdict.kind == VerdictKind.NOT_QUASIISOMETRIC
    assert verdict.deciding_rule.rule_id == "R1-cone-dimension"


def test_example_against_r_times_g3_5(engine, example_g4_9_0, sample_path):
    other = parse_file(sample_path("r_x_g3_5_half")).to_algebra()
    verdict = engine.compare(example_g4_9_0, other)
    assert verdict.kind == VerdictKind.NOT_QUASIISOMETRIC
    deciding = verdict.deciding_rule
    assert deciding.rule_id == "R3-product-matching"
    assert "conformal dimensions" in deciding.inputs["separations"]


def test_reflexive(engine):
    g = families.g4_5(Fraction(1, 3), half)
    verdict = engine.compare(g, g)
    assert verdict.kind == VerdictKind.OLOG_EQUIVALENT
    assert verdict.deciding_rule.rule_id == "R4-rigidity"
    assert verdict.witness is not None


def test_rho1_image_is_equivalent(engine, example_g4_9_0):
    verdict = engine.compare(example_g4_9_0, rho1(example_g4_9_0).output)
    assert verdict.kind == VerdictKind.OLOG_EQUIVALENT


def test_transcribed_images_agree(engine):
    verdict = engine.compare(extended("g5_28"), extended("g5_32"))
    assert verdict.kind == VerdictKind.OLOG_EQUIVALENT
    a, b = rho1(extended("g5_28")).output, rho1(extended("g5_32")).output
    assert transport(a, verdict.witness) == b


def test_outside_the_catalog_is_inconclusive(engine, rng):
    g = filiform()
    verdict = engine.compare(g, transport(g, random_invertible(4, rng)))
    assert verdict.kind == VerdictKind.INCONCLUSIVE
    assert verdict.deciding_rule is None
    assert verdict.certificate[-1].inputs["isomorphic"] == "unknown"


def test_requires_complete_solvability(engine, g3_3):
    with pytest.raises(TriangularizationError):
        engine.compare(rotation(), g3_3)


def test_exhausted_search_budget(g3_3):
    config = EngineConfig(triangularize=TriangularizeSettings(max_eigen_combinations=1))
    with pytest.raises(SearchBudgetExhaustedError) as caught:
        QIEngine(config).compare(families.g4_5(half, 1), g3_3)
    assert caught.value.exit_code == 2
    assert caught.value.reason == "search budget exhausted"


def test_symmetric_annotation(engine, g3_3):
    assert engine.compare(g3_3, g3_3).annotations == (SYMMETRIC_RIGIDITY[0],)
    assert engine.compare(families.g3_5(half), families.g3_5(half)).annotations == ()


def test_symmetric_annotation_needs_equivalence(engine, g3_3):
    verdict = engine.compare(g3_3, families.g3_5(half))
    assert verdict.kind is VerdictKind.NOT_QUASIISOMETRIC
    assert verdict.annotations == ()
    assert engine.compare(r_times(g3_3), r_times(g3_3)).annotations == ()


PAIRS = [
    (families.g3_5(half), families.g3_5(Fraction(1, 3))),
    (families.g5_19(half), families.g5_19(Fraction(3, 4))),
    (families.heis(), families.g3_3()),
    (families.g4_9(1), r_times(families.g3_5(half))),
    (families.g4_9(1), families.g4_9(1)),
    (r_times(families.g4_9(half)), families.g5_19(half)),
]


@pytest.mark.parametrize("a,b", PAIRS, ids=lambda g: g.name)
def test_verdict_is_symmetric(engine, a, b):
    assert engine.compare(a, b).kind == engine.compare(b, a).kind


@pytest.mark.parametrize("a,b", PAIRS, ids=lambda g: g.name)
def test_certificates_replay(engine, a, b):
    verdict = engine.compare(a, b)
    assert all(replay(app) for app in verdict.certificate)
    summary = verdict_summary(verdict)
    assert summary["verdict"] == verdict.kind.value
    assert [c["rule"] for c in summary["certificate"]] == [app.rule_id for app in verdict.certificate]


def test_replay_rejects_tampered_conclusion(engine):
    verdict = engine.compare(families.g3_5(half), families.g3_5(Fraction(1, 3)))
    application = verdict.deciding_rule
    assert application.conclusion == FIRED
    tampered = type(application)(application.rule_id, application.inputs, "does not separate", application.citation)
    assert not replay(tampered)


def test_replay_rechecks_the_rigidity_witness(engine):
    verdict = engine.compare(extended("g5_28"), extended("g5_32"))
    application = verdict.deciding_rule
    assert application.rule_id == "R4-rigidity"
    assert replay(application)
    dim = application.inputs["images"][0]["dim"]
    collapsed = [["0"] * dim] + application.inputs["witness"][1:]
    for witness in (None, collapsed, [["1"]], [["1"] * dim] * dim):
        tampered = type(application)(
            application.rule_id, {**application.inputs, "witness": witness}, application.conclusion, application.citation
        )
        assert not replay(tampered)


@pytest.mark.parametrize("beta", BETAS)
def test_never_separates_from_own_image(engine, beta):
    g = families.g5_19(beta)
    assert engine.compare(g, rho1(g).output).kind != VerdictKind.NOT_QUASIISOMETRIC

# services/qi_engine.py
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from solvqi.algebra.exactlin import Matrix
from solvqi.algebra.geometry import (
    ABELIAN,
    HeintzeData,
    NotHeintze,
    SymmetricTag,
    Tristate,
    conformal_dimension,
    detect_diagonal_heintze,
    identify_rank_one_iwasawa,
    strong_pointed_sphere,
)
from solvqi.algebra.liealg import BUDGET_EXHAUSTED, LieAlgebra, transport, triangularize
from solvqi.algebra.reduction import ReductionResult, exponential_radical, rho1
from solvqi.config.settings import EngineConfig, engine_config
from solvqi.exceptions import (
    DimensionMismatchError,
    SearchBudgetExhaustedError,
    SingularMatrixError,
    TriangularizationError,
)
from solvqi.structure.catalog import CatalogEntry, match
from solvqi.structure.isomorphism import IsomorphismResult, isomorphic
from solvqi.structure.splitting import SplitResult, split_factors

logger = logging.getLogger(__name__)


class VerdictKind(str, Enum):
    NOT_QUASIISOMETRIC = "NotQuasiisometric"
    OLOG_EQUIVALENT = "OLogEquivalent"
    INCONCLUSIVE = "Inconclusive"


FIRED = "separates"
NOT_FIRED = "does not separate"
NOT_APPLICABLE = "not applicable"
EQUIVALENT = "O(log)-equivalent"


@dataclass(frozen=True)
class RuleApplication:
    rule_id: str
    inputs: Dict[str, Any]
    conclusion: str
    citation: str

    @property
    def fired(self) -> bool:
        return self.conclusion in (FIRED, EQUIVALENT)

    def as_dict(self) -> Dict[str, Any]:
        return {"rule": self.rule_id, "inputs": self.inputs, "conclusion": self.conclusion, "citation": self.citation}


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    certificate: Tuple[RuleApplication, ...]
    witness: Optional[Matrix] = None
    annotations: Tuple[str, ...] = ()

    @property
    def deciding_rule(self) -> Optional[RuleApplication]:
        return next((app for app in self.certificate if app.fired), None)


@dataclass(frozen=True)
class Rule:
    rule_id: str
    title: str
    citation: str
    replay: Callable[[Dict[str, Any]], str]


# ---------------------------------------------------------------------------
# Rule checks; each maps stored inputs to the conclusion it supports
# ---------------------------------------------------------------------------

def _growth(inputs: Dict[str, Any]) -> str:
    trivial = [d == 0 for d in inputs["exprad_dims"]]
    return FIRED if trivial[0] != trivial[1] else NOT_FIRED


def _cone(inputs: Dict[str, Any]) -> str:
    a, b = inputs["cone_dims"]
    return FIRED if a != b else NOT_FIRED


def _conformal(inputs: Dict[str, Any]) -> str:
    a, b = inputs["cdims"]
    if a is None or b is None:
        return NOT_APPLICABLE
    return FIRED if Fraction(a) != Fraction(b) else NOT_FIRED


def product_separations(inputs: Dict[str, Any]) -> List[str]:
    """Which components of two eligible product decompositions differ"""
    left, right = inputs["sides"]
    found = []
    if left["euclidean"] != right["euclidean"]:
        found.append("euclidean rank")
    if sorted(left["iwasawa"]) != sorted(right["iwasawa"]):
        found.append("rank one Iwasawa factors")
    if len(left["factors"]) != len(right["factors"]):
        found.append("factor count")
    cdims = [sorted(Fraction(f["cdim"]) for f in side["factors"]) for side in (left, right)]
    if cdims[0] != cdims[1]:
        found.append("conformal dimensions")
    others = [[f for f in side["factors"] if f["iwasawa"] == "none"] for side in (left, right)]
    if all(f["abelian"] and f["class"] is not None for side in others for f in side):
        classes = [sorted(f["class"] for f in side) for side in others]
        if classes[0] != classes[1]:
            found.append("catalog classes")
    return found


def _product(inputs: Dict[str, Any]) -> str:
    if not all(side["eligible"] for side in inputs["sides"]):
        return NOT_APPLICABLE
    return FIRED if product_separations(inputs) else NOT_FIRED


def structure_table(g: LieAlgebra) -> Dict[str, Any]:
    return {"dim": g.dim, "constants": [[i, j, k, str(c)] for (i, j, k), c in g.constants]}


def _from_table(table: Dict[str, Any]) -> LieAlgebra:
    return LieAlgebra(table["dim"], tuple(((i, j, k), c) for i, j, k, c in table["constants"]))


def _rigidity(inputs: Dict[str, Any]) -> str:
    if inputs["isomorphic"] != Tristate.TRUE.value or inputs.get("witness") is None:
        return NOT_FIRED
    left, right = (_from_table(t) for t in inputs["images"])
    try:
        transported = transport(left, Matrix.from_rows(inputs["witness"], cols=left.dim))
    except (DimensionMismatchError, SingularMatrixError):
        return NOT_FIRED
    return EQUIVALENT if transported == right else NOT_FIRED


R0 = Rule(
    "R0-growth",
    "growth type",
    "polynomial and exponential volume growth are quasiisometry invariants; the exponential radical "
    "is trivial exactly for nilpotent groups",
    _growth,
)
R1 = Rule(
    "R1-cone-dimension",
    "cone dimension",
    "the cone dimension, the covering dimension of the asymptotic cone, equals dim g minus the "
    "dimension of the exponential radical and is a quasiisometry invariant",
    _cone,
)
R2 = Rule(
    "R2-conformal-dimension",
    "conformal dimension",
    "quasiisometries between Heintze groups induce quasisymmetric boundary maps, which preserve the "
    "conformal dimensions of their Gromov boundaries",
    _conformal,
)
R3 = Rule(
    "R3-product-matching",
    "product matching",
    "if S and S' are quasiisometric completely solvable groups whose rho1 images are R^n times rank one "
    "Iwasawa groups times diagonal Heintze groups with the strong pointed sphere property, then n = n', "
    "the Iwasawa parts are isomorphic and the Heintze factors pair up O(log)-equivalently; paired "
    "factors have equal conformal dimension, and paired factors with abelian nilradical are isomorphic",
    _product,
)
R4 = Rule(
    "R4-rigidity",
    "rho1 rigidity",
    "a completely solvable group is O(log)-bilipschitz equivalent to its rho1 image",
    _rigidity,
)

RULES: Dict[str, Rule] = {rule.rule_id: rule for rule in (R0, R1, R2, R3, R4)}

SYMMETRIC_RIGIDITY = (
    "A1-symmetric-rigidity",
    "a completely solvable group admitting a symmetric left-invariant metric with no Euclidean factor "
    "is quasiisometrically rigid among completely solvable groups: if quasiisometric, the inputs are isomorphic",
)


def replay(application: RuleApplication) -> bool:
    """Re-run the rule on its stored inputs and compare with the recorded conclusion"""
    rule = RULES.get(application.rule_id)
    if rule is None:
        return False
    return rule.replay(application.inputs) == application.conclusion


# ---------------------------------------------------------------------------
# Per algebra invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FactorProfile:
    dim: int
    recognized: Optional[str]
    heintze: Optional[HeintzeData]
    cdim: Optional[Fraction]
    tag: SymmetricTag
    spsp: Tristate
    abelian_nilradical: bool
    reason: str = ""

    @property
    def eligible(self) -> bool:
        if self.heintze is None:
            return False
        return self.tag.family != "none" or self.spsp == Tristate.TRUE or self.abelian_nilradical

    def summary(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "match": self.recognized,
            "heintze": self.heintze is not None,
            "cdim": str(self.cdim) if self.cdim is not None else None,
            "iwasawa": self.tag.describe(),
            "spsp": self.spsp.value,
        }


@dataclass(frozen=True)
class AlgebraProfile:
    algebra: LieAlgebra
    exprad_dim: int
    cone_dim: int
    reduction: ReductionResult
    split: SplitResult
    factors: Tuple[FactorProfile, ...]
    image_heintze: Optional[HeintzeData]
    image_cdim: Optional[Fraction]
    symmetric: bool = field(default=False)

    @property
    def image(self) -> LieAlgebra:
        return self.reduction.output

    @property
    def product_eligible(self) -> bool:
        return self.split.complete and all(f.eligible for f in self.factors)

    def product_side(self) -> Dict[str, Any]:
        return {
            "eligible": self.product_eligible,
            "euclidean": self.split.euclidean_dim,
            "iwasawa": sorted(f.tag.describe() for f in self.factors if f.tag.family != "none"),
            "factors": [
                {
                    "cdim": str(f.cdim) if f.cdim is not None else None,
                    "iwasawa": f.tag.describe(),
                    "abelian": f.abelian_nilradical,
                    "class": f.recognized,
                }
                for f in self.factors
            ],
        }


def _recognized_name(g: LieAlgebra, entries: Optional[List[CatalogEntry]]) -> Optional[str]:
    found = match(g, entries)
    if found is None:
        return None
    if not found.params:
        return found.name
    return f"{found.name}^{{{','.join(str(v) for _, v in found.params)}}}"


class QIEngine:
    """Applies the quasiisometry rule table to pairs of completely solvable algebras"""

    def __init__(self, config: EngineConfig = None, entries: Optional[Iterable[CatalogEntry]] = None):
        self.logger = logging.getLogger(__name__)
        self.config = config or engine_config()
        self.entries = list(entries) if entries is not None else None

    def _require_completely_solvable(self, g: LieAlgebra):
        result = triangularize(g, self.config.triangularize.max_eigen_combinations)
        if result.reason == BUDGET_EXHAUSTED:
            raise SearchBudgetExhaustedError(result.reason)
        if not result.success:
            raise TriangularizationError(result.reason)

    def factor_profile(self, factor: LieAlgebra) -> FactorProfile:
        recognized = _recognized_name(factor, self.entries)
        detected = detect_diagonal_heintze(factor)
        if isinstance(detected, NotHeintze):
            return FactorProfile(factor.dim, recognized, None, None, SymmetricTag("none"), Tristate.UNKNOWN,
                                 False, detected.reason)
        return FactorProfile(
            factor.dim,
            recognized,
            detected,
            conformal_dimension(detected),
            identify_rank_one_iwasawa(detected),
            strong_pointed_sphere(detected).value,
            detected.nilradical_kind == ABELIAN,
        )

    def profile(self, g: LieAlgebra) -> AlgebraProfile:
        self._require_completely_solvable(g)
        radical = exponential_radical(g)
        reduction = rho1(g)
        split = split_factors(reduction.output)
        factors = tuple(self.factor_profile(f) for f in split.factors)
        detected = detect_diagonal_heintze(reduction.output) if g.dim - radical.dim == 1 else None
        heintze = detected if isinstance(detected, HeintzeData) else None
        symmetric = (
            split.euclidean_dim == 0
            and split.complete
            and bool(factors)
            and all(f.tag.family != "none" for f in factors)
        )
        self.logger.debug(
            f"{g.name}: cone dim {g.dim - radical.dim}, rho1 splits as R^{split.euclidean_dim} x "
            f"{[f.recognized or f.dim for f in factors]}"
        )
        return AlgebraProfile(
            algebra=g,
            exprad_dim=radical.dim,
            cone_dim=g.dim - radical.dim,
            reduction=reduction,
            split=split,
            factors=factors,
            image_heintze=heintze,
            image_cdim=conformal_dimension(heintze) if heintze is not None else None,
            symmetric=symmetric,
        )

    def compare(self, a: LieAlgebra, b: LieAlgebra) -> Verdict:
        return self.compare_profiles(self.profile(a), self.profile(b))

    def compare_profiles(self, pa: AlgebraProfile, pb: AlgebraProfile) -> Verdict:
        certificate: List[RuleApplication] = []

        def apply(rule: Rule, inputs: Dict[str, Any]) -> RuleApplication:
            application = RuleApplication(rule.rule_id, inputs, rule.replay(inputs), rule.citation)
            certificate.append(application)
            return application

        separating = [
            apply(R0, {"exprad_dims": [pa.exprad_dim, pb.exprad_dim]}),
            apply(R1, {"cone_dims": [pa.cone_dim, pb.cone_dim]}),
            apply(R2, {"cdims": [_text(pa.image_cdim), _text(pb.image_cdim)]}),
        ]
        if any(app.fired for app in separating):
            return self._verdict(VerdictKind.NOT_QUASIISOMETRIC, certificate, pa, pb)

        sides = {"sides": [pa.product_side(), pb.product_side()]}
        if all(side["eligible"] for side in sides["sides"]):
            sides["separations"] = product_separations(sides)
        product = apply(R3, sides)
        if product.fired:
            return self._verdict(VerdictKind.NOT_QUASIISOMETRIC, certificate, pa, pb)

        iso: IsomorphismResult = isomorphic(pa.image, pb.image, self.entries)
        rigidity = apply(R4, {
            "isomorphic": iso.value.value,
            "reason": iso.reason,
            "images": [structure_table(pa.image), structure_table(pb.image)],
            "witness": iso.witness.to_strings() if iso.witness is not None else None,
        })
        if rigidity.fired:
            return self._verdict(VerdictKind.OLOG_EQUIVALENT, certificate, pa, pb, iso.witness)
        return self._verdict(VerdictKind.INCONCLUSIVE, certificate, pa, pb)

    def _verdict(self, kind: VerdictKind, certificate: List[RuleApplication], pa: AlgebraProfile,
                 pb: AlgebraProfile, witness: Optional[Matrix] = None) -> Verdict:
        annotations = ()
        if kind is VerdictKind.OLOG_EQUIVALENT and pa.symmetric and pb.symmetric:
            annotations = (SYMMETRIC_RIGIDITY[0],)
        deciding = next((app.rule_id for app in certificate if app.fired), "none")
        self.logger.info(f"compare {pa.algebra.name} vs {pb.algebra.name}: {kind.value} (rule {deciding})")
        return Verdict(kind, tuple(certificate), witness, annotations)


def _text(value: Optional[Fraction]) -> Optional[str]:
    return str(value) if value is not None else None


def verdict_summary(verdict: Verdict) -> Dict[str, Any]:
    """JSON ready form used by reports"""
    return {
        "verdict": verdict.kind.value,
        "certificate": [app.as_dict() for app in verdict.certificate],
        "witness": verdict.witness.to_strings() if verdict.witness is not None else None,
        "annotations": list(verdict.annotations),
    }


def annotation_text(annotation: str) -> Tuple[str, str]:
    if annotation == SYMMETRIC_RIGIDITY[0]:
        return SYMMETRIC_RIGIDITY
    raise KeyError(annotation)

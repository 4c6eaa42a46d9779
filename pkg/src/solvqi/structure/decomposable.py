"""
Five dimensional groups whose rho1 image decomposes as a product, with the
image, cone dimension and Dehn function type listed for each.

Row images are functions of the entry's parameter values and are written in
the catalog's normal forms, so they can be compared with a computed image
directly.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from solvqi.structure.catalog import FactorSpec, ImageSpec

Params = Dict[str, Fraction]

FAMILIES = ("G3_3_3", "G3_3_5", "G2_4_5", "G2_4_9")


def diagonal_normal_form(weights: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Divide by a weight of largest absolute value; keep the lexicographically greatest remainder"""
    top = max(abs(w) for w in weights)
    best = None
    for w in set(weights):
        if abs(w) != top:
            continue
        rest = list(weights)
        rest.remove(w)
        candidate = tuple(sorted(x / w for x in rest))
        if best is None or candidate > best:
            best = candidate
    return best


def g3_5_factor(weights: Sequence[Fraction]) -> FactorSpec:
    (alpha,) = diagonal_normal_form(weights)
    return FactorSpec("g3_5", (("alpha", alpha),))


def g4_5_factor(weights: Sequence[Fraction]) -> FactorSpec:
    alpha, beta = diagonal_normal_form(weights)
    return FactorSpec("g4_5", (("alpha", alpha), ("beta", beta)))


def g5_19_image(beta: Fraction) -> ImageSpec:
    return ImageSpec(1, (g4_5_factor([Fraction(1), Fraction(1), beta]),))


def _fixed(image: ImageSpec) -> Callable[[Params], ImageSpec]:
    return lambda params: image


def _anything(params: Params) -> bool:
    return True


@dataclass(frozen=True)
class Table1Row:
    """One group of the decomposable-image table"""
    label: str
    entry: Optional[str]
    image_text: str
    expected: Callable[[Params], ImageSpec]
    conedim: int
    dehn: str
    family: Optional[str] = None
    admits: Callable[[Params], bool] = _anything


_R2_G3_3 = _fixed(ImageSpec(2, (FactorSpec("g3_3"),)))
_R_G4_5_11 = _fixed(ImageSpec(1, (FactorSpec("g4_5", (("alpha", Fraction(1)), ("beta", Fraction(1)))),)))
_R_G4_9_1 = _fixed(ImageSpec(1, (FactorSpec("g4_9", (("beta", Fraction(1)),)),)))


def _r2_g3_5(params: Params) -> ImageSpec:
    return ImageSpec(2, (g3_5_factor([Fraction(1), params["alpha"]]),))


def _r_g4_5(params: Params) -> ImageSpec:
    return ImageSpec(1, (g4_5_factor([Fraction(1), Fraction(1), params["beta"]]),))


TABLE1_ROWS: Tuple[Table1Row, ...] = (
    Table1Row("G5,16^{0,tau}", "g5_16", "R^2 x g3_3", _R2_G3_3, 3, "quadratic", "G3_3_3",
              lambda p: p["tau"] != 0),
    Table1Row("G5,17^{tau,0,1}", "g5_17", "R^2 x g3_3", _R2_G3_3, 3, "quadratic", "G3_3_3",
              lambda p: p["tau"] != 0),
    Table1Row("G5,13^{alpha<1,0,1}", "g5_13_neg", "R^2 x g3_5^{1/alpha}", _r2_g3_5, 3, "exponential",
              admits=lambda p: p["alpha"] < 0),
    Table1Row("G5,13^{alpha>1,0,1}", "g5_13", "R^2 x g3_5^{1/alpha}", _r2_g3_5, 3, "quadratic", "G3_3_5",
              lambda p: p["alpha"] > 1),
    Table1Row("G5,19^{1,beta<0}", "g5_19", "R x g4_5^{gamma,1}", _r_g4_5, 2, "exponential",
              admits=lambda p: p["beta"] < 0),
    Table1Row("G5,35^{0,beta<0}", "g5_35_neg", "R x g4_5^{gamma,1}", _r_g4_5, 2, "exponential",
              admits=lambda p: p["beta"] < 0),
    Table1Row("G5,19^{1,beta>0}", "g5_19", "R x g4_5^{gamma,1}", _r_g4_5, 2, "quadratic", "G2_4_5",
              lambda p: p["beta"] > 0),
    Table1Row("G5,35^{0,beta>0}", "g5_35", "R x g4_5^{gamma,1}", _r_g4_5, 2, "quadratic", "G2_4_5",
              lambda p: p["beta"] > 0),
    Table1Row("G5,27", "g5_27", "R x g4_5^{1,1}", _R_G4_5_11, 2, "quadratic", "G2_4_5"),
    Table1Row("G5,28^1", "g5_28", "R x g4_5^{1,1}", _R_G4_5_11, 2, "quadratic", "G2_4_5"),
    Table1Row("G5,32^alpha", "g5_32", "R x g4_5^{1,1}", _R_G4_5_11, 2, "quadratic", "G2_4_5"),
    Table1Row("G5,20^0", "g5_20", "R x g4_8", _fixed(ImageSpec(1, (FactorSpec("g4_8"),))), 2, "exponential"),
    Table1Row("G5,25^{1,0}", "g5_25", "heis x a2",
              _fixed(ImageSpec(0, (FactorSpec("a2"), FactorSpec("heis")))), 4, "cubic"),
    Table1Row("G5,30^1", "g5_30", "R x g4_9^1", _R_G4_9_1, 2, "quadratic", "G2_4_9"),
    Table1Row("G5,37", "g5_37", "R x g4_9^1", _R_G4_9_1, 2, "quadratic", "G2_4_9"),
)


def rows_for(entry: str) -> List[Table1Row]:
    return [row for row in TABLE1_ROWS if row.entry == entry]

import random
from fractions import Fraction
from pathlib import Path

import pytest

from solvqi.algebra.exactlin import Matrix
from solvqi.algebra.liealg import LieAlgebra, abelian, direct_sum
from solvqi.structure import families
from solvqi.structure.catalog import catalog

ROOT = Path(__file__).resolve().parent.parent
SAMPLES = ROOT / "samples"
GOLDEN = Path(__file__).resolve().parent / "golden"
EXTENDED = ROOT / "src" / "solvqi" / "structure" / "extended"


def random_invertible(n: int, rng: random.Random) -> Matrix:
    """Product of unit lower and upper triangular matrices times a nonzero diagonal"""
    lower = Matrix.from_rows(
        [[1 if i == j else (rng.randint(-2, 2) if j < i else 0) for j in range(n)] for i in range(n)], cols=n
    )
    upper = Matrix.from_rows(
        [[1 if i == j else (rng.randint(-2, 2) if j > i else 0) for j in range(n)] for i in range(n)], cols=n
    )
    scale = Matrix.diagonal([Fraction(rng.choice([1, -1, 2, -3]), rng.choice([1, 2, 3])) for _ in range(n)])
    return lower @ upper @ scale


def sampled_catalog():
    """(entry name, params, algebra) for every built in family at its sampled parameters"""
    out = []
    for entry in catalog():
        for params, algebra in entry.sample_algebras():
            label = ",".join(f"{k}={v}" for k, v in params.items())
            out.append(pytest.param(entry.name, params, algebra, id=f"{entry.name}[{label}]" if label else entry.name))
    return out


def sl2_pattern() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, {(0, 1): {2: 1}, (2, 0): {0: 2}, (2, 1): {1: -2}}, name="sl2")


def rotation() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, {(2, 0): {1: 1}, (2, 1): {0: -1}}, name="rotation")


def g4_9_zero() -> LieAlgebra:
    """The four dimensional example with brackets [e4,e1]=e1, [e4,e2]=e2, [e2,e3]=e1"""
    return LieAlgebra.from_brackets(4, {(3, 0): {0: 1}, (3, 1): {1: 1}, (1, 2): {0: 1}}, name="g4_9_0")


def r_times(g: LieAlgebra, k: int = 1) -> LieAlgebra:
    return direct_sum(abelian(k), g, name=f"R^{k} x {g.name}")


@pytest.fixture
def rng():
    return random.Random(20240617)


@pytest.fixture
def heis():
    return families.heis()


@pytest.fixture
def g3_3():
    return families.g3_3()


@pytest.fixture
def example_g4_9_0():
    return g4_9_zero()


@pytest.fixture
def sample_path():
    def _path(name: str) -> str:
        return str(SAMPLES / f"{name}.lie")

    return _path

"""
Restricted isomorphism recognition.

A `true` answer always carries a basis change W with transport(a, W) == b.
Non isomorphism is decided from fingerprints or from differing normal forms
of complete factor splittings; everything else is `unknown`.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from solvqi.algebra.exactlin import Matrix, Vector, linear_combination
from solvqi.algebra.geometry import Tristate
from solvqi.algebra.liealg import LieAlgebra, transport
from solvqi.exceptions import InvariantViolationError
from solvqi.structure.catalog import CatalogEntry, match
from solvqi.structure.fingerprint import fingerprint
from solvqi.structure.recognizers import Recognition
from solvqi.structure.splitting import split_factors

logger = logging.getLogger(__name__)

FactorKey = Tuple[str, tuple]


@dataclass(frozen=True)
class NormalForm:
    """transport(g, basis) is R^euclidean_dim + the recognized factors in sorted key order"""
    euclidean_dim: int
    keys: Tuple[FactorKey, ...]
    basis: Optional[Matrix]
    complete: bool
    unmatched: int

    @property
    def fully_matched(self) -> bool:
        return self.unmatched == 0 and self.basis is not None


@dataclass(frozen=True)
class IsomorphismResult:
    value: Tristate
    witness: Optional[Matrix] = None
    reason: str = ""

    def __bool__(self):
        return self.value == Tristate.TRUE


def normal_form(g: LieAlgebra, entries: Optional[Iterable[CatalogEntry]] = None) -> NormalForm:
    entries = list(entries) if entries is not None else None
    split = split_factors(g)
    k = split.euclidean_dim
    recognized: List[Tuple[FactorKey, int, Recognition]] = []
    unmatched = 0
    offset = k
    for factor in split.factors:
        found = match(factor, entries)
        if found is None:
            unmatched += 1
        else:
            recognized.append((found.key(), offset, found))
        offset += factor.dim
    recognized.sort(key=lambda item: (item[0][0], tuple(str(v) for _, v in item[0][1])))
    keys = tuple(item[0] for item in recognized)
    if unmatched:
        return NormalForm(k, keys, None, split.complete, unmatched)

    change = split.change_of_basis
    columns: List[Vector] = [change.column(i) for i in range(k)]
    for _, start, found in recognized:
        block = [change.column(start + i) for i in range(found.basis.rows)]
        for j in range(found.basis.cols):
            columns.append(linear_combination(found.basis.column(j), block, g.dim))
    basis = Matrix.from_columns(columns, rows=g.dim) if g.dim else Matrix(0, 0, ())
    return NormalForm(k, keys, basis, split.complete, 0)


def isomorphic(a: LieAlgebra, b: LieAlgebra, entries: Optional[Iterable[CatalogEntry]] = None) -> IsomorphismResult:
    if a.dim != b.dim:
        return IsomorphismResult(Tristate.FALSE, reason=f"dimensions differ: {a.dim} vs {b.dim}")
    if a == b:
        return IsomorphismResult(Tristate.TRUE, Matrix.identity(a.dim), "identical structure constants")
    differences = fingerprint(a).differences(fingerprint(b))
    if differences:
        return IsomorphismResult(Tristate.FALSE, reason=f"fingerprints differ in {', '.join(differences)}")

    entries = list(entries) if entries is not None else None
    left, right = normal_form(a, entries), normal_form(b, entries)
    if left.fully_matched and right.fully_matched:
        if (left.euclidean_dim, left.keys) == (right.euclidean_dim, right.keys):
            witness = left.basis @ right.basis.inverse()
            if transport(a, witness) != b:
                raise InvariantViolationError("composed factor isomorphism does not transport a onto b")
            logger.debug(f"{a.name} ~ {b.name} through factors {[name for name, _ in left.keys]}")
            return IsomorphismResult(Tristate.TRUE, witness, "equal catalog normal forms")
        return IsomorphismResult(
            Tristate.FALSE,
            reason=f"catalog normal forms differ: {_describe(left)} vs {_describe(right)}",
        )
    return IsomorphismResult(Tristate.UNKNOWN, reason="no catalog normal form for both inputs")


def _describe(form: NormalForm) -> str:
    parts = [f"R^{form.euclidean_dim}"] if form.euclidean_dim else []
    for name, params in form.keys:
        parts.append(name + ("^{" + ",".join(str(v) for _, v in params) + "}" if params else ""))
    return " x ".join(parts) or "0"

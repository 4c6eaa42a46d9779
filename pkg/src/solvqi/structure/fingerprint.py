from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Tuple

from solvqi.algebra.liealg import (
    LieAlgebra,
    center,
    derived_series,
    lower_central_series,
    triangularize,
)


@dataclass(frozen=True)
class Fingerprint:
    """Basis independent invariants; equal fingerprints are necessary for isomorphism"""
    dim: int
    lcs_dims: Tuple[int, ...]
    derived_dims: Tuple[int, ...]
    center_dim: int
    exprad_dim: int
    cone_dim: int
    nilpotent: bool
    completely_solvable: bool

    def differences(self, other: "Fingerprint") -> List[str]:
        mine, theirs = asdict(self), asdict(other)
        return [key for key in mine if mine[key] != theirs[key]]

    def as_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["lcs_dims"] = list(self.lcs_dims)
        data["derived_dims"] = list(self.derived_dims)
        return data


def fingerprint(g: LieAlgebra, completely_solvable: Optional[bool] = None) -> Fingerprint:
    lcs = lower_central_series(g)
    derived = derived_series(g)
    exprad_dim = lcs.last.dim
    if completely_solvable is None:
        completely_solvable = triangularize(g).success
    return Fingerprint(
        dim=g.dim,
        lcs_dims=tuple(lcs.dims),
        derived_dims=tuple(derived.dims),
        center_dim=center(g).dim,
        exprad_dim=exprad_dim,
        cone_dim=g.dim - exprad_dim,
        nilpotent=exprad_dim == 0,
        completely_solvable=completely_solvable,
    )

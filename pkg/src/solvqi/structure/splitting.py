"""
Direct factor splitting: Euclidean factor first, then bracket connectivity.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

import networkx as nx

from solvqi.algebra.exactlin import Matrix, Subspace, Vector, unit_vector
from solvqi.algebra.liealg import (
    LieAlgebra,
    abelian,
    center,
    derived_algebra,
    direct_sum,
    span,
    subalgebra,
    transport,
)
from solvqi.exceptions import InvariantViolationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EuclideanSplit:
    euclidean_dim: int
    complement: LieAlgebra
    change_of_basis: Matrix


@dataclass(frozen=True)
class SplitResult:
    """transport(g, change_of_basis) is R^euclidean_dim + factors in block order"""
    euclidean_dim: int
    factors: Tuple[LieAlgebra, ...]
    change_of_basis: Matrix
    complete: bool


def _labels_for(g: LieAlgebra, vectors: List[Vector], prefix: str) -> List[str]:
    labels = []
    for r, v in enumerate(vectors):
        support = [i for i, x in enumerate(v) if x]
        if len(support) == 1 and v[support[0]] == 1:
            labels.append(g.labels[support[0]])
        else:
            labels.append(f"{prefix}{r + 1}")
    return labels


def split_euclidean(g: LieAlgebra) -> EuclideanSplit:
    """g = R^k + c with k = dim z - dim(z & [g,g]) and c = [g,g] plus standard completion vectors"""
    z = center(g).space
    derived = derived_algebra(g).space
    split_center = derived.intersection(z).complement_within(z)
    k = len(split_center)
    with_center = derived + Subspace.span(split_center, g.dim) if split_center else derived
    completion = []
    current = with_center
    for i in range(g.dim):
        e = unit_vector(g.dim, i)
        if not current.contains(e):
            completion.append(e)
            current = current + Subspace.span([e], g.dim)
    complement_space = span(g, derived.vectors + completion)
    complement_basis = complement_space.vectors
    if complement_basis:
        complement = subalgebra(g, complement_space, labels=_labels_for(g, complement_basis, "c"), name="c")
    else:
        complement = abelian(0, name="0")
    change = Matrix.from_columns(split_center + complement_basis, rows=g.dim) if g.dim else Matrix(0, 0, ())
    expected = direct_sum(abelian(k), complement)
    if g.dim and transport(g, change) != expected:
        raise InvariantViolationError("Euclidean splitting does not recombine")
    return EuclideanSplit(k, complement, change)


def bracket_graph(g: LieAlgebra) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(g.dim))
    for (i, j, k), _ in g.constants:
        graph.add_edge(i, j)
        graph.add_edge(j, k)
        graph.add_edge(i, k)
    return graph


def split_factors(g: LieAlgebra) -> SplitResult:
    euclid = split_euclidean(g)
    c = euclid.complement
    components = sorted((sorted(comp) for comp in nx.connected_components(bracket_graph(c))), key=lambda comp: comp[0])
    factors = []
    order: List[int] = []
    for comp in components:
        vectors = [unit_vector(c.dim, i) for i in comp]
        factor = subalgebra(c, span(c, vectors), labels=[c.labels[i] for i in comp])
        factors.append(factor)
        order.extend(comp)
    permutation = Matrix.from_columns([unit_vector(c.dim, i) for i in order], rows=c.dim) if c.dim else Matrix(0, 0, ())
    block = Matrix.identity(euclid.euclidean_dim)
    full_perm = block_diagonal([block, permutation])
    change = euclid.change_of_basis @ full_perm if g.dim else euclid.change_of_basis
    recombined = abelian(euclid.euclidean_dim)
    for f in factors:
        recombined = direct_sum(recombined, f)
    if g.dim and transport(g, change) != recombined:
        raise InvariantViolationError("factor splitting does not recombine")
    complete = euclid.euclidean_dim > 0 or len(factors) >= 2
    logger.debug(f"{g.name}: euclidean {euclid.euclidean_dim}, factor dims {[f.dim for f in factors]}")
    return SplitResult(euclid.euclidean_dim, tuple(factors), change, complete)


def block_diagonal(blocks: List[Matrix]) -> Matrix:
    n = sum(b.rows for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for i in range(b.rows):
            row = [0] * n
            for j in range(b.cols):
                row[offset + j] = b[i, j]
            rows.append(row)
        offset += b.cols
    return Matrix.from_rows(rows, cols=n) if rows else Matrix(0, 0, ())

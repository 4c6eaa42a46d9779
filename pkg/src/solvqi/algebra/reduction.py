"""
Exponential radical, cone dimension, Jordan-Chevalley decomposition and the
rho_1 / rho_infinity reductions of completely solvable Lie algebras, plus the
rho_0 modification that makes a solvable algebra with rational real parts
completely solvable.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from solvqi.algebra.exactlin import (
    Matrix,
    Poly,
    Subspace,
    Vector,
    add_vectors,
    char_poly,
    companion,
    compose_mod,
    eigenspace,
    eval_poly_at_matrix,
    inverse_mod,
    is_nilpotent_matrix,
    kernel,
    kronecker,
    linear_combination,
    min_poly,
    rational_roots,
    squarefree_part,
    unit_vector,
)
from solvqi.algebra.liealg import (
    AlgebraSubspace,
    DerivationAction,
    LieAlgebra,
    adjoint_on,
    associated_graded,
    ensure_valid,
    format_combination,
    is_nilpotent,
    is_solvable,
    is_subalgebra,
    lower_central_series,
    quotient,
    semidirect_product,
    span,
    subalgebra,
    triangularize,
)
from solvqi.exceptions import (
    DerivationActionError,
    InvariantViolationError,
    IrrationalSpectrumError,
    NotSolvableError,
    ReductionConsistencyError,
    TriangularizationError,
    UnsupportedInstanceError,
)
from solvqi.structure.fingerprint import fingerprint

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JordanPair:
    semisimple: Matrix
    nilpotent: Matrix
    witness: Poly


def jordan_chevalley(m: Matrix, rational_spectrum: bool = True) -> JordanPair:
    """
    Additive Jordan-Chevalley decomposition m = S + N.

    S is computed as w(m) where w solves q(w) = 0 mod charpoly(m), q the
    squarefree part, by Newton iteration starting from w = x. Requires the
    characteristic polynomial to split over the rationals unless
    rational_spectrum is False.
    """
    if not m.is_square:
        raise InvariantViolationError(f"expected a square matrix, got {m.rows}x{m.cols}")
    if m.rows == 0:
        return JordanPair(m, m, Poly.x())
    p = char_poly(m)
    if rational_spectrum and not rational_roots(p).fully_split:
        raise IrrationalSpectrumError(f"characteristic polynomial {p} does not split over the rationals")
    q = squarefree_part(p)
    dq = q.derivative()
    w = Poly.x()
    for _ in range(m.rows + 1):
        residue = compose_mod(q, w, p)
        if residue.is_zero():
            break
        w = (w - residue * inverse_mod(compose_mod(dq, w, p), p)) % p
    else:
        raise InvariantViolationError("Newton iteration for the semisimple part did not converge")
    semisimple = eval_poly_at_matrix(w, m)
    nilpotent = m - semisimple
    if semisimple.commutator(nilpotent) != Matrix.zeros(m.rows):
        raise InvariantViolationError("semisimple and nilpotent parts do not commute")
    if not is_nilpotent_matrix(nilpotent):
        raise InvariantViolationError("nilpotent part is not nilpotent")
    if squarefree_part(min_poly(semisimple)) != min_poly(semisimple):
        raise InvariantViolationError("semisimple part has a repeated factor in its minimal polynomial")
    return JordanPair(semisimple, nilpotent, w)


def exponential_radical(g: LieAlgebra) -> AlgebraSubspace:
    """Stable term of the lower central series"""
    if not is_solvable(g):
        raise NotSolvableError(f"{g.name or 'algebra'} is not solvable")
    radical = lower_central_series(g).last
    if radical.dim and not is_nilpotent(quotient(g, radical).algebra):
        raise InvariantViolationError("quotient by the exponential radical is not nilpotent")
    return radical


def require_completely_solvable(g: LieAlgebra):
    result = triangularize(g)
    if not result.success:
        raise TriangularizationError(result.reason)
    return result


def cone_dimension(g: LieAlgebra) -> int:
    require_completely_solvable(g)
    return g.dim - exponential_radical(g).dim


@dataclass(frozen=True)
class GeneratorAction:
    label: str
    restricted: Matrix
    pair: JordanPair


@dataclass(frozen=True)
class ReductionResult:
    kind: str
    input: LieAlgebra
    exprad: AlgebraSubspace
    quotient_rank: int
    output: LieAlgebra
    radical_algebra: Optional[LieAlgebra] = None
    quotient_algebra: Optional[LieAlgebra] = None
    action_diag: Optional[DerivationAction] = None
    generators: Tuple[GeneratorAction, ...] = ()
    construction_log: Tuple[str, ...] = field(default=())


def radical_labels(g: LieAlgebra, radical: AlgebraSubspace) -> List[str]:
    """Original label where the canonical basis vector is a basis vector of g, else n1, n2, ..."""
    labels = []
    for r, v in enumerate(radical.vectors):
        support = [i for i, x in enumerate(v) if x]
        if len(support) == 1 and v[support[0]] == 1:
            labels.append(g.labels[support[0]])
        else:
            labels.append(f"n{r + 1}")
    return labels


def rho1(g: LieAlgebra) -> ReductionResult:
    """Replace the adjoint action on the exponential radical by its semisimple part"""
    require_completely_solvable(g)
    radical = exponential_radical(g)
    name = f"rho1({g.name})" if g.name else "rho1"
    log = [f"exponential radical has dimension {radical.dim}"]
    if radical.dim == 0:
        log.append("nilpotent input, rho1 is the identity")
        return ReductionResult("rho1", g, radical, g.dim, g.relabel(name=name), construction_log=tuple(log))

    n_alg = subalgebra(g, radical, radical_labels(g, radical), name="n")
    q = quotient(g, radical, name="h")
    generators = []
    for b in range(q.algebra.dim):
        section = q.section.column(b)
        restricted = adjoint_on(g, section, radical)
        pair = jordan_chevalley(restricted)
        generators.append(GeneratorAction(q.algebra.labels[b], restricted, pair))
        log.append(
            f"generator {q.algebra.labels[b]}: semisimple part {pair.semisimple.to_strings()}, "
            f"nilpotent part {pair.nilpotent.to_strings()}"
        )
        logger.debug(f"{g.name}: {log[-1]}")

    for a in range(len(generators)):
        for b in range(a + 1, len(generators)):
            if not generators[a].pair.semisimple.commutator(generators[b].pair.semisimple).is_zero():
                raise ReductionConsistencyError(
                    f"semisimple parts of {generators[a].label} and {generators[b].label} do not commute"
                )
    action = DerivationAction(q.algebra, n_alg, tuple(gen.pair.semisimple for gen in generators))
    try:
        action.check()
    except DerivationActionError as e:
        raise ReductionConsistencyError(f"semisimple parts do not form an action: {e}") from e

    output = semidirect_product(n_alg, q.algebra, action, name=name)
    log.append(f"rho1 output has {len(output.constants)} nonzero structure constants")
    _check_rho1_output(g, output, log)
    return ReductionResult(
        "rho1",
        g,
        radical,
        q.algebra.dim,
        output,
        radical_algebra=n_alg,
        quotient_algebra=q.algebra,
        action_diag=action,
        generators=tuple(generators),
        construction_log=tuple(log),
    )


def _check_rho1_output(g: LieAlgebra, output: LieAlgebra, log: List[str]):
    if not is_class_C1(output).member:
        raise InvariantViolationError(f"rho1 output of {g.name or 'algebra'} is not in class C1")
    if is_class_C1(g).member:
        differences = fingerprint(g).differences(fingerprint(output))
        if differences:
            raise InvariantViolationError(
                f"{g.name or 'algebra'} is in class C1 but rho1 changed its {', '.join(differences)}"
            )
        log.append("input already in class C1, output has the same invariants")


def rho_infinity(g: LieAlgebra) -> ReductionResult:
    """rho_1 followed by grading the quotient; only the degree one layer keeps acting"""
    first = rho1(g)
    name = f"rhoinf({g.name})" if g.name else "rhoinf"
    log = list(first.construction_log)
    if first.exprad.dim == 0:
        graded = associated_graded(g, name=name)
        log.append("nilpotent input, rhoinf is the associated graded algebra")
        return ReductionResult(
            "rho_infinity", g, first.exprad, g.dim, graded.algebra, construction_log=tuple(log)
        )

    h = first.quotient_algebra
    action = first.action_diag
    h_series = lower_central_series(h)
    if len(h_series.terms) > 1:
        for v in h_series.terms[1].vectors:
            if not action.matrix_of(v).is_zero():
                raise ReductionConsistencyError("diagonal action does not vanish on the derived quotient")
    graded = associated_graded(h, name="gr(h)")
    matrices = []
    for i, degree in enumerate(graded.degrees):
        if degree == 1:
            matrices.append(action.matrix_of(graded.basis.column(i)))
        else:
            matrices.append(Matrix.zeros(first.radical_algebra.dim))
    graded_action = DerivationAction(graded.algebra, first.radical_algebra, tuple(matrices))
    try:
        graded_action.check()
    except DerivationActionError as e:
        raise ReductionConsistencyError(f"graded action is not a Lie action: {e}") from e
    output = semidirect_product(first.radical_algebra, graded.algebra, graded_action, name=name)
    log.append(f"graded quotient degrees {list(graded.degrees)}")
    return ReductionResult(
        "rho_infinity",
        g,
        first.exprad,
        first.quotient_rank,
        output,
        radical_algebra=first.radical_algebra,
        quotient_algebra=graded.algebra,
        action_diag=graded_action,
        generators=first.generators,
        construction_log=tuple(log),
    )


def cartan_subalgebra(g: LieAlgebra, t0: Vector) -> AlgebraSubspace:
    """Generalized 0-eigenspace of ad(t0)"""
    return AlgebraSubspace(g, kernel(g.ad(t0).power(g.dim)))


def semisimple_elements(g: LieAlgebra, carrier: AlgebraSubspace, target: AlgebraSubspace) -> Subspace:
    """
    Elements x of carrier whose ad(x) restricted to target is semisimple.

    On a nilpotent carrier with rational weights the nilpotent part of
    ad(x)|target is linear in x, so this is the kernel of that linear map.
    Every returned basis vector is re-checked.
    """
    if target.dim == 0:
        return carrier.space
    nilpotent_parts = [jordan_chevalley(adjoint_on(g, v, target)).nilpotent for v in carrier.vectors]
    if not nilpotent_parts:
        return Subspace.zero(g.dim)
    solutions = kernel(Matrix.from_columns([n.entries for n in nilpotent_parts], rows=target.dim ** 2))
    found = [linear_combination(c, carrier.vectors, g.dim) for c in solutions.vectors]
    for x in found:
        if not jordan_chevalley(adjoint_on(g, x, target)).nilpotent.is_zero():
            raise ReductionConsistencyError("nilpotent parts are not linear on the carrier")
    return Subspace.span(found, g.dim)


@dataclass(frozen=True)
class ClassC1Certificate:
    member: bool
    complement: Tuple[Vector, ...] = ()
    failing_generator: Optional[str] = None
    reason: str = ""


def _check_complement(g: LieAlgebra, radical: AlgebraSubspace, vectors: List[Vector]) -> Tuple[bool, Optional[int], str]:
    if not is_subalgebra(g, span(g, vectors)):
        return False, None, "complement is not a subalgebra"
    for index, v in enumerate(vectors):
        if not jordan_chevalley(adjoint_on(g, v, radical)).nilpotent.is_zero():
            return False, index, "nonzero nilpotent part on the exponential radical"
    return True, None, "split with semisimple action"


def is_class_C1(g: LieAlgebra) -> ClassC1Certificate:
    """Exponential radical split by a subalgebra acting semisimply on it"""
    require_completely_solvable(g)
    radical = exponential_radical(g)
    if radical.dim == 0:
        return ClassC1Certificate(True, tuple(g.basis()), reason="nilpotent")
    canonical = [q for q in quotient(g, radical).section.column_list()]
    ok, index, reason = _check_complement(g, radical, canonical)
    if ok:
        return ClassC1Certificate(True, tuple(canonical), reason=reason)
    failing = None
    if index is not None:
        support = [i for i, x in enumerate(canonical[index]) if x]
        failing = g.labels[support[0]]

    # second candidate: semisimple elements of a Cartan subalgebra through the canonical section
    t0 = linear_combination([1] * len(canonical), canonical, g.dim)
    carrier = cartan_subalgebra(g, t0)
    try:
        toral = semisimple_elements(g, carrier, radical)
    except ReductionConsistencyError:
        toral = Subspace.zero(g.dim)
    completion = radical.space.complement_within(toral)
    if len(completion) == len(canonical):
        ok2, _, reason2 = _check_complement(g, radical, completion)
        if ok2:
            return ClassC1Certificate(True, tuple(completion), reason=reason2)
    return ClassC1Certificate(False, tuple(canonical), failing, reason)


# ---------------------------------------------------------------------------
# rho_0: removing the elliptic part of a Cartan subalgebra's action
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealSplit:
    real: Matrix
    elliptic: Matrix


def real_elliptic_split(s: Matrix) -> RealSplit:
    """
    Split a semisimple matrix as S = R + E with R, E commuting polynomials in S.

    R acts on each eigenvector by the real part of its eigenvalue and E has
    purely imaginary spectrum. Non-real eigenvalues are only supported when
    they come in conjugate pairs with a rational quadratic minimal polynomial;
    those quadratics are found from the rational sums and products of pairs of
    roots, read off the spectra of the Kronecker sum and product of a companion
    matrix.
    """
    n = s.rows
    q = min_poly(s)
    if squarefree_part(q) != q:
        raise InvariantViolationError("real/elliptic split needs a semisimple matrix")
    found = rational_roots(q)
    pieces: List[Tuple[Fraction, Subspace]] = [(r, eigenspace(s, r)) for r, _ in found.roots]
    rest = q // Poly.from_roots(found.roots)
    if rest.degree > 0:
        c = companion(rest)
        one = Matrix.identity(rest.degree)
        sums = rational_roots(char_poly(kronecker(c, one) + kronecker(one, c))).roots
        products = rational_roots(char_poly(kronecker(c, c))).roots
        for total, _ in sums:
            for product, _ in products:
                if total * total >= 4 * product or rest.degree == 0:
                    continue
                factor = Poly((product, -total, Fraction(1)))
                if (rest % factor).is_zero():
                    rest = rest // factor
                    pieces.append((total / 2, kernel(eval_poly_at_matrix(factor, s))))
        if rest.degree > 0:
            raise IrrationalSpectrumError(f"eigenvalues of {rest} are not conjugate pairs with rational real part")
    basis = [v for _, space in pieces for v in space.vectors]
    values = [value for value, space in pieces for _ in space.vectors]
    if len(basis) != n:
        raise InvariantViolationError("eigenspaces of a semisimple matrix do not span")
    change = Matrix.from_columns(basis, rows=n)
    real = change @ Matrix.diagonal(values) @ change.inverse()
    if not real.commutator(s).is_zero():
        raise InvariantViolationError("real part does not commute with the matrix")
    return RealSplit(real, s - real)


@dataclass(frozen=True)
class ShadowResult:
    input: LieAlgebra
    output: LieAlgebra
    cartan: Optional[AlgebraSubspace] = None
    elliptic: Tuple[Matrix, ...] = ()
    construction_log: Tuple[str, ...] = field(default=())

    @property
    def modified(self) -> bool:
        return any(not m.is_zero() for m in self.elliptic)


def _regular_candidates(n: int) -> List[Vector]:
    candidates = [unit_vector(n, i) for i in range(n)]
    candidates.append(tuple(Fraction(k + 1) for k in range(n)))
    candidates.append(tuple(Fraction((k + 1) ** 2) for k in range(n)))
    candidates.append(tuple(Fraction((k + 2) // 2 * (-1) ** k) for k in range(n)))
    return candidates


def fitting_cartan(g: LieAlgebra) -> Tuple[Vector, AlgebraSubspace]:
    """Smallest Fitting null component among a fixed list of candidate elements; must be nilpotent"""
    best = None
    for t0 in _regular_candidates(g.dim):
        carrier = cartan_subalgebra(g, t0)
        if best is None or carrier.dim < best[1].dim:
            best = (t0, carrier)
    t0, carrier = best
    if not is_nilpotent(subalgebra(g, carrier)):
        raise UnsupportedInstanceError(f"{g.name or 'algebra'}: no candidate element has a nilpotent Fitting null component")
    return t0, carrier


def is_derivation(g: LieAlgebra, d: Matrix) -> bool:
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = d.apply(g.bracket_basis(i, j))
            rhs = add_vectors(g.bracket(d.column(i), unit_vector(g.dim, j)),
                              g.bracket(unit_vector(g.dim, i), d.column(j)))
            if lhs != rhs:
                return False
    return True


def trigshadow(g: LieAlgebra) -> ShadowResult:
    """
    Completely solvable modification of a solvable algebra.

    Picks a Cartan subalgebra h with Fitting decomposition g = h + g1, takes E(x)
    to be the elliptic part of ad(x) for x in h and zero on g1, and rebrackets
    with [x, y] - E(x)y + E(y)x. The result is checked for the Jacobi identity
    and complete solvability. Completely solvable input is returned unchanged.
    """
    if not is_solvable(g):
        raise NotSolvableError(f"{g.name or 'algebra'} is not solvable")
    name = f"rho0({g.name})" if g.name else "rho0"
    if triangularize(g).success:
        return ShadowResult(g, g.relabel(name=name), construction_log=("completely solvable input, rho0 is the identity",))

    t0, carrier = fitting_cartan(g)
    fitting_one = Subspace.span(g.ad(t0).power(g.dim).column_list(), g.dim)
    if carrier.dim + fitting_one.dim != g.dim:
        raise InvariantViolationError("Fitting components do not span the algebra")
    log = [f"Cartan subalgebra of dimension {carrier.dim} through {format_combination(dict(enumerate(t0)), g.labels)}"]

    elliptic = []
    for v in carrier.vectors:
        part = real_elliptic_split(jordan_chevalley(g.ad(v), rational_spectrum=False).semisimple).elliptic
        if not is_derivation(g, part):
            raise ReductionConsistencyError("elliptic part of an adjoint map is not a derivation")
        elliptic.append(part)
        log.append(f"elliptic part {part.to_strings()}")
    for a in range(len(elliptic)):
        for b in range(a + 1, len(elliptic)):
            if not elliptic[a].commutator(elliptic[b]).is_zero():
                raise ReductionConsistencyError("elliptic parts on the Cartan subalgebra do not commute")

    change = Matrix.from_columns(list(carrier.vectors) + list(fitting_one.vectors), rows=g.dim).inverse()
    removed = []
    for e in g.basis():
        coordinates = change.apply(e)[:carrier.dim]
        acc = Matrix.zeros(g.dim)
        for c, part in zip(coordinates, elliptic):
            if c:
                acc = acc + part.scale(c)
        removed.append(acc)

    brackets = {}
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            v = add_vectors(g.bracket_basis(i, j), removed[j].column(i))
            v = add_vectors(v, tuple(-x for x in removed[i].column(j)))
            if any(v):
                brackets[(i, j)] = {k: c for k, c in enumerate(v) if c}
    output = ensure_valid(LieAlgebra.from_brackets(g.dim, brackets, g.labels, name))
    if not triangularize(output).success:
        raise UnsupportedInstanceError(f"{g.name or 'algebra'}: removing the elliptic parts leaves an algebra "
                                       f"that is not completely solvable")
    log.append(f"rho0 output has {len(output.constants)} nonzero structure constants")
    return ShadowResult(g, output, carrier, tuple(elliptic), tuple(log))

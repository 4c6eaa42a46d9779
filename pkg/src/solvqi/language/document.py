"""
In-memory form of a `.lie` document and its canonical printer.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from solvqi.algebra.liealg import LieAlgebra
from solvqi.exceptions import DocumentError

Summand = Tuple[Fraction, Optional[str]]


@dataclass(frozen=True)
class Coefficient:
    """Linear expression in the bound parameters; summands are kept as written"""
    summands: Tuple[Summand, ...]

    def evaluate(self, bindings: Dict[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for r, param in self.summands:
            if param is None:
                total += r
            else:
                if param not in bindings:
                    raise DocumentError(f"unbound parameter {param}")
                total += r * bindings[param]
        return total

    def negated(self) -> "Coefficient":
        return Coefficient(tuple((-r, p) for r, p in self.summands))

    @property
    def is_single(self) -> bool:
        return len(self.summands) == 1


@dataclass(frozen=True)
class Term:
    coefficient: Coefficient
    label: str


@dataclass(frozen=True)
class BracketLine:
    left: str
    right: str
    terms: Tuple[Term, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AlgebraDocument:
    name: str
    dim: int
    labels: Tuple[str, ...]
    explicit_basis: bool = False
    param_bindings: Tuple[Tuple[str, Fraction], ...] = ()
    bracket_lines: Tuple[BracketLine, ...] = ()
    meta: Tuple[Tuple[str, Tuple[str, ...]], ...] = ()
    source: str = field(default="<text>", compare=False)

    @property
    def params(self) -> Dict[str, Fraction]:
        return dict(self.param_bindings)

    def meta_value(self, key: str) -> Optional[Tuple[str, ...]]:
        for k, values in self.meta:
            if k == key:
                return values
        return None

    def to_algebra(self) -> LieAlgebra:
        index = {label: i for i, label in enumerate(self.labels)}
        bindings = self.params
        brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for line in self.bracket_lines:
            terms: Dict[int, Fraction] = {}
            for term in line.terms:
                k = index[term.label]
                terms[k] = terms.get(k, Fraction(0)) + term.coefficient.evaluate(bindings)
            brackets[(index[line.left], index[line.right])] = terms
        return LieAlgebra.from_brackets(self.dim, brackets, self.labels, self.name)


def _format_summand(r: Fraction, param: Optional[str], leading: bool) -> str:
    magnitude = abs(r)
    if param is None:
        body = str(magnitude)
    elif magnitude == 1:
        body = param
    else:
        body = f"{magnitude} {param}"
    if leading:
        return f"-{body}" if r < 0 else body
    return f"- {body}" if r < 0 else f"+ {body}"


def format_coefficient(c: Coefficient) -> str:
    parts = [_format_summand(r, p, i == 0) for i, (r, p) in enumerate(c.summands)]
    return "(" + " ".join(parts) + ")"


def _format_term(term: Term, leading: bool) -> str:
    c = term.coefficient
    if not c.is_single:
        body = f"{format_coefficient(c)} {term.label}"
        return body if leading else f"+ {body}"
    r, param = c.summands[0]
    magnitude = abs(r)
    if param is None:
        body = term.label if magnitude == 1 else f"{magnitude} {term.label}"
    else:
        body = f"{param} {term.label}" if magnitude == 1 else f"{magnitude} {param} {term.label}"
    if leading:
        return f"-{body}" if r < 0 else body
    return f"- {body}" if r < 0 else f"+ {body}"


def print_document(doc: AlgebraDocument) -> str:
    """Canonical text; parsing it yields an equal document"""
    lines = [f"algebra {doc.name} dim {doc.dim}"]
    for name, value in doc.param_bindings:
        lines.append(f"param {name} = {value}")
    if doc.explicit_basis:
        lines.append("basis " + " ".join(doc.labels))
    for key, values in doc.meta:
        lines.append(" ".join(["meta", key, *values]))
    for bracket in doc.bracket_lines:
        rhs = " ".join(_format_term(t, i == 0) for i, t in enumerate(bracket.terms)) if bracket.terms else "0"
        lines.append(f"[{bracket.left},{bracket.right}] = {rhs}")
    return "\n".join(lines) + "\n"


def document_from_algebra(g: LieAlgebra, name: Optional[str] = None,
                          meta: Sequence[Tuple[str, Tuple[str, ...]]] = ()) -> AlgebraDocument:
    default = tuple(f"e{i + 1}" for i in range(g.dim))
    bracket_lines: List[BracketLine] = []
    for i, j, terms in g.bracket_lines():
        bracket_lines.append(
            BracketLine(
                g.labels[i],
                g.labels[j],
                tuple(Term(Coefficient(((c, None),)), g.labels[k]) for k, c in sorted(terms.items())),
            )
        )
    return AlgebraDocument(
        name=_safe_name(name or g.name or "algebra"),
        dim=g.dim,
        labels=g.labels,
        explicit_basis=g.labels != default,
        bracket_lines=tuple(bracket_lines),
        meta=tuple(meta),
    )


def _safe_name(name: str) -> str:
    return "".join(ch if not ch.isspace() else "_" for ch in name)

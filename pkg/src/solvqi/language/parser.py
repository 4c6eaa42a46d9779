"""
Line oriented parser for `.lie` documents.

    # comment
    algebra g3_5 dim 3
    param alpha = 1/2
    basis e1 e2 e3
    meta conedim 1
    [e3,e1] = e1
    [e3,e2] = alpha e2

A term is an optional coefficient followed by a basis label; a coefficient is a
rational, a bound parameter, a rational times a parameter, or a parenthesized
linear combination of those.
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from solvqi.exceptions import AlgebraSyntaxError, Diagnostic
from solvqi.language.document import AlgebraDocument, BracketLine, Coefficient, Term

logger = logging.getLogger(__name__)

_TOKEN = re.compile(
    r"""
    (?P<decimal>\d+\.\d*|\.\d+)
  | (?P<rational>\d+(?:/\d*)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[\[\],=+\-()])
  | (?P<space>\s+)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


def _decimal_hint(text: str) -> Optional[str]:
    try:
        return str(Fraction(text))
    except (ValueError, ZeroDivisionError):
        return None


class LineParser:
    """Cursor over the tokens of one line"""

    def __init__(self, text: str, line: int, source: str):
        self.line = line
        self.source = source
        self.tokens: List[Token] = []
        self.end_column = len(text) + 1
        for match in _TOKEN.finditer(text):
            kind = match.lastgroup
            if kind == "space":
                continue
            token = Token(kind, match.group(), match.start() + 1)
            if kind == "bad":
                self.fail(token.column, f"unexpected character {token.text!r}")
            if kind == "decimal":
                self.fail(
                    token.column,
                    f"decimal literal {token.text} is not allowed",
                    ["a rational p/q"],
                    hint=_decimal_hint(token.text),
                )
            self.tokens.append(token)
        self.pos = 0

    def fail(self, column: int, message: str, expected: List[str] = None, hint: Optional[str] = None):
        raise AlgebraSyntaxError(Diagnostic(self.line, column, message, expected or [], hint), self.source)

    def peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    @property
    def column(self) -> int:
        token = self.peek()
        return token.column if token else self.end_column

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token is None or token.text != text:
            found = f"{token.text!r}" if token else "end of line"
            self.fail(self.column, f"unexpected {found}", [repr(text)])
        return self.advance()

    def expect_kind(self, kind: str, description: str) -> Token:
        token = self.peek()
        if token is None or token.kind != kind:
            found = f"{token.text!r}" if token else "end of line"
            self.fail(self.column, f"unexpected {found}", [description])
        return self.advance()

    def expect_end(self, expected: List[str]):
        if not self.at_end():
            self.fail(self.column, f"unexpected {self.peek().text!r}", expected)

    def rational(self) -> Fraction:
        token = self.expect_kind("rational", "a rational p/q")
        return self.to_rational(token)

    def to_rational(self, token: Token) -> Fraction:
        numerator, _, denominator = token.text.partition("/")
        if "/" in token.text and not denominator:
            self.fail(token.column, f"malformed rational {token.text!r}", ["a denominator"])
        if denominator and int(denominator) == 0:
            self.fail(token.column, f"malformed rational {token.text!r}: zero denominator")
        return Fraction(int(numerator), int(denominator or 1))

    def signed_rational(self) -> Fraction:
        sign = 1
        token = self.peek()
        if token is not None and token.text in "+-":
            self.advance()
            sign = -1 if token.text == "-" else 1
        return sign * self.rational()


class DocumentParser:
    def __init__(self, text: str, source: str = "<text>"):
        self.text = text.lstrip("﻿")
        self.source = source
        self.name: Optional[str] = None
        self.dim = 0
        self.labels: Optional[Tuple[str, ...]] = None
        self.explicit_basis = False
        self.params: Dict[str, Fraction] = {}
        self.brackets: List[BracketLine] = []
        self.meta: List[Tuple[str, Tuple[str, ...]]] = []
        self.seen_pairs: Dict[frozenset, int] = {}

    def parse(self) -> AlgebraDocument:
        for number, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            stripped = line.lstrip()
            indent = len(line) - len(stripped) + 1
            keyword = stripped.split()[0]
            if self.name is None:
                self._header(line, number, indent)
            elif keyword == "param":
                self._param(line, number)
            elif keyword == "basis":
                self._basis(line, number, indent)
            elif keyword == "meta":
                self._meta(stripped, number, indent)
            elif stripped.startswith("["):
                self._bracket(line, number)
            else:
                self._error(number, indent, f"unexpected {keyword!r}", ["'param'", "'basis'", "'meta'", "'['"])
        if self.name is None:
            self._error(1, 1, "empty document", ["'algebra <name> dim <n>'"])
        return AlgebraDocument(
            name=self.name,
            dim=self.dim,
            labels=self.labels,
            explicit_basis=self.explicit_basis,
            param_bindings=tuple(self.params.items()),
            bracket_lines=tuple(self.brackets),
            meta=tuple(self.meta),
            source=self.source,
        )

    def _error(self, line: int, column: int, message: str, expected: List[str] = None, hint: str = None):
        raise AlgebraSyntaxError(Diagnostic(line, column, message, expected or [], hint), self.source)

    def _header(self, line: str, number: int, indent: int):
        parts = line.split()
        if len(parts) != 4 or parts[0] != "algebra" or parts[2] != "dim":
            self._error(number, indent, "malformed header", ["'algebra <name> dim <n>'"])
        if not parts[3].isdigit() or int(parts[3]) == 0:
            self._error(number, line.rfind(parts[3]) + 1, f"invalid dimension {parts[3]!r}", ["a positive integer"])
        self.name = parts[1]
        self.dim = int(parts[3])
        self.labels = tuple(f"e{i + 1}" for i in range(self.dim))

    def _param(self, line: str, number: int):
        cursor = LineParser(line, number, self.source)
        cursor.expect("param")
        name = cursor.expect_kind("ident", "a parameter name")
        if name.text in self.labels:
            cursor.fail(name.column, f"parameter {name.text!r} shadows a basis label")
        if name.text in self.params:
            cursor.fail(name.column, f"parameter {name.text!r} is bound twice")
        cursor.expect("=")
        value = cursor.signed_rational()
        cursor.expect_end(["end of line"])
        self.params[name.text] = value

    def _basis(self, line: str, number: int, indent: int):
        cursor = LineParser(line, number, self.source)
        cursor.expect("basis")
        if self.brackets:
            cursor.fail(indent, "basis must be declared before any bracket")
        labels = []
        while not cursor.at_end():
            token = cursor.expect_kind("ident", "a basis label")
            if token.text in labels:
                cursor.fail(token.column, f"basis label {token.text!r} declared twice")
            if token.text in self.params:
                cursor.fail(token.column, f"basis label {token.text!r} clashes with a parameter")
            labels.append(token.text)
        if len(labels) != self.dim:
            cursor.fail(cursor.end_column, f"basis has {len(labels)} labels, dimension is {self.dim}")
        self.labels = tuple(labels)
        self.explicit_basis = True

    def _meta(self, stripped: str, number: int, indent: int):
        parts = stripped.split()
        if len(parts) < 2:
            self._error(number, indent + len(stripped), "meta line without a key", ["a meta key"])
        self.meta.append((parts[1], tuple(parts[2:])))

    def _label(self, cursor: LineParser) -> str:
        token = cursor.expect_kind("ident", "a basis label")
        if token.text not in self.labels:
            cursor.fail(token.column, f"undeclared basis label {token.text!r}", [", ".join(self.labels)])
        return token.text

    def _bracket(self, line: str, number: int):
        cursor = LineParser(line, number, self.source)
        start = cursor.column
        cursor.expect("[")
        left = self._label(cursor)
        cursor.expect(",")
        right_column = cursor.column
        right = self._label(cursor)
        cursor.expect("]")
        if left == right:
            cursor.fail(right_column, f"bracket of {left!r} with itself")
        pair = frozenset((left, right))
        if pair in self.seen_pairs:
            cursor.fail(start, f"duplicate bracket [{left},{right}] (first stated on line {self.seen_pairs[pair]})")
        cursor.expect("=")
        terms = self._terms(cursor)
        self.seen_pairs[pair] = number
        self.brackets.append(BracketLine(left, right, tuple(terms), number))

    def _terms(self, cursor: LineParser) -> List[Term]:
        first = cursor.peek()
        if first is not None and first.text == "0" and cursor.peek(1) is None:
            cursor.advance()
            return []
        terms = []
        leading = True
        while True:
            sign = 1
            token = cursor.peek()
            if token is not None and token.text in ("+", "-"):
                cursor.advance()
                sign = -1 if token.text == "-" else 1
            elif not leading:
                cursor.fail(cursor.column, f"unexpected {token.text!r}", ["'+'", "'-'", "end of line"])
            coefficient, label = self._term(cursor)
            terms.append(Term(coefficient if sign > 0 else coefficient.negated(), label))
            leading = False
            if cursor.at_end():
                return terms

    def _term(self, cursor: LineParser) -> Tuple[Coefficient, str]:
        token = cursor.peek()
        expected = ["a rational", "a parameter", "'('", "a basis label"]
        if token is None:
            cursor.fail(cursor.column, "unexpected end of line", expected)
        if token.text == "(":
            cursor.advance()
            coefficient = self._linear(cursor)
            cursor.expect(")")
            return coefficient, self._label(cursor)
        if token.kind == "rational":
            r = cursor.to_rational(cursor.advance())
            following, after = cursor.peek(), cursor.peek(1)
            if following is not None and following.kind == "ident" and after is not None and after.kind == "ident":
                return Coefficient(((r, self._param_name(cursor)),)), self._label(cursor)
            return Coefficient(((r, None),)), self._label(cursor)
        if token.kind == "ident":
            after = cursor.peek(1)
            if after is not None and after.kind == "ident":
                return Coefficient(((Fraction(1), self._param_name(cursor)),)), self._label(cursor)
            return Coefficient(((Fraction(1), None),)), self._label(cursor)
        cursor.fail(token.column, f"unexpected {token.text!r}", expected)

    def _param_name(self, cursor: LineParser) -> str:
        token = cursor.advance()
        if token.text not in self.params:
            cursor.fail(token.column, f"unbound parameter {token.text!r}", [f"'param {token.text} = <rational>'"])
        return token.text

    def _linear(self, cursor: LineParser) -> Coefficient:
        summands = []
        leading = True
        while True:
            sign = 1
            token = cursor.peek()
            if token is not None and token.text in ("+", "-"):
                cursor.advance()
                sign = -1 if token.text == "-" else 1
            elif not leading:
                found = f"{token.text!r}" if token else "end of line"
                cursor.fail(cursor.column, f"unexpected {found}", ["'+'", "'-'", "')'"])
            token = cursor.peek()
            if token is not None and token.kind == "rational":
                r = cursor.to_rational(cursor.advance())
                nxt = cursor.peek()
                param = self._param_name(cursor) if nxt is not None and nxt.kind == "ident" else None
            elif token is not None and token.kind == "ident":
                r, param = Fraction(1), self._param_name(cursor)
            else:
                found = f"{token.text!r}" if token else "end of line"
                cursor.fail(cursor.column, f"unexpected {found}", ["a rational", "a parameter"])
            summands.append((sign * r, param))
            leading = False
            nxt = cursor.peek()
            if nxt is not None and nxt.text == ")":
                return Coefficient(tuple(summands))


def parse(text: str, source: str = "<text>") -> AlgebraDocument:
    """Parse a document, raising AlgebraSyntaxError with a positioned diagnostic"""
    document = DocumentParser(text, source).parse()
    logger.debug(f"parsed {source}: {document.name}, dim {document.dim}, {len(document.bracket_lines)} brackets")
    return document


def parse_file(path) -> AlgebraDocument:
    with open(path, "r", encoding="utf-8", newline=None) as handle:
        return parse(handle.read(), source=str(path))

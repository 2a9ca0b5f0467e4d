"""Recursive-descent parser for Laurent and polyvector expressions.

Grammar::

    expr    := sign? term (("+" | "-") term)*
    term    := power (("*")? power)*          # juxtaposition multiplies
    power   := atom ("^" (["-"] INT | atom))*  # atom after "^" means wedge
    atom    := INT ("/" INT)? | IDENT | "(" expr ")"

Identifiers are ``z1..zN``, the parameter names of the table and, in
polyvector mode, ``d1..dN`` (or another single letter chosen by the caller).
Between polyvector factors both ``*`` and ``^`` mean wedge.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .laurent import LaurentPoly
from .novikov import ParameterTable
from .polyvector import FloerClass, PolyVectorField, floer_from_polyvector


class ParseError(ValueError):
    def __init__(self, message: str, source: str = "", pos: int | None = None, line: int | None = None):
        self.message = message
        self.source = source
        self.pos = pos
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"column {pos + 1}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)

    def at_line(self, line: int) -> "ParseError":
        return ParseError(self.message, self.source, self.pos, line)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "op", "end"
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:  # only trailing whitespace remains
            break
        if m.group(1):
            tokens.append(Token("int", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(Token("ident", m.group(2), m.start(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", src, m.start(3))
            tokens.append(Token("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, n: int, table: ParameterTable, vector_letter: str | None):
        self.src = src
        self.n = n
        self.table = table
        self.letter = vector_letter
        self.tokens = tokenize(src)
        self.i = 0
        self._ident = re.compile(r"([A-Za-z]+)(\d+)$")

    # helpers ------------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(message, self.src, tok.pos)

    def take(self, text=None, kind=None) -> Token:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = repr(text) if text is not None else kind
            got = "end of input" if t.kind == "end" else repr(t.text)
            raise self.error(f"expected {want}, found {got}")
        self.i += 1
        return t

    def at(self, text) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def lift(self, value):
        if self.letter is not None and isinstance(value, LaurentPoly):
            return PolyVectorField.function(value)
        return value

    def const(self, c):
        return self.lift(LaurentPoly.constant(self.n, self.table, c))

    # grammar --------------------------------------------------------------

    def parse(self):
        if self.tok.kind == "end":
            raise self.error("empty expression")
        value = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return value

    def expr(self):
        negate = False
        if self.at("+") or self.at("-"):
            negate = self.take().text == "-"
        value = self.term()
        if negate:
            value = -value
        while self.at("+") or self.at("-"):
            op = self.take().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _starts_factor(self) -> bool:
        t = self.tok
        return t.kind in ("int", "ident") or (t.kind == "op" and t.text == "(")

    def term(self):
        value = self.power()
        while True:
            if self.at("*"):
                self.take()
                value = value * self.power()
            elif self._starts_factor():
                value = value * self.power()
            else:
                return value

    def power(self):
        value = self.atom()
        while self.at("^"):
            caret = self.take()
            if self.at("-") or self.tok.kind == "int":
                neg = self.at("-")
                if neg:
                    self.take()
                k = int(self.take(kind="int").text)
                value = self._raise(value, -k if neg else k, caret)
            elif self.letter is not None:
                value = value * self.atom()
            else:
                raise self.error("exponent must be an integer")
        return value

    def _raise(self, value, k, tok):
        if isinstance(value, PolyVectorField):
            if value.degrees() - {0}:
                raise self.error("only functions can be raised to a power", tok)
            f = value.coefficient()
            return PolyVectorField.function(self._raise(f, k, tok))
        try:
            return value ** k
        except ValueError as exc:
            raise self.error(str(exc), tok) from None

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.take()
            num = Fraction(int(t.text))
            if self.at("/"):
                self.take()
                den = self.take(kind="int")
                if int(den.text) == 0:
                    raise self.error("division by zero", den)
                num /= int(den.text)
            return self.const(num)
        if t.kind == "ident":
            self.take()
            return self.identifier(t)
        if self.at("("):
            self.take()
            value = self.expr()
            self.take(")")
            return value
        if t.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {t.text!r}")

    def identifier(self, t: Token):
        name = t.text
        if name in self.table.names:
            return self.lift(LaurentPoly.param(self.n, self.table, name))
        m = self._ident.match(name)
        if m:
            letter, idx = m.group(1), int(m.group(2))
            if letter == "z" or letter == self.letter:
                if not 1 <= idx <= self.n:
                    raise self.error(f"{name} is out of range: coordinates run 1..{self.n}", t)
                if letter == "z":
                    return self.lift(LaurentPoly.variable(self.n, self.table, idx))
                return PolyVectorField.basis(self.n, self.table, idx)
        raise self.error(f"unknown identifier {name!r}", t)


def parse_expression(src: str, table: ParameterTable, n: int) -> LaurentPoly:
    """Parse a Laurent polynomial in ``z1..zn`` over the given parameters."""
    return _Parser(src, n, table, None).parse()


def parse_polyvector(src: str, table: ParameterTable, n: int, letter: str = "d") -> PolyVectorField:
    """Parse a polyvector expression such as ``qp*qpp*z4*d1^d2``."""
    value = _Parser(src, n, table, letter).parse()
    return value if isinstance(value, PolyVectorField) else PolyVectorField.function(value)


def parse_floer(src: str, table: ParameterTable, n: int) -> FloerClass:
    """Parse ``z^gamma g_I`` sums; ``g1..gn`` stand for the dual basis classes."""
    return floer_from_polyvector(parse_polyvector(src, table, n, letter="g"))


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"-?\d+(/\d+)?", text):
        raise ParseError(f"not a rational number: {text!r}", text)
    return Fraction(text)


def parse_param_monomial(src: str, table: ParameterTable) -> tuple[int, ...]:
    """Exponent vector of a monomial such as ``qp*qpp``."""
    for t in tokenize(src):
        if t.kind == "ident" and t.text not in table.names:
            raise ParseError(f"{t.text!r} is not a parameter (declared: {', '.join(table.names)})", src, t.pos)
    value = parse_expression(src, table, 0)
    items = list(value.flat_terms())
    if len(items) != 1 or items[0][1] != 1:
        raise ParseError(f"{src!r} is not a monomial in the parameters", src)
    (_, pexp), _ = items[0]
    if not any(pexp):
        raise ParseError(f"{src!r} contains no parameter", src)
    return pexp

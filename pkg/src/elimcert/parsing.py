"""Parser for the polynomial text grammar and for system files.

Grammar (whitespace insignificant)::

    poly   := ['-'] term (('+'|'-') term)*
    term   := coeff ('*' factor)* | factor ('*' factor)*
    factor := var ('^' uint)?
    var    := 'x' uint            (1-based; 't' too when parsing over k[t])
    coeff  := int ('/' uint)?
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import ParseError
from .field import QQ, CoefficientField, GF
from .poly import Polynomial

_TOKEN = re.compile(r"\s*(?:(?P<var>x(?P<idx>\d+))|(?P<t>t)|(?P<num>\d+)|(?P<op>[-+*/^]))")


def _tokenize(text: str, line: int):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", line, col)
        col = m.start(m.lastgroup) + 1
        if m.group("var"):
            toks.append(("var", int(m.group("idx")), col))
        elif m.group("t"):
            toks.append(("t", None, col))
        elif m.group("num"):
            toks.append(("num", int(m.group("num")), col))
        else:
            toks.append(("op", m.group("op"), col))
        pos = m.end()
    toks.append(("end", None, len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text, line, allow_t):
        self.toks = _tokenize(text, line)
        self.i = 0
        self.line = line
        self.allow_t = allow_t

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    def expect_op(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.fail(f"expected {op!r}", tok)

    def poly(self):
        terms = []
        sign = 1
        if self.peek() == ("op", "-", self.peek()[2]):
            self.take()
            sign = -1
        terms.append(self.term(sign))
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = 1 if self.take()[1] == "+" else -1
            terms.append(self.term(sign))
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return terms

    def term(self, sign):
        tok = self.peek()
        coeff = Fraction(sign)
        factors = []
        if tok[0] == "num":
            self.take()
            num = tok[1]
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "num" or den[1] == 0:
                    self.fail("expected a positive denominator", den)
                coeff *= Fraction(num, den[1])
            else:
                coeff *= num
            while self.peek()[0] == "op" and self.peek()[1] == "*":
                self.take()
                factors.append(self.factor())
        elif tok[0] in ("var", "t"):
            factors.append(self.factor())
            while self.peek()[0] == "op" and self.peek()[1] == "*":
                self.take()
                factors.append(self.factor())
        else:
            self.fail("expected a coefficient or a variable")
        return coeff, factors

    def factor(self):
        tok = self.take()
        if tok[0] == "var":
            if tok[1] < 1:
                self.fail("variables are numbered from x1", tok)
            name = tok[1]
        elif tok[0] == "t" and self.allow_t:
            name = "t"
        else:
            self.fail("expected a variable", tok)
        exp = 1
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "num":
                self.fail("expected an exponent", e)
            exp = e[1]
        return name, exp


def parse_terms(text: str, *, line: int = 1, allow_t: bool = False):
    """Parse into raw ``(coefficient, [(var, exp), ...])`` terms."""
    return _Parser(text, line, allow_t).poly()


def max_index(raw_terms) -> int:
    return max((v for _, fs in raw_terms for v, _ in fs if v != "t"), default=0)


def build_poly(raw_terms, nvars: int, field: CoefficientField = QQ, param: bool = False) -> Polynomial:
    width = nvars + (1 if param else 0)
    items = []
    for coeff, factors in raw_terms:
        mon = [0] * width
        for v, e in factors:
            if v == "t":
                mon[-1] += e
            else:
                if v > nvars:
                    raise ParseError(f"x{v} exceeds the declared {nvars} variables")
                mon[v - 1] += e
        items.append((tuple(mon), coeff))
    return Polynomial(items, nvars, field, param)


def parse_poly(text: str, nvars: int | None = None, field: CoefficientField = QQ,
               param: bool = False) -> Polynomial:
    """Parse one polynomial; ``nvars`` defaults to the largest index used."""
    raw = parse_terms(text, allow_t=param)
    n = max_index(raw) if nvars is None else nvars
    return build_poly(raw, n, field, param)


@dataclass
class System:
    polys: list
    field: CoefficientField = QQ
    nvars: int = 0
    source_lines: list = dc_field(default_factory=list)


def parse_field(text: str) -> CoefficientField:
    """``q`` | ``fp:<prime>`` | ``fp <prime>``."""
    s = text.strip().lower()
    if s in ("q", "qq"):
        return QQ
    m = re.fullmatch(r"fp[:\s]\s*(\d+)", s)
    if not m:
        raise ParseError(f"unknown field {text!r}; use q or fp:<prime>")
    return GF(int(m.group(1)))


def parse_system(text: str, *, field: CoefficientField | None = None,
                 nvars: int | None = None) -> System:
    """One polynomial per line (or ``;``-separated), ``#`` comments.

    Optional header lines ``field: q`` / ``field: fp 65537`` and
    ``nvars: N``; explicit arguments override headers.
    """
    raws = []
    header_field = None
    header_n = None
    lines = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        low = body.strip().lower()
        if low.startswith("field:"):
            try:
                header_field = parse_field(low[len("field:"):].strip().replace(" ", ":", 1))
            except ParseError as exc:
                raise ParseError(str(exc), lineno, 1) from None
            continue
        if low.startswith("nvars:"):
            try:
                header_n = int(low[len("nvars:"):])
            except ValueError:
                raise ParseError("nvars must be an integer", lineno, 1) from None
            continue
        offset = 0
        for chunk in body.split(";"):
            if chunk.strip():
                raw = parse_terms(" " * offset + chunk, line=lineno)
                raws.append(raw)
                lines.append(chunk.strip())
            offset += len(chunk) + 1
    fld = field or header_field or QQ
    used = max((max_index(r) for r in raws), default=0)
    n = nvars if nvars is not None else header_n if header_n is not None else used
    if n < 1 and raws:
        raise ParseError(f"the number of variables must be positive, got {n}")
    if used > n:
        raise ParseError(f"x{used} used but only {n} variables declared")
    polys = [build_poly(r, n, fld) for r in raws]
    return System(polys, fld, n, lines)

"""Sparse multivariate polynomials over an exact field.

A polynomial in ``x1..xn`` is stored as a dict mapping exponent tuples to
nonzero field elements.  Polynomials may additionally carry a distinguished
parameter ``t`` living in the coefficient ring, i.e. they are elements of
``k[t][x1..xn]``; the ``t`` exponent is then kept as one extra trailing entry
of every exponent tuple and never counts towards any degree in ``x``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .errors import PreconditionError, StructuralError
from .field import QQ, CoefficientField


class _ZeroDegree:
    """Degree of the zero polynomial.

    Compares below every integer; refuses arithmetic so it can never be
    silently folded into a numeric bound.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO_DEGREE"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ZERO_DEGREE")

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def _no_arith(self, *_):
        raise TypeError("the degree of the zero polynomial does not support arithmetic")

    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = _no_arith


ZERO_DEGREE = _ZeroDegree()


# ---------------------------------------------------------------------------
# term orders
# ---------------------------------------------------------------------------

def _grevlex_part(m):
    return (sum(m),) + tuple(-e for e in m)


def _wgrevlex_part(m, w):
    return (sum(a * e for a, e in zip(w, m)),) + tuple(-e for e in m)


@dataclass(frozen=True)
class TermOrder:
    """Monomial order descriptor.

    Variables are ranked ``x_n > ... > x_1`` for every kind.  ``block`` with
    split ``b`` keeps ``x1..xb`` small and lets any monomial containing one of
    ``x_{b+1}..x_n`` dominate all monomials free of them; grevlex is used
    inside each block.  For polynomials carrying the parameter ``t`` the order
    is extended by comparing the ``t`` exponent last, which makes ``t`` a block
    smaller than all variables.

    ``weights`` (one positive integer per variable) replaces total degree by
    weighted degree in the grevlex comparisons.
    """

    kind: str = "grevlex"
    split: int | None = None
    weights: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise PreconditionError(f"unknown term order {self.kind!r}")
        if (self.kind == "block") != (self.split is not None):
            raise PreconditionError("block orders need a split index, others none")
        if self.split is not None and self.split < 0:
            raise PreconditionError("block split must be nonnegative")
        if self.weights is not None:
            if self.kind == "lex":
                raise PreconditionError("weights apply to grevlex and block orders")
            if any(int(w) <= 0 for w in self.weights):
                raise PreconditionError("weights must be positive integers")
            object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))

    @classmethod
    def block(cls, keep: int, weights=None) -> "TermOrder":
        return cls("block", keep, weights)

    def degree(self, mon: tuple) -> int:
        """(Weighted) degree of an exponent vector without ``t``."""
        if self.weights is None:
            return sum(mon)
        return sum(a * e for a, e in zip(self.weights, mon))

    def key(self, mon: tuple, param: bool = False) -> tuple:
        return self.keyfunc(param)(mon)

    def keyfunc(self, param: bool = False):
        """Return ``mon -> flat int tuple``; larger tuple means larger monomial."""
        return _keyfunc(self.kind, self.split, param, self.weights)

    def __str__(self):
        name = f"block({self.split})" if self.kind == "block" else self.kind
        return name if self.weights is None else f"{name}{list(self.weights)}"


@lru_cache(maxsize=None)
def _keyfunc(kind, split, param, weights=None):
    if kind == "lex":
        base = lambda m: m[::-1]
    elif weights is not None:
        w = weights
        if kind == "grevlex":
            base = lambda m: _wgrevlex_part(m, w)
        else:
            b = split
            base = lambda m: _wgrevlex_part(m[b:], w[b:]) + _wgrevlex_part(m[:b], w[:b])
    elif kind == "grevlex":
        base = _grevlex_part
    else:
        b = split
        base = lambda m: _grevlex_part(m[b:]) + _grevlex_part(m[:b])
    if not param:
        return base
    return lambda m: base(m[:-1]) + (m[-1],)


LEX = TermOrder("lex")
GREVLEX = TermOrder("grevlex")


def _display_key(m):
    return (sum(m),) + m


def _display_key_param(m):
    return (sum(m) - m[-1],) + m


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Immutable sparse polynomial.

    >>> x1, x2 = Polynomial.gens(2)
    >>> str((x1 + 1) * (x1 - 1))
    'x1^2 - 1'
    """

    __slots__ = ("_terms", "nvars", "field", "param", "_hash")

    def __init__(self, terms: Mapping | Iterable = (), nvars: int = 1,
                 field: CoefficientField = QQ, param: bool = False):
        if nvars < 0:
            raise StructuralError("nvars must be nonnegative")
        width = nvars + (1 if param else 0)
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: dict = {}
        for mon, c in items:
            mon = tuple(int(e) for e in mon)
            if len(mon) != width or any(e < 0 for e in mon):
                raise StructuralError(f"bad exponent vector {mon} for {nvars} variables")
            c = field(c)
            v = out.get(mon, 0) + c
            if field.modulus is not None:
                v %= field.modulus
            if v:
                out[mon] = v
            else:
                out.pop(mon, None)
        self._terms = out
        self.nvars = nvars
        self.field = field
        self.param = param
        self._hash = None

    @classmethod
    def _make(cls, terms: dict, nvars: int, field: CoefficientField, param: bool):
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p._terms = terms
        p.nvars = nvars
        p.field = field
        p.param = param
        p._hash = None
        return p

    # constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, field=QQ, param=False):
        return cls._make({}, nvars, field, param)

    @classmethod
    def constant(cls, c, nvars: int, field=QQ, param=False):
        c = field(c)
        width = nvars + (1 if param else 0)
        return cls._make({(0,) * width: c} if c else {}, nvars, field, param)

    @classmethod
    def one(cls, nvars: int, field=QQ, param=False):
        return cls.constant(1, nvars, field, param)

    @classmethod
    def var(cls, i: int, nvars: int, field=QQ, param=False):
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise StructuralError(f"x{i} is not among x1..x{nvars}")
        mon = [0] * (nvars + (1 if param else 0))
        mon[i - 1] = 1
        return cls._make({tuple(mon): field.one}, nvars, field, param)

    @classmethod
    def gens(cls, nvars: int, field=QQ, param=False):
        return [cls.var(i, nvars, field, param) for i in range(1, nvars + 1)]

    @classmethod
    def tvar(cls, nvars: int, field=QQ):
        """The parameter ``t`` as an element of ``k[t][x1..xn]``."""
        return cls._make({(0,) * nvars + (1,): field.one}, nvars, field, True)

    # basic protocol ------------------------------------------------------

    @property
    def terms_dict(self) -> dict:
        """Read-only view of the exponent -> coefficient mapping (do not mutate)."""
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars or other.field != self.field:
                return False
            if other.param != self.param:
                return self.lift_param()._terms == other.lift_param()._terms
            return other._terms == self._terms
        if isinstance(other, (int, Fraction, mpq)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.field, self.param, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({str(self)!r}, nvars={self.nvars}, field={self.field!r}" + (
            ", param=True)" if self.param else ")")

    def __str__(self):
        return render(self)

    # ring structure ------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise StructuralError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
            if other.field != self.field:
                raise StructuralError(f"field mismatch: {self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, Fraction, mpq)):
            return Polynomial.constant(other, self.nvars, self.field, self.param)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def _unify(self, other):
        other = self._coerce(other)
        a, b = self, other
        if a.param != b.param:
            a, b = a.lift_param(), b.lift_param()
        return a, b

    def lift_param(self) -> "Polynomial":
        """Embed ``k[x]`` into ``k[t][x]``."""
        if self.param:
            return self
        return Polynomial._make({m + (0,): c for m, c in self._terms.items()},
                                self.nvars, self.field, True)

    def __add__(self, other):
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        return Polynomial._make(_add(a._terms, b._terms, 1, a.field.modulus),
                                a.nvars, a.field, a.param)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        return Polynomial._make(_add(a._terms, b._terms, -1, a.field.modulus),
                                a.nvars, a.field, a.param)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        p = self.field.modulus
        if p is None:
            t = {m: -c for m, c in self._terms.items()}
        else:
            t = {m: (-c) % p for m, c in self._terms.items()}
        return Polynomial._make(t, self.nvars, self.field, self.param)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, mpq)):
            return self.scale(other)
        try:
            a, b = self._unify(other)
        except TypeError:
            return NotImplemented
        return Polynomial._make(_mul(a._terms, b._terms, a.field.modulus),
                                a.nvars, a.field, a.param)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = Polynomial.one(self.nvars, self.field, self.param)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = self.field(c)
        if not c:
            return Polynomial.zero(self.nvars, self.field, self.param)
        p = self.field.modulus
        if p is None:
            t = {m: v * c for m, v in self._terms.items()}
        else:
            t = {m: v * c % p for m, v in self._terms.items()}
        return Polynomial._make(t, self.nvars, self.field, self.param)

    def mul_monomial(self, mon: tuple, c=1) -> "Polynomial":
        c = self.field(c)
        p = self.field.modulus
        t = {}
        for m, v in self._terms.items():
            v = v * c
            if p is not None:
                v %= p
            t[tuple(a + b for a, b in zip(m, mon))] = v
        return Polynomial._make(t if c else {}, self.nvars, self.field, self.param)

    # degrees -------------------------------------------------------------

    def _xpart(self, m):
        return m[:-1] if self.param else m

    def degree(self):
        """Total degree in ``x1..xn`` (``t`` excluded); ``ZERO_DEGREE`` for 0."""
        if not self._terms:
            return ZERO_DEGREE
        if self.param:
            return max(sum(m) - m[-1] for m in self._terms)
        return max(sum(m) for m in self._terms)

    def weighted_degree(self, weights: Sequence[int]):
        return weighted_degree(self, weights)

    def degree_in(self, i: int) -> int:
        """Degree in ``x_i`` (1-based); 0 for the zero polynomial."""
        return max((m[i - 1] for m in self._terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(self._xpart(m)) for m in self._terms}) <= 1

    def support(self) -> set[int]:
        """1-based indices of the variables ``x_i`` that occur."""
        out = set()
        for m in self._terms:
            for i, e in enumerate(self._xpart(m)):
                if e:
                    out.add(i + 1)
        return out

    def is_constant(self) -> bool:
        return all(not any(self._xpart(m)) for m in self._terms)

    def constant_value(self):
        """Coefficient of the monomial 1 (and ``t^0``)."""
        width = self.nvars + (1 if self.param else 0)
        return self._terms.get((0,) * width, self.field.zero)

    # orders ----------------------------------------------------------------

    def terms(self, order: TermOrder | None = None) -> list[tuple]:
        """``(coefficient, exponents)`` pairs, descending under ``order``."""
        if order is None:
            key = _display_key_param if self.param else _display_key
        else:
            key = order.keyfunc(self.param)
        return [(self._terms[m], m) for m in sorted(self._terms, key=key, reverse=True)]

    def leading_monomial(self, order: TermOrder) -> tuple:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=order.keyfunc(self.param))

    def leading_coefficient(self, order: TermOrder):
        return self._terms[self.leading_monomial(order)]

    def monic(self, order: TermOrder) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(self.field.inv(self.leading_coefficient(order)))

    def primitive(self) -> "Polynomial":
        """Scale to integer coefficients with gcd 1 and positive display leader.

        Only meaningful over the rationals; over GF(p) this is ``monic`` in the
        display order.
        """
        if not self._terms:
            return self
        lead = self._terms[max(self._terms, key=_display_key)]
        if self.field.modulus is not None:
            return self.scale(self.field.inv(lead))
        from math import gcd, lcm
        coeffs = list(self._terms.values())
        den = 1
        for c in coeffs:
            den = lcm(den, int(c.denominator))
        num = 0
        for c in coeffs:
            num = gcd(num, int(c.numerator) * (den // int(c.denominator)))
        s = mpq(den, num)
        if lead < 0:
            s = -s
        return self.scale(s)

    # parameter t -------------------------------------------------------

    def _need_param(self):
        if not self.param:
            raise StructuralError("operation needs a polynomial over k[t]")

    def t_valuation(self):
        """Largest ``p`` with ``t^p`` dividing self; ``ZERO_DEGREE`` for 0."""
        if not self.param:
            return 0 if self._terms else ZERO_DEGREE
        if not self._terms:
            return ZERO_DEGREE
        return min(m[-1] for m in self._terms)

    def t_degree(self) -> int:
        if not self.param:
            return 0
        return max((m[-1] for m in self._terms), default=0)

    def at_t0(self) -> "Polynomial":
        """Specialize ``t = 0``; the result lives in ``k[x]``."""
        if not self.param:
            return self
        return Polynomial._make({m[:-1]: c for m, c in self._terms.items() if m[-1] == 0},
                                self.nvars, self.field, False)

    def div_t(self, k: int = 1) -> "Polynomial":
        """Exact division by ``t^k``."""
        self._need_param()
        out = {}
        for m, c in self._terms.items():
            if m[-1] < k:
                raise ValueError(f"not divisible by t^{k}")
            out[m[:-1] + (m[-1] - k,)] = c
        return Polynomial._make(out, self.nvars, self.field, True)

    # variable bookkeeping ----------------------------------------------

    def homogenize(self) -> "Polynomial":
        """Homogenize with a new variable placed first: ``x0^d f(x/x0)``.

        The result has ``nvars + 1`` variables; ``t`` is not counted.
        """
        d = self.degree()
        out = {}
        for m, c in self._terms.items():
            xm = self._xpart(m)
            out[(d - sum(xm),) + m] = c
        return Polynomial._make(out, self.nvars + 1, self.field, self.param)

    def dehomogenize(self) -> "Polynomial":
        """Set the first variable to 1 and drop it."""
        p = self.field.modulus
        out: dict = {}
        for m, c in self._terms.items():
            k = m[1:]
            v = out.get(k, 0) + c
            if p is not None:
                v %= p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Polynomial._make(out, self.nvars - 1, self.field, self.param)

    def embed(self, nvars: int, offset: int = 0) -> "Polynomial":
        """Reinterpret in ``nvars`` variables, shifting ``x_i`` to ``x_{i+offset}``."""
        if offset + self.nvars > nvars:
            raise StructuralError("embedding does not fit")
        pre = (0,) * offset
        post = (0,) * (nvars - offset - self.nvars)
        out = {}
        for m, c in self._terms.items():
            xm = self._xpart(m)
            out[pre + xm + post + (m[-1:] if self.param else ())] = c
        return Polynomial._make(out, nvars, self.field, self.param)

    def restrict(self, keep: Sequence[int]) -> "Polynomial":
        """Drop to the variables listed in ``keep`` (1-based); others must be absent."""
        idx = [i - 1 for i in keep]
        out = {}
        for m, c in self._terms.items():
            xm = self._xpart(m)
            if any(e for i, e in enumerate(xm) if i not in idx):
                raise StructuralError("polynomial uses a dropped variable")
            out[tuple(xm[i] for i in idx) + (m[-1:] if self.param else ())] = c
        return Polynomial._make(out, len(idx), self.field, self.param)

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``x_i -> images[i-1]``; ``t`` (if any) is kept as ``t``."""
        if len(images) != self.nvars:
            raise StructuralError("need one image per variable")
        if not images:
            return self
        target = images[0]
        for im in images:
            if im.nvars != target.nvars or im.field != self.field:
                raise StructuralError("images must share a ring with matching field")
        param = self.param or any(im.param for im in images)
        images = [im.lift_param() if param else im for im in images]
        one = Polynomial.one(target.nvars, self.field, param)
        tpow = Polynomial.tvar(target.nvars, self.field) if self.param else None
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                if e == 0:
                    cache[key] = one
                elif e == 1:
                    cache[key] = images[i] if i < len(images) else tpow
                else:
                    half = power(i, e // 2)
                    r = half * half
                    cache[key] = r * power(i, 1) if e % 2 else r
            return cache[key]

        acc: dict = {}
        mod = self.field.modulus
        for m, c in self._terms.items():
            term = one
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            for tm, tc in term._terms.items():
                v = acc.get(tm, 0) + c * tc
                if mod is not None:
                    v %= mod
                if v:
                    acc[tm] = v
                else:
                    acc.pop(tm, None)
        return Polynomial._make(acc, target.nvars, self.field, param)


def _add(a: dict, b: dict, sign: int, p):
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + (c if sign > 0 else -c)
        if p is not None:
            v %= p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _mul(a: dict, b: dict, p):
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            v = out.get(m, 0) + ca * cb
            if p is not None:
                v %= p
            out[m] = v
    return {m: c for m, c in out.items() if c}


def weighted_degree(p: Polynomial, weights: Sequence[int]):
    """``max`` over terms of ``sum(w_i * e_i)``; ``ZERO_DEGREE`` for 0."""
    if len(weights) != p.nvars:
        raise StructuralError(f"need {p.nvars} weights, got {len(weights)}")
    if any(int(w) <= 0 for w in weights):
        raise PreconditionError("weights must be positive integers")
    if p.is_zero():
        return ZERO_DEGREE
    return max(sum(w * e for w, e in zip(weights, p._xpart(m))) for m in p.terms_dict)


def arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    """``p op q`` for ``op`` in add/sub/mul with a structural ring check."""
    q = p._coerce(q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise PreconditionError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render_monomial(m: tuple, param: bool, var: str = "x") -> str:
    xm = m[:-1] if param else m
    parts = []
    if param and m[-1]:
        parts.append("t" if m[-1] == 1 else f"t^{m[-1]}")
    for i, e in enumerate(xm):
        if e:
            parts.append(f"{var}{i + 1}" if e == 1 else f"{var}{i + 1}^{e}")
    return "*".join(parts)


def render(p: Polynomial, var: str = "x") -> str:
    """Canonical text form, graded-lex descending; parses back bit-exactly.

    ``var`` renames the variables (``T1, T2, ...`` for Perron relations).
    """
    if p.is_zero():
        return "0"
    out = []
    for c, m in p.terms():
        v = p.field.signed(c)
        neg = v < 0
        a = -v if neg else v
        mono = render_monomial(m, p.param, var)
        if isinstance(a, Fraction) and a.denominator != 1:
            cs = f"{a.numerator}/{a.denominator}"
        else:
            cs = str(int(a))
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)

"""Invertible linear changes of coordinates, optionally depending on ``t``.

Matrix entries are univariate polynomials in ``t`` stored as tuples of field
elements in ascending powers (``()`` is zero).  Constant matrices simply use
length-one tuples, so both kinds share one code path.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import PreconditionError, StructuralError
from .field import QQ, CoefficientField
from .poly import Polynomial

# -- univariate helpers over k[t] ------------------------------------------


def _trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return tuple(a)


def _uadd(a, b, field):
    n = max(len(a), len(b))
    p = field.modulus
    out = []
    for i in range(n):
        v = (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
        out.append(v % p if p is not None else v)
    return _trim(out)


def _umul(a, b, field):
    if not a or not b:
        return ()
    p = field.modulus
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            v = out[i + j] + x * y
            out[i + j] = v % p if p is not None else v
    return _trim(out)


def _matmul(a, b, field):
    n = len(a)
    return tuple(
        tuple(_sum_u([_umul(a[i][k], b[k][j], field) for k in range(n)], field) for j in range(n))
        for i in range(n))


def _sum_u(items, field):
    acc = ()
    for it in items:
        acc = _uadd(acc, it, field)
    return acc


def _identity(n, field):
    return tuple(tuple((field.one,) if i == j else () for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class CoordinateChange:
    """``x_i -> sum_j matrix[i][j] * x_j`` together with its exact inverse.

    ``apply_linear_change(p, c)`` computes ``p(M x)``; applying ``c`` then
    ``c.inverted()`` returns the original polynomial.
    """

    matrix: tuple
    inverse: tuple
    field: CoefficientField = QQ
    parameterized: bool = False

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, n: int, field: CoefficientField = QQ) -> "CoordinateChange":
        m = _identity(n, field)
        return cls(m, m, field, False)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence], field: CoefficientField = QQ) -> "CoordinateChange":
        """Dense constant change; the inverse is computed by Gauss-Jordan."""
        a = [[field(v) for v in row] for row in rows]
        n = len(a)
        if any(len(row) != n for row in a):
            raise StructuralError("matrix must be square")
        inv = _invert(a, field)
        if inv is None:
            raise PreconditionError("matrix is singular")
        wrap = lambda m: tuple(tuple(_trim((v,)) for v in row) for row in m)
        return cls(wrap(a), wrap(inv), field, False)

    @classmethod
    def unipotent(cls, a: Sequence[Sequence], field: CoefficientField = QQ) -> "CoordinateChange":
        """``X_i = x_i + t * sum_{j>i} a[i][j] x_j`` with the inverse over ``k[t]``.

        Entries of ``a`` on or below the diagonal are ignored.  The inverse is
        the finite series ``sum_k (-t N)^k`` of the nilpotent part ``N``.
        """
        n = len(a)
        tn = tuple(
            tuple(_trim((field.zero, field(a[i][j]))) if j > i else () for j in range(n))
            for i in range(n))
        one = _identity(n, field)
        mat = tuple(tuple(_uadd(one[i][j], tn[i][j], field) for j in range(n)) for i in range(n))
        neg = tuple(tuple(tuple(field.neg(v) for v in tn[i][j]) for j in range(n)) for i in range(n))
        inv, power = one, one
        for _ in range(1, n):
            power = _matmul(power, neg, field)
            inv = tuple(tuple(_uadd(inv[i][j], power[i][j], field) for j in range(n))
                        for i in range(n))
        return cls(mat, inv, field, n > 1)

    def inverted(self) -> "CoordinateChange":
        return CoordinateChange(self.inverse, self.matrix, self.field, self.parameterized)

    def product(self) -> tuple:
        """``matrix * inverse`` over ``k[t]``."""
        return _matmul(self.matrix, self.inverse, self.field)

    def is_inverse_exact(self) -> bool:
        return self.product() == _identity(self.n, self.field)

    def at_t0(self) -> "CoordinateChange":
        cut = lambda m: tuple(tuple(_trim(e[:1]) for e in row) for row in m)
        return CoordinateChange(cut(self.matrix), cut(self.inverse), self.field, False)

    def determinant_at(self):
        """Determinant of the constant part (the ``t = 0`` specialization)."""
        a = [[e[0] if e else self.field.zero for e in row] for row in self.at_t0().matrix]
        return _det(a, self.field)

    def images(self) -> list[Polynomial]:
        """The linear forms that replace ``x_1..x_n``."""
        n, f = self.n, self.field
        out = []
        for row in self.matrix:
            terms = {}
            for j, entry in enumerate(row):
                for k, c in enumerate(entry):
                    if c:
                        mon = [0] * n
                        mon[j] = 1
                        key = tuple(mon) + ((k,) if self.parameterized else ())
                        terms[key] = c
            out.append(Polynomial._make(terms, n, f, self.parameterized))
        return out

    def entry_strings(self, which: str = "matrix") -> list[list[str]]:
        """Entries rendered as polynomials in ``t`` (for reports)."""
        m = self.matrix if which == "matrix" else self.inverse
        out = []
        for row in m:
            cells = []
            for e in row:
                p = Polynomial._make({(k,): c for k, c in enumerate(e) if c}, 0, self.field, True)
                cells.append(str(p))
            out.append(cells)
        return out


def apply_linear_change(p: Polynomial, c: CoordinateChange) -> Polynomial:
    """Substitute every variable by its image linear form under ``c``."""
    if p.nvars != c.n:
        raise StructuralError(f"polynomial has {p.nvars} variables, change acts on {c.n}")
    if p.field != c.field:
        raise StructuralError("field mismatch between polynomial and coordinate change")
    return p.compose(c.images())


def _invert(a, field):
    n = len(a)
    m = [list(row) + [field.one if i == j else field.zero for j in range(n)]
         for i, row in enumerate(a)]
    p = field.modulus
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = field.inv(m[col][col])
        m[col] = [v * inv % p if p is not None else v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % p if p is not None else x - f * y
                        for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _det(a, field):
    a = [list(row) for row in a]
    n = len(a)
    p = field.modulus
    det = field.one
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return field.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = field.neg(det)
        det = det * a[col][col]
        if p is not None:
            det %= p
        inv = field.inv(a[col][col])
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [(x - f * y) % p if p is not None else x - f * y
                        for x, y in zip(a[r], a[col])]
    return det


def generic_coordinate_change(n: int, kind: str = "dense", seed: int = 0, *,
                              field: CoefficientField = QQ, sample_bound: int = 65521,
                              rng: random.Random | None = None) -> CoordinateChange:
    """Draw a random change of coordinates.

    ``dense``: invertible matrix with entries uniform in ``1..sample_bound``,
    resampled while singular.  ``unipotent-t``: the upper-triangular form
    ``X_i = x_i + t sum_{j>i} a_ij x_j``.  Pass ``rng`` to draw from a shared
    sampler instead of ``random.Random(seed)``.
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    rng = rng or random.Random(seed)
    draw = lambda: field(rng.randint(1, sample_bound))
    if kind == "dense":
        if n == 1:
            return CoordinateChange.identity(1, field)
        while True:
            rows = [[draw() for _ in range(n)] for _ in range(n)]
            if _det(rows, field):
                return CoordinateChange.from_matrix(rows, field)
    if kind in ("unipotent-t", "unipotent"):
        a = [[draw() if j > i else field.zero for j in range(n)] for i in range(n)]
        return CoordinateChange.unipotent(a, field)
    raise PreconditionError(f"unknown coordinate change kind {kind!r}")

"""Dimension, elimination ideals, minimal-degree elements, Noether position."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import PreconditionError, ZeroIdeal
from .groebner import DEFAULT_BUDGET, Budget, buchberger, normal_form
from .poly import GREVLEX, Polynomial, TermOrder


@dataclass(frozen=True)
class DimensionReport:
    q: int
    witness: tuple  # 1-based indices of a maximal independent set
    leading_terms: tuple

    def as_dict(self):
        return {"q": self.q, "witnessIndependentSet": list(self.witness),
                "leadingTermIdeal": [list(m) for m in self.leading_terms]}


def _nonzero(gens):
    gens = list(gens)
    if not gens or all(g.is_zero() for g in gens):
        raise PreconditionError("the zero ideal has no finite-dimensional zero set to report")
    return gens


def independent_sets(leading_terms: Sequence[tuple], n: int, size: int):
    """Variable subsets of ``size`` not containing the support of any leading term."""
    supports = [frozenset(i + 1 for i, e in enumerate(m) if e) for m in leading_terms]
    for u in combinations(range(1, n + 1), size):
        su = set(u)
        if not any(s <= su for s in supports):
            yield u


def dimension_from_leading_terms(leading_terms: Sequence[tuple], n: int) -> DimensionReport:
    lts = tuple(leading_terms)
    if any(not any(m) for m in lts):
        return DimensionReport(-1, (), lts)
    for k in range(n, -1, -1):
        for u in independent_sets(lts, n, k):
            return DimensionReport(k, u, lts)
    raise AssertionError("the empty set is always independent")


def dimension(gens: Sequence[Polynomial], *, budget: Budget = DEFAULT_BUDGET) -> DimensionReport:
    """Krull dimension of ``k[x]/I`` via maximal independent sets modulo ``LT(I)``.

    Reports ``q = -1`` when ``1`` is in the ideal.
    """
    gens = _nonzero(gens)
    cb = buchberger(gens, GREVLEX, budget=budget)
    return dimension_from_leading_terms(cb.leading_monomials(), gens[0].nvars)


def elimination_ideal(gens: Sequence[Polynomial], keep: int, *, max_degree: int | None = None,
                      budget: Budget = DEFAULT_BUDGET) -> list[Polynomial]:
    """Generators of ``I ∩ k[x1..x_keep]`` (possibly empty), monic under the block order.

    With ``max_degree`` only elements up to that degree are produced: the
    result generates an ideal that agrees with ``I ∩ k[x1..x_keep]`` in
    degrees ``<= max_degree``, which is enough to read off a least-degree
    element when one of that degree exists.
    """
    gens = _nonzero(gens)
    n = gens[0].nvars
    if not 0 <= keep <= n:
        raise PreconditionError(f"keep must lie in 0..{n}")
    if max_degree is not None:
        return _truncated_elimination(gens, keep, max_degree, budget)
    if keep == 1 and n > 1:
        cb = buchberger(gens, GREVLEX, budget=budget)
        if dimension_from_leading_terms(cb.leading_monomials(), n).q == 0:
            return [_minimal_polynomial(cb.basis, n)]
    order = TermOrder.block(keep)
    cb = buchberger(gens, order, budget=budget)
    small = set(range(1, keep + 1))
    return [g for g in cb.basis if g.support() <= small]


def _truncated_elimination(gens, keep, cap, budget):
    """Degree-capped elimination through the homogenization ``I^h``.

    A grevlex basis of the homogenized generators with ``x0`` smallest,
    divided by powers of ``x0``, generates ``I^h``.  Dehomogenizing a
    homogeneous element of ``I^h ∩ k[x0, x1..x_keep]`` gives an element of
    ``I ∩ k[x1..x_keep]`` of no larger degree, and homogenizing goes back,
    so a block basis of ``I^h`` computed up to degree ``cap`` suffices.
    """
    n = gens[0].nvars
    cb = buchberger([g.homogenize() for g in gens], GREVLEX, budget=budget)
    sat = []
    for g in cb.basis:
        low = min(m[0] for m in g.terms_dict)
        sat.append(Polynomial({(m[0] - low,) + m[1:]: c for m, c in g.terms_dict.items()},
                              n + 1, g.field))
    cb = buchberger(sat, TermOrder.block(keep + 1), budget=budget, max_degree=cap)
    small = set(range(1, keep + 2))
    order = TermOrder.block(keep)
    out = []
    for g in cb.basis:
        if g.support() <= small and g.degree() <= cap:
            p = g.dehomogenize().monic(order)
            if p not in out:
                out.append(p)
    return out


def _minimal_polynomial(basis: Sequence[Polynomial], n: int) -> Polynomial:
    """Monic generator of ``I ∩ k[x1]`` for a zero-dimensional ``I``.

    The normal forms of ``1, x1, x1^2, ...`` modulo a grevlex basis live in a
    finite-dimensional space; the first linear dependency among them is the
    minimal polynomial of ``x1``.
    """
    fld = basis[0].field
    mod = fld.modulus
    x1 = Polynomial.var(1, n, fld)
    power = Polynomial.one(n, fld)
    echelon: dict = {}  # pivot monomial -> (normal form, combination over powers)
    key = GREVLEX.keyfunc(False)
    k = 0
    while True:
        nf, _ = normal_form(power, basis, GREVLEX)
        col = dict(nf.terms_dict)
        combo = {k: fld.one}
        while col:
            top = max(col, key=key)
            if top not in echelon:
                inv = fld.inv(col[top])
                scale = (lambda v: v * inv % mod) if mod is not None else (lambda v: v * inv)
                echelon[top] = ({m: scale(v) for m, v in col.items()},
                                {m: scale(v) for m, v in combo.items()})
                break
            pcol, pcombo = echelon[top]
            f = col[top]
            for target, src in ((col, pcol), (combo, pcombo)):
                for m, v in src.items():
                    nv = target.get(m, 0) - f * v
                    if mod is not None:
                        nv %= mod
                    if nv:
                        target[m] = nv
                    else:
                        target.pop(m, None)
        else:
            terms = {(e,) + (0,) * (n - 1): c for e, c in combo.items()}
            return Polynomial(terms, n, fld).monic(TermOrder.block(1))
        power = nf * x1
        k += 1


def min_degree_element(gens: Sequence[Polynomial], *, budget: Budget = DEFAULT_BUDGET):
    """``(p, d)`` with ``d`` the least total degree of a nonzero ideal element.

    Read off a grevlex Groebner basis; ``p`` is monic, ties go to the smaller
    leading monomial.
    """
    gens = [g for g in gens if g]
    if not gens:
        raise ZeroIdeal("all generators are zero")
    cb = buchberger(gens, GREVLEX, budget=budget)
    key = GREVLEX.keyfunc(cb.basis[0].param)
    p = min(cb.basis, key=lambda g: (g.degree(), key(g.leading_monomial(GREVLEX))))
    return p, p.degree()


def check_noether_position(gens: Sequence[Polynomial], q: int, *, budget: Budget = DEFAULT_BUDGET,
                           report: DimensionReport | None = None) -> bool:
    """Is the projection of ``V(I)`` onto ``x1..xq`` finite?

    Decided on a block-order basis eliminating ``x_{q+1}..x_n``: the
    projection is finite iff each of those variables has a pure power among
    the leading monomials.
    """
    gens = _nonzero(gens)
    n = gens[0].nvars
    rep = report or dimension(gens, budget=budget)
    if rep.q != q:
        raise PreconditionError(f"ideal has dimension {rep.q}, not {q}")
    if q < 0:
        return True
    cb = buchberger(gens, TermOrder.block(q), budget=budget)
    lms = cb.leading_monomials()
    for i in range(q, n):
        if not any(m[i] and all(not e for k, e in enumerate(m) if k != i) for m in lms):
            return False
    return True

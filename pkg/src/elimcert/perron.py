"""Algebraic dependence among ``n + 1`` polynomials in ``n`` variables."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from math import prod
from typing import Sequence

from .errors import PreconditionError, StructuralError
from .groebner import DEFAULT_BUDGET, Budget, buchberger
from .poly import Polynomial, TermOrder, render

METHODS = ("linear", "groebner")


@dataclass(frozen=True)
class PerronRelation:
    """``W(Q_1, ..., Q_{n+1}) = 0`` with ``W`` in ``T_1..T_{n+1}``."""

    W: Polynomial
    weights: tuple
    weighted_degree: int
    bound: int
    Q: tuple

    def evaluate(self) -> Polynomial:
        """``W`` with ``T_i`` replaced by ``Q_i``; zero for a valid relation."""
        return self.W.compose(list(self.Q))

    def check(self) -> bool:
        return (bool(self.W) and self.evaluate().is_zero()
                and self.W.weighted_degree(self.weights) == self.weighted_degree
                and self.weighted_degree <= self.bound)

    def render(self) -> str:
        return render(self.W, "T")


def _check_input(Q):
    if not Q:
        raise PreconditionError("need n + 1 polynomials")
    n, fld = Q[0].nvars, Q[0].field
    if len(Q) != n + 1:
        raise StructuralError(f"need {n + 1} polynomials in {n} variables, got {len(Q)}")
    if any(q.param or q.field != fld or q.nvars != n for q in Q):
        raise StructuralError("all polynomials must share one ring")
    if any(q.is_constant() for q in Q):
        raise PreconditionError("constant components make the map degenerate")
    return n, fld


def _eval(p: Polynomial, point):
    fld = p.field
    acc = fld.zero
    for m, c in p.terms_dict.items():
        term = c
        for v, e in zip(point, m):
            if e:
                term = term * v ** e
        acc = acc + term
    return acc % fld.modulus if fld.modulus is not None else acc


def _partial(p: Polynomial, i: int) -> Polynomial:
    out = {}
    for m, c in p.terms_dict.items():
        if m[i]:
            mm = list(m)
            mm[i] -= 1
            out[tuple(mm)] = p.field(m[i]) * c
    return Polynomial(out, p.nvars, p.field)


def _rank(rows, fld) -> int:
    rows = [list(r) for r in rows]
    mod = fld.modulus
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = fld.inv(rows[rank][col])
        for r in range(rank + 1, len(rows)):
            f = rows[r][col] * inv
            rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
            if mod is not None:
                rows[r] = [a % mod for a in rows[r]]
        rank += 1
    return rank


def jacobian_rank(Q: Sequence[Polynomial], *, seed: int = 0, tries: int = 3,
                  sample_bound: int = 65521) -> int:
    """Generic rank of the Jacobian matrix, from random evaluation points.

    The rank at a point never exceeds the generic rank, so the maximum over a
    few points is exact with high probability.
    """
    n, fld = Q[0].nvars, Q[0].field
    rng = random.Random(seed)
    J = [[_partial(q, i) for i in range(n)] for q in Q]
    best = 0
    for _ in range(tries):
        point = [fld(rng.randint(1, sample_bound)) for _ in range(n)]
        best = max(best, _rank([[_eval(d, point) for d in row] for row in J], fld))
        if best == n:
            break
    return best


def _weighted_monomials(weights, bound):
    ranges = [range(bound // w + 1) for w in weights]
    mons = [a for a in product(*ranges) if sum(w * e for w, e in zip(weights, a)) <= bound]
    mons.sort(key=lambda a: (sum(w * e for w, e in zip(weights, a)), a))
    return mons


def _relation_linear(Q, weights, bound):
    """Smallest-weighted-degree ``W`` with ``W(Q) = 0``, by undetermined coefficients.

    Columns ``Q^a`` are reduced in order of increasing weighted degree
    against an echelon form keyed by each column's largest monomial; the
    first column that reduces to zero yields the relation.  Returns
    ``(W terms, dependencies found at that degree)`` or ``None``.
    """
    fld = Q[0].field
    mod = fld.modulus
    n = Q[0].nvars
    powers = {}

    def qpow(i, e):
        if (i, e) not in powers:
            powers[(i, e)] = Polynomial.one(n, fld) if e == 0 else qpow(i, e - 1) * Q[i]
        return powers[(i, e)]

    echelon: dict = {}  # top monomial -> (column dict, combination dict)
    found = None
    count = 0
    for a in _weighted_monomials(weights, bound):
        w = sum(x * e for x, e in zip(weights, a))
        if found is not None and w > found[1]:
            break
        col = Polynomial.one(n, fld)
        for i, e in enumerate(a):
            if e:
                col = col * qpow(i, e)
        col = dict(col.terms_dict)
        combo = {a: fld.one}
        while col:
            top = max(col)
            if top not in echelon:
                inv = fld.inv(col[top])
                if mod is None:
                    echelon[top] = ({m: v * inv for m, v in col.items()},
                                    {m: v * inv for m, v in combo.items()})
                else:
                    echelon[top] = ({m: v * inv % mod for m, v in col.items()},
                                    {m: v * inv % mod for m, v in combo.items()})
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
            count += 1
            if found is None:
                found = (combo, w)
    if found is None:
        return None
    return found[0], count


def _relation_groebner(Q, weights, budget):
    n, fld = Q[0].nvars, Q[0].field
    m = n + 1
    width = m + n
    graph = []
    for i, q in enumerate(Q):
        T = [0] * width
        T[i] = 1
        graph.append(Polynomial({tuple(T): 1}, width, fld) - q.embed(width, m))
    # weights make each T_i - Q_i look homogeneous to the order
    order = TermOrder.block(m, tuple(weights) + (1,) * n)
    cb = buchberger(graph, order, budget=budget)
    small = set(range(1, m + 1))
    return [g.restrict(range(1, m + 1)) for g in cb.basis if g.support() <= small]


def perron_relation(Q: Sequence[Polynomial], *, method: str = "linear", seed: int = 0,
                    budget: Budget = DEFAULT_BUDGET) -> PerronRelation:
    """Generator of the kernel of ``k[T] -> k[x]``, ``T_i -> Q_i``.

    The kernel is the elimination ideal of the graph ideal ``(T_i - Q_i(x))``.
    ``method="linear"`` eliminates ``x`` by undetermined coefficients up to
    weighted degree ``prod(d_i)``; ``method="groebner"`` computes a
    block-order basis of the graph ideal (exact but much slower once the
    degrees grow).  A generically finite map has a principal kernel; this is
    checked through the Jacobian rank and the uniqueness of the relation.
    """
    Q = list(Q)
    n, fld = _check_input(Q)
    if method not in METHODS:
        raise PreconditionError(f"method must be one of {METHODS}")
    weights = tuple(q.degree() for q in Q)
    bound = prod(weights)
    if jacobian_rank(Q, seed=seed) < n:
        raise PreconditionError("the map is not generically finite (Jacobian rank < n)")
    if method == "linear":
        res = _relation_linear(Q, weights, bound)
        if res is None:
            raise PreconditionError(f"no relation of weighted degree <= {bound}")
        combo, count = res
        if count > 1:
            raise PreconditionError("relations are not unique up to scaling; kernel not principal")
        W = Polynomial(combo, n + 1, fld)
    else:
        kernel = _relation_groebner(Q, weights, budget)
        if not kernel:
            raise PreconditionError("no relation found: kernel is trivial")
        if len(kernel) > 1:
            raise PreconditionError(
                f"kernel needs {len(kernel)} generators; the map is not generically finite")
        W = kernel[0]
    W = W.primitive()
    return PerronRelation(W, weights, W.weighted_degree(weights), bound, tuple(Q))

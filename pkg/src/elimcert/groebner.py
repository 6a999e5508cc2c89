"""Buchberger's algorithm with cofactor tracking, division, membership, syzygies.

Internally polynomials are plain ``{exponents: coefficient}`` dicts and basis
elements are kept monic, so the hot loops do no field inversions.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import BudgetError, NotMember, PreconditionError, StructuralError
from .field import CoefficientField
from .poly import GREVLEX, Polynomial, TermOrder, _mul

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Budget:
    """Resource caps; exceeding either raises :class:`BudgetError`."""

    max_pairs: int = 250_000
    max_terms: int = 3_000_000


DEFAULT_BUDGET = Budget()


# ---------------------------------------------------------------------------
# dict-level kernels
# ---------------------------------------------------------------------------

def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _shift(f: dict, u: tuple, c, mod):
    out = {}
    for m, v in f.items():
        w = v * c
        if mod is not None:
            w %= mod
        out[tuple(a + b for a, b in zip(m, u))] = w
    return out


def _axpy(acc: dict, f: dict, c, mod):
    """acc += c * f (in place)."""
    for m, v in f.items():
        w = acc.get(m, 0) + c * v
        if mod is not None:
            w %= mod
        if w:
            acc[m] = w
        else:
            acc.pop(m, None)


def _scale(f: dict, c, mod):
    if mod is None:
        return {m: v * c for m, v in f.items()}
    return {m: v * c % mod for m, v in f.items()}


class _Divider:
    """Multivariate division by a list of ``(lm, poly, lc_inverse)``."""

    def __init__(self, key: Callable, mod):
        self.key = key
        self.mod = mod
        self._neg: dict = {}

    def negkey(self, m):
        k = self._neg.get(m)
        if k is None:
            k = tuple(-v for v in self.key(m))
            self._neg[m] = k
        return k

    def divide(self, f: dict, divisors, track: bool, full: bool = True):
        """Return ``(remainder, {index: quotient dict})``.

        With ``full=False`` only leading terms are reduced and the remainder
        holds the first irreducible term together with the untouched tail.
        """
        mod = self.mod
        nk = self.negkey
        f = dict(f)
        heap = [(nk(m), m) for m in f]
        heapq.heapify(heap)
        rem: dict = {}
        quots: dict = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = f.pop(m, None)
            if c is None:
                continue
            for i, (lm, g, lcinv) in enumerate(divisors):
                if _divides(lm, m):
                    break
            else:
                rem[m] = c
                if not full:
                    rem.update(f)
                    return rem, quots
                continue
            u = tuple(y - x for x, y in zip(lm, m))
            if lcinv != 1:
                c = c * lcinv
                if mod is not None:
                    c %= mod
            for gm, gc in g.items():
                if gm == lm:
                    continue
                mm = tuple(a + b for a, b in zip(u, gm))
                old = f.get(mm)
                if old is None:
                    v = -c * gc
                    if mod is not None:
                        v %= mod
                    f[mm] = v
                    heapq.heappush(heap, (nk(mm), mm))
                else:
                    v = old - c * gc
                    if mod is not None:
                        v %= mod
                    if v:
                        f[mm] = v
                    else:
                        del f[mm]
            if track:
                q = quots.setdefault(i, {})
                v = q.get(u, 0) + c
                if mod is not None:
                    v %= mod
                if v:
                    q[u] = v
                else:
                    q.pop(u, None)
        return rem, quots


# ---------------------------------------------------------------------------
# public data types
# ---------------------------------------------------------------------------

class CofactorBasis:
    """A Groebner basis and, if tracked, ``basis[k] = sum_j transform[k][j] * generators[j]``.

    Tracked bases keep the derivation of every intermediate element; rows are
    rebuilt on demand by :meth:`combine`, which only touches the ancestors of
    the requested elements.
    """

    def __init__(self, generators, basis, order, truncated_at=None, stats=None, engine=None,
                 nodes=None):
        self.generators = generators
        self.basis = basis
        self.order = order
        self.truncated_at = truncated_at
        self.stats = stats or {}
        self._engine = engine
        self._nodes = nodes
        self._transform = None

    @property
    def tracked(self) -> bool:
        return self._engine is not None

    @property
    def nvars(self):
        return self.generators[0].nvars

    def leading_monomials(self) -> list[tuple]:
        return [g.leading_monomial(self.order) for g in self.basis]

    def contains_unit(self) -> bool:
        return any(g.is_constant() and g for g in self.basis)

    def combine(self, coeffs: Sequence) -> list[Polynomial]:
        """Cofactors over the generators of ``sum_k coeffs[k] * basis[k]``."""
        if self._engine is None:
            raise PreconditionError("basis was computed without tracking")
        seeds = {}
        for k, c in enumerate(coeffs):
            if c is not None and c:
                seeds[self._nodes[k]] = dict(c.terms_dict) if isinstance(c, Polynomial) else c
        rows = self._engine.backprop(seeds)
        f0 = self.generators[0]
        return [Polynomial._make(r, f0.nvars, f0.field, f0.param) for r in rows]

    @property
    def transform(self) -> list | None:
        if self._engine is None:
            return None
        if self._transform is None:
            width = self.nvars + (1 if self.basis[0].param else 0)
            one = {(0,) * width: self.basis[0].field.one}
            self._transform = [self.combine([one if i == k else None for i in range(len(self.basis))])
                               for k in range(len(self.basis))]
        return self._transform

    def check_transform(self) -> bool:
        if self.transform is None:
            return False
        for g, row in zip(self.basis, self.transform):
            acc = Polynomial.zero(g.nvars, g.field, g.param)
            for c, f in zip(row, self.generators):
                acc = acc + c * f
            if acc != g:
                return False
        return True


@dataclass
class MembershipCertificate:
    target: Polynomial
    cofactors: list
    generators: list

    @property
    def max_product_degree(self):
        degs = [(c * f).degree() for c, f in zip(self.cofactors, self.generators) if c]
        return max(degs) if degs else self.target.degree()

    def check(self) -> bool:
        acc = Polynomial.zero(self.target.nvars, self.target.field, self.target.param)
        for c, f in zip(self.cofactors, self.generators):
            acc = acc + c * f
        return acc == self.target


@dataclass
class SyzygyBasis:
    generators: list
    relations: list

    def check(self) -> bool:
        for h in self.relations:
            acc = Polynomial.zero(self.generators[0].nvars, self.generators[0].field)
            for a, f in zip(h, self.generators):
                acc = acc + a * f
            if acc:
                return False
        return True


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------

def _check_ring(polys):
    first = polys[0]
    for p in polys[1:]:
        if p.nvars != first.nvars:
            raise StructuralError("nvars mismatch")
        if p.field != first.field:
            raise StructuralError("field mismatch")


def _lift_all(polys):
    if any(p.param for p in polys):
        return [p.lift_param() for p in polys]
    return list(polys)


def normal_form(f: Polynomial, basis: Sequence[Polynomial], order: TermOrder = GREVLEX):
    """Full multivariate division of ``f`` by ``basis`` (in list priority order).

    Returns ``(remainder, quotients)`` with ``f = sum q_i b_i + remainder``
    and no remainder term divisible by a leading monomial of ``basis``.
    """
    polys = _lift_all([f, *basis])
    _check_ring(polys)
    f, basis = polys[0], polys[1:]
    if any(b.is_zero() for b in basis):
        raise PreconditionError("basis elements must be nonzero")
    fld, mod = f.field, f.field.modulus
    key = order.keyfunc(f.param)
    divisors = []
    for b in basis:
        lm = b.leading_monomial(order)
        lc = b.terms_dict[lm]
        divisors.append((lm, b.terms_dict, 1 if lc == 1 else fld.inv(lc)))
    rem, quots = _Divider(key, mod).divide(f.terms_dict, divisors, True)
    mk = lambda d: Polynomial._make(d, f.nvars, fld, f.param)
    return mk(rem), [mk(quots.get(i, {})) for i in range(len(basis))]


def s_polynomial(f: Polynomial, g: Polynomial, order: TermOrder = GREVLEX) -> Polynomial:
    lf, lg = f.leading_monomial(order), g.leading_monomial(order)
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    uf = tuple(a - b for a, b in zip(lcm, lf))
    ug = tuple(a - b for a, b in zip(lcm, lg))
    fld = f.field
    return (f.mul_monomial(uf, fld.inv(f.terms_dict[lf]))
            - g.mul_monomial(ug, fld.inv(g.terms_dict[lg])))


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------

class _Buchberger:
    def __init__(self, gens, order, track, budget, max_degree, until):
        first = gens[0]
        self.nvars = first.nvars
        self.field: CoefficientField = first.field
        self.param = first.param
        self.mod = self.field.modulus
        self.order = order
        self.key = order.keyfunc(self.param)
        self.divider = _Divider(self.key, self.mod)
        self.track = track
        self.budget = budget
        self.max_degree = max_degree
        self.until = until
        self.m = len(gens)
        self.polys: list[dict] = []
        self.lms: list[tuple] = []
        self.derivs: list = []
        self.active: list[int] = []
        self.pairs: list = []
        self.nterms = 0
        self.stats = {"pairs": 0, "zero_reductions": 0, "skipped_by_degree": 0}
        self.truncated = False

    def deg(self, m):
        return self.order.degree(m[:-1] if self.param else m)

    def _add(self, poly: dict, deriv):
        """Make monic, store, run the Gebauer-Moeller update.

        ``deriv`` is ``(scale, [(node, multiplier), ...])`` with the stored
        polynomial equal to ``scale * sum multiplier * node``; a generator
        node uses ``(scale, j)`` instead.
        """
        mod = self.mod
        lm = max(poly, key=self.key)
        lc = poly[lm]
        inv = self.field.one
        if lc != 1:
            inv = self.field.inv(lc)
            poly = _scale(poly, inv, mod)
        h = self._store(poly, lm, (inv, deriv) if self.track else None)
        self.nterms += len(poly)
        if self.nterms > self.budget.max_terms:
            raise BudgetError(f"term budget {self.budget.max_terms} exceeded")
        self._update(h)
        if self.until is not None and self.until(poly):
            d = self.deg(lm)
            if self.max_degree is None or d < self.max_degree:
                self.max_degree = d

    def _store(self, poly, lm, deriv):
        self.polys.append(poly)
        self.lms.append(lm)
        self.derivs.append(deriv)
        return len(self.polys) - 1

    def backprop(self, seeds: dict) -> list[dict]:
        """Generator cofactors of ``sum seeds[node] * node`` (reverse accumulation)."""
        mod = self.mod
        acc = {k: dict(v) for k, v in seeds.items()}
        out = [{} for _ in range(self.m)]
        for node in range(max(acc, default=-1), -1, -1):
            mult = acc.pop(node, None)
            if not mult:
                continue
            scale, src = self.derivs[node]
            if scale != 1:
                mult = _scale(mult, scale, mod)
            if isinstance(src, int):
                _axpy(out[src], mult, 1, mod)
                continue
            for k, m in src:
                tgt = acc.setdefault(k, {})
                if len(m) == 1:
                    (u, c), = m.items()
                    _axpy(tgt, _shift(mult, u, 1, mod), c, mod)
                else:
                    _axpy(tgt, _mul(m, mult, mod), 1, mod)
        return out

    def _update(self, h):
        lms = self.lms
        lh = lms[h]
        lcm = lambda a, b: tuple(x if x > y else y for x, y in zip(a, b))
        coprime = lambda a, b: all(not (x and y) for x, y in zip(a, b))
        cand = [(g, lcm(lh, lms[g])) for g in self.active]
        kept = []
        for idx, (g, l1) in enumerate(cand):
            if coprime(lh, lms[g]):
                kept.append((g, l1))
                continue
            redundant = False
            for g2, l2 in cand[idx + 1:]:
                if _divides(l2, l1):
                    redundant = True
                    break
            if not redundant:
                for g2, l2 in kept:
                    if _divides(l2, l1):
                        redundant = True
                        break
            if not redundant:
                kept.append((g, l1))
        new_pairs = [(self.deg(l), g, h, l) for g, l in kept if not coprime(lh, lms[g])]
        survivors = []
        for pr in self.pairs:
            _, g1, g2, l = pr
            if (_divides(lh, l) and lcm(lms[g1], lh) != l and lcm(lms[g2], lh) != l):
                continue
            survivors.append(pr)
        self.pairs = survivors + new_pairs
        self.active = [g for g in self.active if not _divides(lh, lms[g])] + [h]

    def run(self, gens):
        for j, g in enumerate(gens):
            if g.is_zero():
                continue
            self._add(dict(g.terms_dict), j)
        mod = self.mod
        while self.pairs:
            best = min(self.pairs, key=lambda p: (p[0], min(p[1], p[2]), max(p[1], p[2])))
            self.pairs.remove(best)
            d, i, j, l = best
            if self.max_degree is not None and d > self.max_degree:
                self.stats["skipped_by_degree"] += 1
                self.truncated = True
                continue
            self.stats["pairs"] += 1
            if self.stats["pairs"] > self.budget.max_pairs:
                raise BudgetError(f"pair budget {self.budget.max_pairs} exceeded")
            ui = tuple(a - b for a, b in zip(l, self.lms[i]))
            uj = tuple(a - b for a, b in zip(l, self.lms[j]))
            s = _shift(self.polys[i], ui, 1, mod)
            _axpy(s, _shift(self.polys[j], uj, 1, mod), -1, mod)
            self.active_snapshot = list(self.active)
            divisors = [(self.lms[k], self.polys[k], 1) for k in self.active_snapshot]
            rem, quots = self.divider.divide(s, divisors, self.track)
            if not rem:
                self.stats["zero_reductions"] += 1
                continue
            deriv = None
            if self.track:
                one = self.field.one
                deriv = [(i, {ui: one}), (j, {uj: self.field.neg(one)})]
                deriv += [(self.active_snapshot[k], _scale(q, -1, mod)) for k, q in quots.items() if q]
            self._add(rem, deriv)
        # drop pairs that are now beyond an `until`-lowered cap
        return self

    def reduced(self):
        """Minimalize, interreduce and sort ascending by leading monomial."""
        mod = self.mod
        act = sorted(self.active)
        minimal = []
        for g in act:
            lg = self.lms[g]
            dominated = False
            for h in act:
                if h == g:
                    continue
                lh = self.lms[h]
                if _divides(lh, lg) and (lh != lg or h < g):
                    dominated = True
                    break
            if not dominated:
                minimal.append(g)
        out = []
        for g in minimal:
            others = [h for h in minimal if h != g]
            divisors = [(self.lms[h], self.polys[h], 1) for h in others]
            rem, quots = self.divider.divide(self.polys[g], divisors, self.track)
            node = g
            if self.track and quots:
                width = len(self.lms[g])
                deriv = [(g, {(0,) * width: self.field.one})]
                deriv += [(others[k], _scale(q, -1, mod)) for k, q in quots.items() if q]
                node = self._store(rem, self.lms[g], (self.field.one, deriv))
            out.append((self.lms[g], rem, node))
        out.sort(key=lambda e: self.key(e[0]))
        return out


def buchberger(gens: Sequence[Polynomial], order: TermOrder = GREVLEX, track: bool = False, *,
               budget: Budget = DEFAULT_BUDGET, max_degree: int | None = None,
               until: Callable[[dict], bool] | None = None) -> CofactorBasis:
    """Reduced Groebner basis of ``gens`` under ``order``.

    Pairs are chosen by the normal strategy (smallest lcm degree, then
    smallest index pair) and pruned with the Gebauer-Moeller criteria.  With
    ``track`` the derivation of every element is kept so that rows over the
    generators can be rebuilt (see :meth:`CofactorBasis.combine`).

    ``max_degree`` skips S-pairs of larger lcm degree; for homogeneous input
    this yields a basis that is correct up to that degree.  ``until`` is a
    predicate on new basis elements (exponent dicts): once it fires at degree
    ``d`` the cap is lowered to ``d``, so the degree is finished and nothing
    beyond it is computed.
    """
    gens = _lift_all(list(gens))
    if not gens:
        raise PreconditionError("no generators")
    _check_ring(gens)
    if all(g.is_zero() for g in gens):
        raise PreconditionError("all generators are zero")
    eng = _Buchberger(gens, order, track, budget, max_degree, until).run(gens)
    f0 = gens[0]
    mk = lambda d: Polynomial._make(d, f0.nvars, f0.field, f0.param)
    reduced = eng.reduced()
    basis = [mk(poly) for _, poly, _ in reduced]
    nodes = [node for _, _, node in reduced]
    stats = dict(eng.stats, basis_size=len(basis), max_terms=eng.nterms)
    return CofactorBasis(list(gens), basis, order, eng.max_degree if eng.truncated else None,
                         stats, eng if track else None, nodes)


def reduces_to_zero(f: Polynomial, basis: Sequence[Polynomial], order: TermOrder = GREVLEX) -> bool:
    if f.is_zero():
        return True
    rem, _ = normal_form(f, basis, order)
    return rem.is_zero()


def is_groebner(basis: Sequence[Polynomial], order: TermOrder = GREVLEX) -> bool:
    """S-pair closure test: every S-polynomial reduces to zero."""
    basis = [b for b in basis if b]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if not reduces_to_zero(s_polynomial(basis[i], basis[j], order), basis, order):
                return False
    return True


# ---------------------------------------------------------------------------
# membership and syzygies
# ---------------------------------------------------------------------------

def ideal_membership(f: Polynomial, gens: Sequence[Polynomial], order: TermOrder = GREVLEX, *,
                     budget: Budget = DEFAULT_BUDGET) -> MembershipCertificate:
    """Cofactors ``g_j`` with ``f = sum g_j gens_j``; raises :class:`NotMember`.

    Plain division by ``gens`` is tried first since it often yields the
    simplest certificate; otherwise the quotients modulo a tracked Groebner
    basis are pulled back through its transform matrix.
    """
    gens = list(gens)
    _check_ring([f, *gens])
    nz = [g for g in gens if g]
    if nz:
        rem, q = normal_form(f, nz, order)
        if rem.is_zero():
            it = iter(q)
            cof = [next(it) if g else Polynomial.zero(f.nvars, f.field, f.param) for g in gens]
            return MembershipCertificate(f, cof, gens)
    if not nz:
        if f.is_zero():
            return MembershipCertificate(f, [Polynomial.zero(f.nvars, f.field)] * len(gens), gens)
        raise NotMember(f)
    cb = buchberger(gens, order, track=True, budget=budget)
    rem, quots = normal_form(f, cb.basis, order)
    if rem:
        raise NotMember(rem)
    return MembershipCertificate(f, cb.combine(quots), gens)


def syzygy_basis(gens: Sequence[Polynomial], order: TermOrder = GREVLEX, *,
                 budget: Budget = DEFAULT_BUDGET) -> SyzygyBasis:
    """Generators of the first-syzygy module of ``gens``.

    With ``G = T F`` from a tracked basis and ``F = Q G`` from dividing each
    generator by ``G``, the module is generated by the S-pair relations of
    ``G`` mapped through ``T`` together with the rows of ``I - Q T``.  The
    Koszul pairs ``(f_j e_i - f_i e_j)`` are appended as well.
    """
    gens = list(gens)
    if not gens or any(g.is_zero() for g in gens):
        raise PreconditionError("syzygy_basis needs nonzero generators")
    _check_ring(gens)
    f0 = gens[0]
    n, fld, m = f0.nvars, f0.field, len(gens)
    zero = Polynomial.zero(n, fld)
    cb = buchberger(gens, order, track=True, budget=budget)
    G = cb.basis
    r = len(G)
    relations = []

    def push(vec):
        if any(v for v in vec) and vec not in relations:
            relations.append(vec)

    lms = cb.leading_monomials()
    for i in range(r):
        for j in range(i + 1, r):
            l = tuple(max(a, b) for a, b in zip(lms[i], lms[j]))
            ui = tuple(a - b for a, b in zip(l, lms[i]))
            uj = tuple(a - b for a, b in zip(l, lms[j]))
            s = G[i].mul_monomial(ui) - G[j].mul_monomial(uj)
            rem, quots = normal_form(s, G, order)
            assert rem.is_zero()
            coeffs = [-q for q in quots]
            coeffs[i] = coeffs[i] + Polynomial({ui: 1}, n, fld)
            coeffs[j] = coeffs[j] - Polynomial({uj: 1}, n, fld)
            push(cb.combine(coeffs))
    for k in range(m):
        rem, q = normal_form(gens[k], G, order)
        assert rem.is_zero()
        vec = [-c for c in cb.combine(q)]
        vec[k] = vec[k] + Polynomial.one(n, fld)
        push(vec)
    for i in range(m):
        for j in range(i + 1, m):
            vec = [zero] * m
            vec[i] = gens[j]
            vec[j] = -gens[i]
            push(vec)
    return SyzygyBasis(gens, relations)

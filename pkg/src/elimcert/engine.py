"""Elimination with a certified degree bound.

Given ``f_1..f_s`` with ``dim V(I) = q``, produce a nonzero ``phi`` in
``k[x1..x_{q+1}]`` and cofactors ``g_j`` with ``phi = sum g_j f_j`` and
``deg g_j f_j <= d_s * d_1 * ... * d_{n-q-1}`` (degrees sorted descending).

The eliminant is found by a cofactor-tracked Groebner computation on the
homogenized combinations ``F_1..F_{n-q}`` under a block order.  Working
homogeneously makes every tracked cofactor homogeneous, so the degree of a
certificate equals the degree of the basis element it certifies and the
search can be cut off at the bound.
"""
from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field as dc_field
from math import prod
from typing import Sequence

from .coords import CoordinateChange, apply_linear_change, generic_coordinate_change
from .errors import (BoundViolationError, ElimError, GenericityError, InconsistentInputError,
                     PreconditionError)
from .field import CoefficientField
from .groebner import DEFAULT_BUDGET, Budget, buchberger
from .ideal import DimensionReport, check_noether_position, dimension
from .poly import Polynomial, TermOrder

log = logging.getLogger(__name__)

DEFAULT_SAMPLE_BOUND = 65521
DEFAULT_RETRIES = 5
MODES = ("generic", "original")


def degree_order(gens: Sequence[Polynomial]) -> list[int]:
    """Input indices sorted by descending degree (stable)."""
    return sorted(range(len(gens)), key=lambda j: -gens[j].degree())


def degree_bound(sorted_degrees: Sequence[int], n: int, q: int) -> int:
    """``d_s * prod_{i=1}^{n-q-1} d_i`` for degrees sorted descending.

    The product never reaches past ``d_{s-1}``; for ``q >= 0`` that cap is
    implied by ``s >= n - q`` and it only matters for empty varieties.
    """
    d = list(sorted_degrees)
    if not d:
        raise PreconditionError("no generators")
    k = max(0, min(n - q - 1, len(d) - 1))
    return d[-1] * prod(d[:k])


def n_combinations(n: int, q: int, s: int) -> int:
    return min(s, n + 1) if q < 0 else n - q


# ---------------------------------------------------------------------------
# generic combinations
# ---------------------------------------------------------------------------

@dataclass
class GenericCombination:
    alpha: list            # (n-q) x s over the sorted generators
    F: list
    sorted_degrees: list
    permutation: list      # sorted position -> input index
    attempts: int = 1


def build_generic_combinations(gens: Sequence[Polynomial], q: int, seed: int = 0, *,
                               rng: random.Random | None = None,
                               sample_bound: int = DEFAULT_SAMPLE_BOUND,
                               retries: int = DEFAULT_RETRIES,
                               budget: Budget = DEFAULT_BUDGET) -> GenericCombination:
    """``F_{n-q} = f_s`` and ``F_i = sum_{j>=i} alpha_ij f_j`` with random ``alpha``.

    Draws are rejected when a combination drops degree or when
    ``dim V(F_1..F_{n-q}) != q``.
    """
    gens = list(gens)
    if not gens:
        raise PreconditionError("no generators")
    n, fld = gens[0].nvars, gens[0].field
    s = len(gens)
    if any(g.is_zero() for g in gens):
        raise PreconditionError("generators must be nonzero")
    r = n_combinations(n, q, s)
    if s < r:
        raise InconsistentInputError(
            f"{s} generators cannot cut out a variety of dimension {q} in {n} variables")
    rng = rng or random.Random(seed)
    perm = degree_order(gens)
    f = [gens[j] for j in perm]
    d = [g.degree() for g in f]
    for attempt in range(1, retries + 1):
        alpha = []
        for i in range(r - 1):
            alpha.append([fld.zero] * i + [fld(rng.randint(1, sample_bound)) for _ in range(i, s)])
        alpha.append([fld.zero] * (s - 1) + [fld.one])
        F = []
        for row in alpha:
            acc = Polynomial.zero(n, fld)
            for a, g in zip(row, f):
                if a:
                    acc = acc + g.scale(a)
            F.append(acc)
        if any(F[i].degree() != d[i] for i in range(r - 1)):
            log.info("combination dropped degree, resampling (attempt %d)", attempt)
            continue
        if dimension(F, budget=budget).q != q:
            log.info("dim V(F) != %d, resampling (attempt %d)", q, attempt)
            continue
        return GenericCombination(alpha, F, d, perm, attempt)
    raise GenericityError(f"no admissible combination after {retries} draws")


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass
class Certificate:
    phi: Polynomial
    cofactors: list
    bound: int
    q: int
    generators: list                       # input generators, input coordinates
    seed: int = 0
    mode: str = "generic"
    coordinate_change: CoordinateChange | None = None
    alpha: list | None = None
    permutation: list | None = None
    deformation: dict | None = None
    timings_ms: dict = dc_field(default_factory=dict)
    basis_sizes: dict = dc_field(default_factory=dict)
    attempts: int = 1

    @property
    def n(self) -> int:
        return self.generators[0].nvars

    @property
    def s(self) -> int:
        return len(self.generators)

    @property
    def field(self) -> CoefficientField:
        return self.generators[0].field

    @property
    def degrees(self) -> list:
        return [g.degree() for g in self.generators]

    def stated_generators(self) -> list:
        """Generators in the coordinates the identity is stated in."""
        if self.mode == "generic" and self.coordinate_change is not None:
            return [apply_linear_change(g, self.coordinate_change) for g in self.generators]
        return list(self.generators)

    def product_degrees(self) -> list:
        # degrees add over an integral domain, so no product is formed
        return [g.degree() + f.degree() if g and f else None
                for g, f in zip(self.cofactors, self.generators)]

    @property
    def max_product_degree(self):
        degs = [d for d in self.product_degrees() if d is not None]
        return max(degs) if degs else None


@dataclass
class VerificationItem:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Verdict:
    items: list

    @property
    def ok(self) -> bool:
        return all(it.passed for it in self.items)

    def failures(self) -> list:
        return [it.name for it in self.items if not it.passed]


def verify_certificate(cert: Certificate, gens: Sequence[Polynomial] | None = None) -> Verdict:
    """Check the five certificate conditions from scratch.

    ``gens`` default to the generators recorded in the certificate.  In
    generic mode the identity is checked against the generators transformed
    by the recorded coordinate change.
    """
    gens = list(cert.generators if gens is None else gens)
    items = []
    phi = cert.phi
    items.append(VerificationItem("phi_nonzero", bool(phi), f"phi = {phi}" if phi else "phi is zero"))

    allowed = set(range(1, cert.q + 2))
    extra = sorted(phi.support() - allowed)
    t_free = not phi.param or phi.t_degree() == 0
    items.append(VerificationItem(
        "phi_support", not extra and t_free,
        f"uses only x1..x{cert.q + 1}" if not extra else f"uses {['x%d' % i for i in extra]}"
        + ("" if t_free else "; contains t")))

    if cert.mode == "generic" and cert.coordinate_change is not None:
        stated = [apply_linear_change(g, cert.coordinate_change) for g in gens]
    else:
        stated = gens
    if len(cert.cofactors) != len(stated):
        items.append(VerificationItem("membership_identity", False,
                                      f"{len(cert.cofactors)} cofactors for {len(stated)} generators"))
        prods = []
    else:
        prods = [g * f for g, f in zip(cert.cofactors, stated)]
        acc = Polynomial.zero(phi.nvars, phi.field)
        for p in prods:
            acc = acc + p
        diff = acc - phi
        cof_t_free = all(not c.param or c.t_degree() == 0 for c in cert.cofactors)
        items.append(VerificationItem(
            "membership_identity", diff.is_zero() and cof_t_free,
            "sum g_j f_j - phi = 0" if diff.is_zero() else f"residual has {len(diff)} terms"))

    degs = [p.degree() for p in prods if p]
    top = max(degs) if degs else None
    ok4 = bool(prods) and (top is None or top <= cert.bound)
    items.append(VerificationItem("degree_bound", ok4, f"max deg g_j f_j = {top} vs bound {cert.bound}"))

    n = gens[0].nvars
    expected = degree_bound(sorted((g.degree() for g in gens), reverse=True), n, cert.q)
    items.append(VerificationItem("bound_formula", expected == cert.bound,
                                  f"recomputed {expected}, declared {cert.bound}"))
    return Verdict(items)


# ---------------------------------------------------------------------------
# the elimination step
# ---------------------------------------------------------------------------

@dataclass
class _Eliminant:
    phi: Polynomial
    cofactors: list
    degree: int
    basis_size: int


def eliminate_homogeneous(F: Sequence[Polynomial], q: int, cap: int, *,
                          budget: Budget = DEFAULT_BUDGET) -> _Eliminant | None:
    """Least-degree certificate ``phi = sum h_i F_i`` with ``phi`` in ``x1..x_{q+1}``.

    ``deg h_i F_i`` never exceeds the returned degree.  Returns ``None`` when
    no such certificate of degree ``<= cap`` exists.  Works unchanged over
    ``k[t]``: ``t`` then forms the smallest block, which amounts to computing
    over ``k(t)`` with denominators cleared.
    """
    F = list(F)
    n = F[0].nvars
    keep = q + 2  # x0, x1..x_{q+1} after homogenization
    Fh = [f.homogenize() for f in F]
    order = TermOrder.block(keep)

    def in_subring(poly: dict) -> bool:
        return all(not any(m[keep:n + 1]) for m in poly)

    cb = buchberger(Fh, order, track=True, budget=budget, max_degree=cap, until=in_subring)
    key = order.keyfunc(Fh[0].param)
    best = None
    for k, g in enumerate(cb.basis):
        if not in_subring(g.terms_dict):
            continue
        d = g.degree()
        if d > cap:
            continue
        rank = (d, key(g.leading_monomial(order)))
        if best is None or rank < best[0]:
            best = (rank, g, k)
    if best is None:
        return None
    (d, _), g, k = best
    row = cb.combine([g.one(g.nvars, g.field, g.param) if i == k else None
                      for i in range(len(cb.basis))])
    return _Eliminant(g.dehomogenize(), [r.dehomogenize() for r in row], d, len(cb.basis))


@dataclass
class DeformationResult:
    phi: Polynomial
    cofactors: list
    valuation: int
    steps: int


def deformation_reduce(b0: Polynomial, cofactors: Sequence[Polynomial], F: Sequence[Polynomial],
                       change: CoordinateChange) -> DeformationResult:
    """Strip a unipotent ``t``-dependent coordinate change from a certificate.

    Input: ``b0(X, t) = sum G_j(X, t) Fbar_j(X, t)`` over ``k[t]`` where
    ``Fbar_j`` is ``F_j`` rewritten through ``x = change^{-1}(X)``.  While
    ``t`` divides ``b0``, the specialization ``H = G(X, 0)`` is a syzygy of
    ``F``; its lift ``Hbar = H(change^{-1} X)`` agrees with ``H`` modulo ``t``,
    so ``G - Hbar`` and ``b0`` can both be divided by ``t``.  After
    ``val_t(b0)`` rounds, ``t = 0`` gives a certificate over the original
    ``F`` with no degree growth.
    """
    F = list(F)
    n, fld = F[0].nvars, F[0].field
    inv = change.inverted()
    Fbar = [apply_linear_change(f, inv).lift_param() for f in F]
    G = [g.lift_param() for g in cofactors]
    b0 = b0.lift_param()
    if b0.is_zero():
        raise PreconditionError("b0 must be nonzero")

    def residual(b, gs):
        acc = Polynomial.zero(n, fld, True)
        for g, fb in zip(gs, Fbar):
            if g:
                acc = acc + g * fb
        return acc - b

    if residual(b0, G):
        raise PreconditionError("input identity b0 = sum G_j Fbar_j does not hold")
    p0 = b0.t_valuation()
    steps = 0
    while b0.t_valuation() > 0:
        if steps >= p0:
            raise ElimError(f"deformation loop exceeded {p0} steps")
        H = [g.at_t0() for g in G]
        syz = Polynomial.zero(n, fld)
        for h, f in zip(H, F):
            if h:
                syz = syz + h * f
        if syz:
            raise ElimError("t = 0 specialization of the cofactors is not a syzygy")
        Hbar = [apply_linear_change(h, inv).lift_param() if h else h.lift_param() for h in H]
        G = [(g - hb).div_t(1) for g, hb in zip(G, Hbar)]
        b0 = b0.div_t(1)
        steps += 1
    phi = b0.at_t0()
    out = [g.at_t0() for g in G]
    return DeformationResult(phi, out, p0, steps)


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

def _expand(h: Sequence[Polynomial], combo: GenericCombination, s: int) -> list:
    """Cofactors over ``F`` -> cofactors over the input generators (input order)."""
    n, fld = h[0].nvars, h[0].field
    sorted_cof = []
    for j in range(s):
        acc = Polynomial.zero(n, fld)
        for i, hi in enumerate(h):
            a = combo.alpha[i][j]
            if a and hi:
                acc = acc + hi.scale(a)
        sorted_cof.append(acc)
    out = [None] * s
    for pos, idx in enumerate(combo.permutation):
        out[idx] = sorted_cof[pos]
    return out


def _noether_over_t(F: Sequence[Polynomial], q: int, budget: Budget) -> bool:
    """Noether position over ``k(t)`` read from a basis in ``k[X, t]``, ``t`` smallest."""
    n = F[0].nvars
    if q < 0:
        return True
    cb = buchberger(F, TermOrder.block(q), budget=budget)
    lms = [m[:-1] for m in cb.leading_monomials()]
    for i in range(q, n):
        if not any(m[i] and all(not e for k, e in enumerate(m) if k != i) for m in lms):
            return False
    return True


def eliminate_with_bound(gens: Sequence[Polynomial], seed: int = 0, mode: str = "generic", *,
                         retries: int = DEFAULT_RETRIES, budget: Budget = DEFAULT_BUDGET,
                         sample_bound: int = DEFAULT_SAMPLE_BOUND, allow_empty: bool = False,
                         check_noether: bool = True, parametric: bool = False,
                         report: DimensionReport | None = None) -> Certificate:
    """Run the whole pipeline and return a bound-checked certificate.

    ``mode="generic"`` states the certificate after a random dense change of
    coordinates (recorded in the result); ``mode="original"`` computes over
    ``k[t]`` after a unipotent ``t``-change and deforms back, so the
    certificate holds for the input generators as given.

    In original mode a degree-bounded certificate exists in any coordinates,
    so by default the capped search runs on the ``t = 0`` fiber directly and
    the deformation is the identity.  ``parametric=True`` carries out the
    search over ``k(t)`` and strips ``t`` with :func:`deformation_reduce`;
    it is exact but far slower.
    """
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {MODES}")
    gens = list(gens)
    if not gens or all(g.is_zero() for g in gens):
        raise PreconditionError("the ideal must be nonzero")
    if any(g.is_zero() for g in gens):
        raise PreconditionError("drop zero generators first")
    n, fld, s = gens[0].nvars, gens[0].field, len(gens)
    timings: dict = {}
    clock = time.perf_counter()

    def lap(name):
        nonlocal clock
        now = time.perf_counter()
        timings[name] = timings.get(name, 0.0) + round((now - clock) * 1000, 3)
        clock = now

    rep = report or dimension(gens, budget=budget)
    q = rep.q
    lap("dimension")
    if q < 0 and not allow_empty:
        raise PreconditionError("V(I) is empty; pass allow_empty to certify 1 in I")
    perm = degree_order(gens)
    sorted_degrees = [gens[j].degree() for j in perm]
    bound = degree_bound(sorted_degrees, n, q)
    rng = random.Random(seed)
    attempts = 0
    for attempt in range(1, retries + 1):
        attempts = attempt
        combo = build_generic_combinations(gens, q, rng=rng, sample_bound=sample_bound,
                                           retries=retries, budget=budget)
        lap("combinations")
        if mode == "generic":
            change = generic_coordinate_change(n, "dense", field=fld, sample_bound=sample_bound, rng=rng)
            F = [apply_linear_change(f, change) for f in combo.F]
            lap("coordinate_change")
            if check_noether and q >= 0 and not check_noether_position(F, q, budget=budget):
                log.info("changed coordinates not in Noether position, resampling")
                lap("noether")
                continue
            lap("noether")
        elif not parametric:
            change = generic_coordinate_change(n, "unipotent-t", field=fld, sample_bound=sample_bound,
                                               rng=rng)
            F = list(combo.F)
            lap("coordinate_change")
        else:
            change = generic_coordinate_change(n, "unipotent-t", field=fld, sample_bound=sample_bound,
                                               rng=rng)
            F = [apply_linear_change(f, change.inverted()).lift_param() for f in combo.F]
            lap("coordinate_change")
            if check_noether and q >= 0 and not _noether_over_t(F, q, budget):
                log.info("unipotent change not in Noether position over k(t), resampling")
                lap("noether")
                continue
            lap("noether")
        elim = eliminate_homogeneous(F, q, bound, budget=budget)
        lap("elimination")
        if elim is None:
            raise BoundViolationError(
                f"no eliminant of certificate degree <= {bound} although all genericity checks passed")
        deformation = None
        if mode == "generic":
            phi, h = elim.phi, elim.cofactors
        elif not parametric:
            phi, h = elim.phi, elim.cofactors
            deformation = {"valuation": 0, "steps": 0, "tDegree": 0, "parametric": False}
        else:
            res = deformation_reduce(elim.phi, elim.cofactors, combo.F, change)
            if res.steps > res.valuation:
                raise ElimError("deformation took more steps than the t-adic valuation")
            phi, h = res.phi, res.cofactors
            deformation = {"valuation": res.valuation, "steps": res.steps,
                           "tDegree": max([elim.phi.t_degree()] + [c.t_degree() for c in elim.cofactors]),
                           "parametric": True}
            lap("deformation")
        if phi:
            lead = phi.terms()[0][0]
            if lead != 1:
                inv = fld.inv(lead)
                phi = phi.scale(inv)
                h = [c.scale(inv) for c in h]
        cof = _expand(h, combo, s)
        cert = Certificate(phi, cof, bound, q, gens, seed, mode, change, combo.alpha,
                           combo.permutation, deformation, timings,
                           {"eliminationBasis": elim.basis_size, "combinations": len(combo.F)},
                           attempts)
        top = cert.max_product_degree
        if not phi or (top is not None and top > bound):
            raise BoundViolationError(f"certificate degree {top} exceeds bound {bound}")
        lap("expansion")
        return cert
    raise GenericityError(f"no admissible coordinates after {retries} draws")

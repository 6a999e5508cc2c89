"""Seeded generators of random polynomial systems for property tests."""
from __future__ import annotations

import random
from itertools import combinations_with_replacement

from .field import QQ, CoefficientField
from .poly import Polynomial


def monomials_of_degree(n: int, d: int) -> list[tuple]:
    out = []
    for combo in combinations_with_replacement(range(n), d):
        m = [0] * n
        for i in combo:
            m[i] += 1
        out.append(tuple(m))
    return out


def random_poly(rng: random.Random, n: int, degree: int, *, terms: int = 4, coeff: int = 5,
                constant: bool = True, field: CoefficientField = QQ) -> Polynomial:
    """Sparse polynomial of exact total ``degree`` with small nonzero coefficients."""
    pick = lambda: rng.choice([c for c in range(-coeff, coeff + 1) if c])
    top = monomials_of_degree(n, degree)
    lower = [m for d in range(0 if constant else 1, degree) for m in monomials_of_degree(n, d)]
    chosen = {rng.choice(top): pick()}
    for _ in range(terms - 1):
        pool = lower if lower and rng.random() < 0.6 else top
        chosen[rng.choice(pool)] = pick()
    return Polynomial(chosen, n, field)


def random_system(rng: random.Random, n: int, degrees, **kw) -> list[Polynomial]:
    return [random_poly(rng, n, d, **kw) for d in degrees]


def suite_systems(seed: int, count: int, *, max_n: int = 4, max_s: int = 4, max_degree: int = 3,
                  max_bound: int = 12, field: CoefficientField = QQ):
    """Yield ``(gens, report)`` for ``count`` random systems with a nonempty variety.

    Shapes are uniform over ``n <= max_n``, ``s <= max_s``, degrees
    ``<= max_degree``; draws with an empty variety or a degree bound above
    ``max_bound`` are skipped, since pure-Python exact arithmetic cannot
    finish the largest eliminants in reasonable time.
    """
    from .engine import degree_bound
    from .ideal import dimension

    rng = random.Random(seed)
    made = 0
    while made < count:
        n = rng.randint(1, max_n)
        s = rng.randint(1, max_s)
        degs = sorted((rng.randint(1, max_degree) for _ in range(s)), reverse=True)
        gens = random_system(rng, n, degs, terms=rng.randint(2, 4),
                             constant=rng.random() < 0.5, field=field)
        if any(g.degree() != d for g, d in zip(gens, degs)):
            continue
        rep = dimension(gens)
        if rep.q < 0 or degree_bound(degs, n, rep.q) > max_bound:
            continue
        made += 1
        yield gens, rep

import random

import pytest

from elimcert import GF, perron_relation, parse_poly
from elimcert.errors import PreconditionError, StructuralError
from elimcert.perron import jacobian_rank
from elimcert.testing import random_poly

P = parse_poly


@pytest.mark.parametrize("method", ["linear", "groebner"])
@pytest.mark.parametrize("Q, W, wdeg, bound", [
    (["x1^2", "x1^3"], "T1^3 - T2^2", 6, 6),
    (["x1", "x1"], "T1 - T2", 1, 1),
    (["x1", "x2", "x1*x2"], "T1*T2 - T3", 2, 2),
])
def test_examples(method, Q, W, wdeg, bound):
    n = len(Q) - 1
    rel = perron_relation([P(q, n) for q in Q], method=method)
    assert rel.check()
    assert rel.W == P(W.replace("T", "x"), n + 1) or rel.W == -P(W.replace("T", "x"), n + 1)
    assert (rel.weighted_degree, rel.bound) == (wdeg, bound)


def test_methods_agree_on_random_tuples():
    rng = random.Random(2)
    done = 0
    while done < 8:
        n = rng.randint(1, 2)
        Q = [random_poly(rng, n, rng.randint(1, 2), terms=rng.randint(2, 3)) for _ in range(n + 1)]
        if jacobian_rank(Q) < n:
            continue
        a = perron_relation(Q, method="linear")
        b = perron_relation(Q, method="groebner")
        assert a.W == b.W
        done += 1


def test_random_relations_vanish():
    rng = random.Random(8)
    done = 0
    while done < 10:
        n = rng.randint(1, 2)
        Q = [random_poly(rng, n, rng.randint(1, 3), terms=rng.randint(2, 4)) for _ in range(n + 1)]
        if jacobian_rank(Q) < n:
            continue
        rel = perron_relation(Q)
        assert rel.evaluate().is_zero()
        assert rel.weighted_degree <= rel.bound
        done += 1


def test_prime_field_relation():
    F = GF(65537)
    rel = perron_relation([P("x1^2 + 1", 1, F), P("x1^3 - x1", 1, F)])
    assert rel.check() and rel.W.field == F


def test_not_generically_finite():
    # every component is a function of x1 + x2 alone
    Q = [P("x1 + x2", 2), P("x1^2 + 2*x1*x2 + x2^2", 2), P("x1^3 + 3*x1^2*x2 + 3*x1*x2^2 + x2^3", 2)]
    assert jacobian_rank(Q) == 1
    with pytest.raises(PreconditionError):
        perron_relation(Q)


def test_shape_errors():
    with pytest.raises(StructuralError):
        perron_relation([P("x1", 2), P("x2", 2)])
    with pytest.raises(PreconditionError):
        perron_relation([P("x1", 1), P("3", 1)])
    with pytest.raises(PreconditionError):
        perron_relation([P("x1", 1), P("x1^2", 1)], method="resultant")


def test_render_uses_t_variables():
    rel = perron_relation([P("x1^2", 1), P("x1^3", 1)])
    assert "T1" in rel.render() and "x" not in rel.render()

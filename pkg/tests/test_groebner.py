import pytest
from hypothesis import given, strategies as st

from elimcert import (GF, LEX, GREVLEX, Budget, Polynomial, TermOrder, buchberger,
                      ideal_membership, is_groebner, normal_form, parse_poly, s_polynomial,
                      syzygy_basis)
from elimcert.errors import BudgetError, NotMember, PreconditionError

from oracles import sympy_lex_basis, sympy_resultant, to_sympy, sym_vars
from strategies import nonzero_polys, polys

P = parse_poly
CONICS = [P("x1^2 + x2^2 - 1", 2), P("x1^2 - x2", 2)]
CUBIC = [P("x2 - x1^2", 3), P("x3 - x1^3", 3)]


def combination(cofactors, gens):
    acc = Polynomial.zero(gens[0].nvars, gens[0].field)
    for c, g in zip(cofactors, gens):
        acc = acc + c * g
    return acc


# normal form -----------------------------------------------------------

def test_divide_by_itself():
    g = P("x1^2*x2 - 3*x2 + 1", 2)
    rem, q = normal_form(g, [g], LEX)
    assert rem.is_zero() and q == [Polynomial.one(2)]


def test_single_step_division():
    rem, q = normal_form(P("x1^2*x2 + 1", 2), [P("x1^2", 2)], LEX)
    assert rem == Polynomial.one(2) and q == [P("x2", 2)]


def test_resultant_reduces_to_zero():
    res = sympy_resultant(CONICS[0], CONICS[1], 2)
    xs = sym_vars(2)
    assert res.monic().as_expr() == to_sympy(P("x1^4 + x1^2 - 1", 2), xs)
    G = buchberger(CONICS, LEX).basis
    rem, _ = normal_form(P("x1^4 + x1^2 - 1", 2), G, LEX)
    assert rem.is_zero()


@given(polys(2, max_deg=4), st.lists(nonzero_polys(2, max_deg=2, max_terms=3), min_size=1,
                                     max_size=3),
       st.sampled_from([LEX, GREVLEX, TermOrder.block(1)]))
def test_division_identity_and_reducedness(f, basis, order):
    rem, quots = normal_form(f, basis, order)
    assert combination(quots, basis) + rem == f
    lts = [b.leading_monomial(order) for b in basis]
    for m in rem.terms_dict:
        assert not any(all(a <= e for a, e in zip(lt, m)) for lt in lts)
    # the remainder is already reduced
    again, _ = normal_form(rem, basis, order)
    assert again == rem


def test_normal_form_rejects_zero_divisor():
    with pytest.raises(PreconditionError):
        normal_form(P("x1", 1), [Polynomial.zero(1)])


# buchberger --------------------------------------------------------------

def test_single_generator_is_a_basis():
    cb = buchberger([P("x1^2 - x2", 2)], GREVLEX, track=True)
    assert cb.basis == [P("x1^2 - x2", 2)]
    assert cb.transform == [[Polynomial.one(2)]]


def test_twisted_cubic_lex_basis():
    # with x3 > x2 > x1 the leading terms x2, x3 are coprime: the input is already reduced
    cb = buchberger(CUBIC, LEX, track=True)
    assert {g.monic(LEX) for g in cb.basis} == {g.monic(LEX) for g in CUBIC}
    assert cb.check_transform()
    listed = [P("x2 - x1^2", 3), P("x3 - x1^3", 3), P("x1*x2 - x3", 3), P("x2^2 - x1*x3", 3)]
    assert all(normal_form(g, cb.basis, LEX)[0].is_zero() for g in listed)
    # S-pair closure on the listed set, and the same ideal as an independent lex basis
    assert is_groebner(listed, GREVLEX)
    assert sympy_lex_basis(listed)[0] == sympy_lex_basis(CUBIC)[0]


def test_twisted_cubic_grevlex_basis():
    cb = buchberger(CUBIC, GREVLEX, track=True)
    assert set(cb.basis) == {P("x1^2 - x2", 3), P("x1*x2 - x3", 3), P("x2^2 - x1*x3", 3)}
    assert cb.check_transform()


def test_unit_ideal():
    cb = buchberger([P("x1", 1), P("x1 - 1", 1)], GREVLEX, track=True)
    assert cb.basis == [Polynomial.one(1)]
    assert cb.contains_unit() and cb.check_transform()


@given(st.lists(nonzero_polys(2, max_deg=2, max_terms=3), min_size=1, max_size=3),
       st.sampled_from([LEX, GREVLEX, TermOrder.block(1)]))
def test_buchberger_output_is_reduced_groebner_basis(gens, order):
    cb = buchberger(gens, order, track=True)
    G = cb.basis
    assert is_groebner(G, order)
    assert cb.check_transform()
    for g in gens:
        assert normal_form(g, G, order)[0].is_zero()
    for i, g in enumerate(G):
        assert g.leading_coefficient(order) == 1
        others = G[:i] + G[i + 1:]
        if others:
            assert normal_form(g, others, order)[0] == g


@given(st.lists(nonzero_polys(2, max_deg=2, max_terms=3), min_size=1, max_size=3))
def test_basis_is_order_canonical(gens):
    a = buchberger(gens, GREVLEX).basis
    b = buchberger(list(reversed(gens)), GREVLEX).basis
    assert sorted(map(str, a)) == sorted(map(str, b))


def test_prime_field_basis():
    F = GF(65537)
    gens = [P("x1^2 + x2^2 - 1", 2, F), P("x1^2 - x2", 2, F)]
    cb = buchberger(gens, LEX, track=True)
    assert is_groebner(cb.basis, LEX) and cb.check_transform()
    assert P("x1^4 + x1^2 - 1", 2, F) in cb.basis


def test_budget_error():
    with pytest.raises(BudgetError):
        buchberger([P("x1^3 + x2^2*x3 - 1", 3), P("x2^3 - x1*x3 + 2", 3), P("x3^3 - x1*x2", 3)],
                   LEX, budget=Budget(max_pairs=3))


def test_s_polynomial_cancels_leading_terms():
    f, g = P("x1^2*x2 - 1", 2), P("x1*x2^2 - x1", 2)
    s = s_polynomial(f, g, GREVLEX)
    lcm = (2, 2)
    assert lcm not in s.terms_dict


# membership --------------------------------------------------------------

def test_membership_by_construction():
    f1, f2 = CONICS
    cert = ideal_membership(f1 + P("x1", 2) * f2, [f1, f2])
    assert cert.check()
    assert cert.cofactors == [Polynomial.one(2), P("x1", 2)]


def test_membership_of_one():
    gens = [P("x1", 1), P("x1 - 1", 1)]
    cert = ideal_membership(Polynomial.one(1), gens)
    assert cert.check()
    assert cert.cofactors == [Polynomial.one(1), -Polynomial.one(1)]


def test_not_member():
    with pytest.raises(NotMember):
        ideal_membership(P("x1", 2), [P("x2", 2)])


@given(st.lists(nonzero_polys(2, max_deg=2, max_terms=3), min_size=1, max_size=3),
       st.lists(polys(2, max_deg=2, max_terms=3), min_size=3, max_size=3))
def test_membership_recovers_some_certificate(gens, coeffs):
    f = combination(coeffs, gens)
    cert = ideal_membership(f, gens)
    assert cert.check()


# syzygies ----------------------------------------------------------------

def test_koszul_pair():
    f1, f2 = P("x1^2 + 1", 2), P("x2^3 - x2", 2)
    syz = syzygy_basis([f1, f2])
    assert syz.check()
    assert [f2, -f1] in syz.relations or [-f2, f1] in syz.relations


def test_syzygies_of_variables():
    syz = syzygy_basis([P("x1", 2), P("x2", 2)])
    assert syz.check()
    # every relation is a multiple of (x2, -x1)
    for a, b in syz.relations:
        r, q = normal_form(a, [P("x2", 2)], GREVLEX)
        assert r.is_zero() and b == -q[0] * P("x1", 2)


def test_twisted_cubic_syzygies():
    syz = syzygy_basis(CUBIC)
    assert syz.relations and syz.check()


@given(st.lists(nonzero_polys(2, max_deg=2, max_terms=3), min_size=2, max_size=3))
def test_syzygies_annihilate(gens):
    syz = syzygy_basis(gens)
    for h in syz.relations:
        assert combination(h, gens).is_zero()


def test_syzygy_rejects_zero_generator():
    with pytest.raises(PreconditionError):
        syzygy_basis([P("x1", 1), Polynomial.zero(1)])

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwkit import GF, QQ, FunField, Place, Valuation, parse_element, parse_field
from mwkit.fields import FieldError, parse_poly
from mwkit.fields import poly as P
from mwkit.fields.factor import factor_poly, is_irreducible


@pytest.mark.parametrize("text", ["GF(3)", "GF(5)", "GF(9)", "GF(25)", "QQ", "GF(5)(t)", "QQ(t)"])
def test_field_label_round_trip(text):
    F = parse_field(text)
    assert parse_field(F.label()) == F


@pytest.mark.parametrize("q", [3, 5, 7, 9, 25, 27])
def test_finite_field_axioms_exhaustive(q):
    F = GF(q)
    elems = list(F.elements())
    assert len(elems) == q == F.size
    zero, one = F.elem(F.zero()), F.one()
    for a in elems:
        assert a + zero == a
        assert a * F.elem(one) == a
        if a != zero:
            assert a * (1 / a) == F.elem(one)
    # multiplicative group is cyclic of order q - 1
    orders = {min(k for k in range(1, q) if F.pow(a.data, k) == one) for a in F.nonzero_elements()}
    assert max(orders) == q - 1


@pytest.mark.parametrize("q", [3, 5, 9, 25])
def test_squares_are_half_the_units(q):
    F = GF(q)
    squares = {F.mul(a.data, a.data) for a in F.nonzero_elements()}
    assert len(squares) == (q - 1) // 2
    assert all(F.is_square_data(s) for s in squares)
    assert not F.is_square_data(F.nonsquare.data)


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_element_print_parse_round_trip(data):
    F = data.draw(st.sampled_from([GF(5), GF(9), GF(25), QQ, FunField(GF(3)), FunField(QQ)]))
    seed = data.draw(st.integers(0, 10**6))
    import random

    x = F.random(random.Random(seed))
    assert parse_element(F, str(x)) == x


def test_rational_parsing():
    assert parse_element(QQ, "-3/4").data == parse_element(QQ, "(-3)/4").data
    assert parse_element(QQ, "2^-2") == parse_element(QQ, "1/4")


def test_factorization_multiplies_back(rng):
    for F in (GF(3), GF(5), GF(9), QQ):
        for _ in range(15):
            f = P.strip(F, [F.random_data(rng) for _ in range(6)] + [F.one()])
            prod = P.const(F, F.one())
            _, factors = factor_poly(F, f)
            for g, e in factors:
                assert is_irreducible(F, g)
                prod = P.mul(F, prod, P.pow_(F, g, e))
            assert P.monic(F, prod) == P.monic(F, f)


def test_irreducible_count_matches_necklace_formula():
    # number of monic irreducibles of degree 2 over F_q is (q^2 - q) / 2
    for q in (3, 5):
        F = GF(q)
        count = 0
        for a, b in itertools.product(range(q), repeat=2):
            if is_irreducible(F, [F.from_int(b), F.from_int(a), F.one()]):
                count += 1
        assert count == (q * q - q) // 2


def test_places_and_valuations():
    T = FunField(GF(5))
    t = T.elem(T.gen())
    p = Place(T, parse_poly(GF(5), "t^2+2"))
    assert p.degree == 2
    assert p.residue_field.size == 25
    g = (t**2 + 2) ** 3 * (t + 1) / t
    assert p.order(g) == 3
    assert Place(T, t.data[0]).order(g) == -1
    assert Place.infinity(T).order(g) == -6
    n, u = Valuation(Place(T, t.data[0])).valuation_of(g)
    assert n == -1 and Place(T, t.data[0]).order(u) == 0


def test_bad_places_rejected():
    T = FunField(GF(3))
    with pytest.raises(FieldError):
        Place(T, parse_poly(GF(3), "t^2+2"))  # (t-1)(t+1)
    with pytest.raises(FieldError):
        t = T.elem(T.gen())
        Valuation(Place(T, t), t**2)


def test_characteristic_two_rejected():
    with pytest.raises(FieldError):
        GF(2)
    with pytest.raises(FieldError):
        GF(4)

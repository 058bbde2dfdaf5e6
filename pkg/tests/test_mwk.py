from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwkit import GF, QQ, MWElem, evaluate, forgetful, hyperbolic, km_symbol, mw_symbol, parse_expr, parse_form
from mwkit.forms import GWClass, fundamental_ideal_level
from mwkit.mwk import TwistedElem, to_expr

FIELDS = [GF(3), GF(5), GF(9), QQ]


def ev(F, text):
    return evaluate(parse_expr(F, text))


def evaluate_unit(F, text):
    from mwkit import parse_element

    return parse_element(F, text)


def _unit(F, rng):
    a = F.random(rng, nonzero=True)
    return f"({a})"


@given(st.integers(0, 3), st.integers(0, 2**32))
@settings(max_examples=80, deadline=None)
def test_defining_relations(which, seed):
    F = FIELDS[which]
    rng = random.Random(seed)
    a, b = _unit(F, rng), _unit(F, rng)
    # twisted logarithm
    assert ev(F, f"[{a}*{b}]") == ev(F, f"[{a}] + [{b}] + eta[{a},{b}]")
    # eta commutes with symbols
    assert ev(F, f"[{a}]eta") == ev(F, f"eta[{a}]")
    # hyperbolic relation
    assert ev(F, "eta(2 + eta[-1])").is_zero()
    # Steinberg, when 1 - a is a unit
    if evaluate_unit(F, a) != F.elem(F.one()):
        assert ev(F, f"[{a}, 1 - {a}]").is_zero()
    # eps-commutativity
    assert ev(F, f"[{a}][{b}]") == ev(F, f"eps[{b}][{a}]")


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.label())
def test_eps_and_h(F):
    assert ev(F, "-1 - eta[-1]") == MWElem.eps(F)
    assert ev(F, "eps") == -MWElem.angle(F, F.neg(F.one()))
    assert ev(F, "h") == ev(F, "1 - eps")
    assert ev(F, "h") == MWElem.hyperbolic_elem(F)


def test_symbol_two_over_f3():
    F = GF(3)
    x = ev(F, "[2]")
    assert str(x.milnor) == "{2}"
    assert x.form == parse_form(F, "<2> - <1>")
    assert ev(F, "eta[2]") == MWElem.from_gw(parse_form(F, "<2> - <1>"))


def test_symbol_one_vanishes():
    for F in FIELDS:
        assert ev(F, "[1]").is_zero()


def test_doubling_two_over_f3():
    # [4] = [2] + [2] + eta[2][2]; over F_3 both [2][2] and [4] = [1] vanish
    F = GF(3)
    assert ev(F, "[2*2]") == ev(F, "[2] + [2] + eta[2][2]")
    assert ev(F, "2[2]") == ev(F, "-eta[2][2]")
    assert ev(F, "[2][2]").is_zero()
    assert ev(F, "2[2]") == ev(F, "[4]")


def test_minus_one_squared_over_q():
    x = ev(QQ, "[-1,-1]")
    assert not x.is_zero()
    assert x.form.signature() == 4
    assert fundamental_ideal_level(x.form) == 2
    assert ev(QQ, "eta^2[-1,-1,-1] + 2eta[-1,-1]") == ev(QQ, "eta(eta[-1] + 2)[-1,-1]")
    assert ev(QQ, "eta(eta[-1] + 2)[-1,-1]").is_zero()


def test_angle_multiplicative_over_f5(rng):
    F = GF(5)
    for _ in range(50):
        a, b = F.random(rng, nonzero=True), F.random(rng, nonzero=True)
        assert MWElem.angle(F, a.data) * MWElem.angle(F, b.data) == MWElem.angle(F, (a * b).data)


def test_steinberg_example_over_f5():
    assert ev(GF(5), "[2][1-2]").is_zero()


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_degree_one_is_generated_by_symbols(q):
    # the pullback K^M_1 x_{I/I^2} I has q - 1 elements over F_q
    F = GF(q)
    gens = [mw_symbol(F, [a.data]) for a in F.nonzero_elements()]
    seen = {MWElem.zero(F, 1)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x + g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    assert len(seen) == q - 1


@pytest.mark.parametrize("q", [3, 5, 9])
def test_degree_two_vanishes_over_finite_fields(q):
    F = GF(q)
    units = [a.data for a in F.nonzero_elements()]
    assert all(mw_symbol(F, [a, b]).is_zero() for a in units for b in units)


def test_forgetful_and_hyperbolic():
    F = GF(3)
    assert forgetful(ev(F, "eta[2]")).is_zero()
    y = km_symbol(F, [F.from_int(2)])
    assert forgetful(hyperbolic(y)) == 2 * y
    assert (2 * y).is_zero()
    assert hyperbolic(km_symbol(F, [F.one()])).is_zero()
    for a in (Fraction(2), Fraction(-3), Fraction(5, 7)):
        z = km_symbol(QQ, [a])
        assert forgetful(hyperbolic(z)) == 2 * z


def test_twisted_generator_change():
    F = QQ
    x = TwistedElem(MWElem.integer(F, 1), 1, "g")
    assert x.change_basis(Fraction(4), "4g").element == x.element
    G = GF(3)
    y = TwistedElem(MWElem.integer(G, 1), 1, "g")
    assert y.change_basis(G.from_int(2), "2g").element == MWElem.angle(G, G.from_int(2))


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.label())
def test_print_parse_round_trip(F, rng):
    for _ in range(25):
        deg = rng.choice([-2, -1, 0, 1, 2])
        if deg > 0:
            entries = [F.random_data(rng, nonzero=True) for _ in range(deg)]
            x = mw_symbol(F, entries)
            if deg == 1 and rng.random() < 0.5:
                x = x + x
            if deg == 2:
                text = "[" + ", ".join(F.fmt(e) for e in entries) + "]"
                assert evaluate(parse_expr(F, text)) == x
                continue
        elif deg == 0:
            x = MWElem.from_gw(GWClass(F, [F.random_data(rng, nonzero=True)], [F.random_data(rng, nonzero=True)]))
        else:
            x = MWElem(F, deg, None, GWClass(F, [F.random_data(rng, nonzero=True)]))
        if deg == 1:
            assert evaluate(to_expr(x)) == x
        text = str(to_expr(x)) if deg >= 1 else _text_for(x)
        if deg < 0:
            printed = str(x)
            assert printed == "0" and x.is_zero() or evaluate(parse_expr(F, printed)) == x
        if text == "0":
            # a bare zero carries no degree
            assert x.is_zero()
        else:
            assert evaluate(parse_expr(F, text)) == x


def _text_for(x):
    if x.degree == 0:
        return str(x.form)
    return "eta^%d(%s)" % (-x.degree, x.form)

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwkit import GF, QQ, FunField, MWElem, Place, Valuation, evaluate, parse_expr, parse_form, parse_milnor
from mwkit.fields import field_extension, parse_poly
from mwkit.milnor import km_tame_symbol, norm
from mwkit.mwk import mw_symbol
from mwkit.residues import (
    eps_integer,
    inseparable_pullback_pushforward,
    is_unramified,
    omega0,
    residue,
    residue_value,
    specialize,
    transfer_cohomological,
    transfer_geometric_splitseq,
    twisted_to_default,
)


def _at_zero(T):
    return Valuation(Place(T, parse_poly(T.base, "t")))


def test_residue_examples_over_f3():
    F = GF(3)
    T = FunField(F)
    v = _at_zero(T)
    assert residue_value(v, parse_expr(T, "[t]")) == MWElem.integer(F, 1)
    assert residue_value(v, parse_expr(T, "[2]")).is_zero()
    assert residue_value(v, parse_expr(T, "[2t]")) == MWElem.angle(F, F.from_int(2))
    r = residue(v, parse_expr(T, "[t]"))
    assert r.grading == 1 and str(r.generator) == "t"


def _rand_poly_text(rng, q, deg):
    coeffs = [rng.randrange(q) for _ in range(deg)] + [1]
    return "(" + " + ".join(f"{c}*t^{i}" for i, c in enumerate(coeffs) if c) + ")"


@given(st.sampled_from([3, 5]), st.integers(0, 2**32))
@settings(max_examples=60, deadline=None)
def test_milnor_leg_of_residue_is_the_tame_symbol(q, seed):
    rng = random.Random(seed)
    F = GF(q)
    T = FunField(F)
    a = _rand_poly_text(rng, q, rng.randrange(1, 4))
    b = _rand_poly_text(rng, q, rng.randrange(0, 3))
    c = rng.randrange(1, q)
    x = parse_expr(T, f"[{a}, {c}*{b}]")
    y = parse_milnor(T, f"{{{a}, {c}*{b}}}")
    for root in range(q):
        v = Valuation(Place(T, parse_poly(F, f"t - {root}")))
        assert residue_value(v, x).milnor == km_tame_symbol(v, y)


def test_uniformizer_change_is_covariant():
    F = GF(5)
    T = FunField(F)
    place = Place(T, parse_poly(F, "t - 1"))
    x = parse_expr(T, "[t - 1, t + 1] + eta[t^2 - 1, 2, t]")
    default = residue(Valuation(place), x)
    other = residue(Valuation(place, T.elem(T.gen()) * 2 - 2), x)
    assert twisted_to_default(place, other) == twisted_to_default(place, default)
    # the bare values differ by <2>
    assert other.element == MWElem.angle(F, F.from_int(3)) * default.element


def test_eta_and_angle_linearity():
    F = GF(3)
    T = FunField(F)
    v = _at_zero(T)
    x = parse_expr(T, "[t, t + 1]")
    assert residue_value(v, parse_expr(T, "eta[t, t + 1]")) == MWElem.eta(F) * residue_value(v, x)
    assert residue_value(v, parse_expr(T, "<t + 2>[t, t + 1]")) == MWElem.angle(F, F.from_int(2)) * residue_value(v, x)


def test_residue_at_infinity_and_higher_degree_place():
    F = GF(3)
    T = FunField(F)
    inf = Valuation(Place.infinity(T))
    # t = -1/pi for pi = -1/t, and d([pi^-1 u]) works out to -1
    assert residue_value(inf, parse_expr(T, "[t]")) == MWElem.integer(F, -1)
    p = Place(T, parse_poly(F, "t^2 + 1"))
    r = residue_value(Valuation(p), parse_expr(T, "[t^2 + 1]"))
    assert r.field == p.residue_field and r == MWElem.integer(r.field, 1)


def test_specialization_examples():
    F = GF(3)
    T = FunField(F)
    v = _at_zero(T)
    assert specialize(v, parse_expr(T, "[t + 1]")).is_zero()
    assert specialize(v, parse_expr(T, "<2>")) == MWElem.angle(F, F.from_int(2))
    assert specialize(v, parse_expr(T, "[t + 2]")) == mw_symbol(F, [F.from_int(2)])
    assert specialize(v, parse_expr(T, "0")).is_zero()


def test_specialization_uniformizer_independent_on_unramified():
    F = GF(5)
    T = FunField(F)
    place = Place(T, parse_poly(F, "t - 2"))
    y = parse_expr(T, "[t + 1, t^2 + 1]")
    assert not is_unramified(y, "A1").unramified
    t = T.elem(T.gen())
    a = specialize(Valuation(place), y)
    b = specialize(Valuation(place, (t - 2) * 3), y)
    assert a == b


def test_unramified_examples():
    F = GF(3)
    T = FunField(F)
    assert is_unramified(parse_expr(T, "[t]"), "Gm").unramified
    assert not is_unramified(parse_expr(T, "[t]"), "A1").unramified
    assert is_unramified(parse_expr(T, "<2>"), "A1").unramified


def test_trace_transfer_examples():
    K, F = GF(9), GF(3)
    assert transfer_cohomological(K, MWElem.integer(K, 1)).form == parse_form(F, "<1,2>")
    y = MWElem.angle(F, F.from_int(2))
    assert transfer_cohomological(F, y) == y
    # a generator of F_9^x
    alpha = next(a.data for a in K.nonzero_elements() if all(K.pow(a.data, k) != K.one() for k in (1, 2, 4)))
    tr = transfer_cohomological(K, mw_symbol(K, [alpha]))
    assert tr.milnor == norm(K, mw_symbol(K, [alpha]).milnor)
    assert str(tr.milnor) == "{2}"
    assert tr.is_compatible()


@pytest.mark.parametrize("modulus", ["x^2 + 1", "x^2 + x + 2"])
def test_geometric_transfer_matches_corrected_trace_over_f3(modulus):
    F = GF(3)
    K = field_extension(F, modulus)
    w = MWElem.angle(K, omega0(K).data)
    for c in K.nonzero_elements():
        y = MWElem.angle(K, c.data)
        assert transfer_geometric_splitseq(K, y) == transfer_cohomological(K, w * y)
        z = mw_symbol(K, [c.data])
        assert transfer_geometric_splitseq(K, z) == transfer_cohomological(K, w * z)


def test_geometric_transfer_trivial_cases():
    F = GF(5)
    K = field_extension(F, "x - 2")
    y = MWElem.angle(K, K.from_int(3))
    assert transfer_geometric_splitseq(K, y).form == parse_form(F, "<3>")
    assert transfer_geometric_splitseq(GF(25), MWElem.zero(GF(25), 1)).is_zero()


def test_geometric_transfer_over_q_quadratic():
    K = field_extension(QQ, "x^2 - 2")
    w = MWElem.angle(K, omega0(K).data)
    # form isometry over K itself is not decidable, so only transfer 1 and <omega0>
    assert transfer_geometric_splitseq(K, MWElem.integer(K, 1)) == transfer_cohomological(K, w)


def test_inseparable_pullback_pushforward_is_p_eps():
    for p in (3, 5, 7):
        assert inseparable_pullback_pushforward(p) == eps_integer(GF(p), p)
    assert inseparable_pullback_pushforward(3) == parse_form(GF(3), "<1,1,2>")


def test_residue_rejects_foreign_valuation():
    T3 = FunField(GF(3))
    T5 = FunField(GF(5))
    with pytest.raises(ValueError):
        residue_value(_at_zero(T5), parse_expr(T3, "[t]"))


def test_evaluate_over_function_field_is_formal():
    T = FunField(GF(3))
    x = evaluate(parse_expr(T, "[t]"))
    assert x.degree == 1

from __future__ import annotations

import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwkit import GF
from mwkit import correspondences as cr
from mwkit.fields.factor import factor_poly
from mwkit.forms import GWClass, parse_form, trace_form


def _ext(F, d):
    return cr.EtaleAlg(F, (d,))


def _field_map(F, a, b, twist=0):
    return cr.AlgebraMap(_ext(F, a), _ext(F, b), ((0, twist),))


@pytest.mark.parametrize("q,a,b", [(3, 2, 2), (3, 2, 3), (3, 1, 3), (3, 2, 4), (5, 2, 2), (3, 3, 3)])
def test_tensor_components_match_factoring(q, a, b):
    """F_(q^a) (x) F_(q^b) = F_(q^a)[x]/(m) splits like m over F_(q^a)."""
    F = GF(q)
    big = GF(q**a)
    m = GF(q**b).modulus
    lifted = [big.coerce(F.elem(c)) for c in m]
    lifted = [c.data if hasattr(c, "data") else c for c in lifted]
    _, factors = factor_poly(big, lifted)
    degrees = sorted(len(f) - 1 for f, e in factors for _ in range(e))
    comps = cr.tensor_components((a, b))
    assert len(comps) == len(degrees) == math.gcd(a, b)
    # each component has degree lcm(a, b) over F_q, that is lcm / a over F_(q^a)
    assert all(d == math.lcm(a, b) // a for d in degrees)


def test_trace_composite_over_f9_and_f25():
    for q in (3, 5):
        F = GF(q)
        f = _field_map(F, 1, 2)
        composite = cr.compose(cr.graph(f), cr.pushforward_corr(f))
        assert composite == cr.identity(f.source).scaled(trace_form(GF(q * q)))
    F = GF(3)
    f = _field_map(F, 1, 2)
    assert cr.compose(cr.graph(f), cr.pushforward_corr(f)).value(0, 0, (0, 0)) == parse_form(F, "<1,2>")


def test_pullback_of_pushforward_splits_into_graphs():
    F = GF(3)
    f = _field_map(F, 1, 2)
    frob = _field_map(F, 2, 2, twist=1)
    B = f.target
    assert cr.compose(cr.pushforward_corr(f), cr.graph(f)) == cr.identity(B) + cr.graph(frob)


def test_graph_examples():
    F = GF(3)
    B = _ext(F, 2)
    assert cr.graph(cr.AlgebraMap.identity(B)) == cr.identity(B)
    s = cr.graph(cr.AlgebraMap.structure(B))
    assert s.entries == {(0, 0, (0, 0)): (1, 0)}
    frob = cr.graph(_field_map(F, 2, 2, twist=1))
    assert cr.rank_functor(frob).entries == {(0, 0, (0, 1)): 1}
    assert frob != cr.identity(B)


def test_graph_is_functorial_along_a_tower():
    F = GF(3)
    f = _field_map(F, 1, 2)
    g = _field_map(F, 2, 4)
    assert cr.compose(cr.graph(f), cr.graph(g)) == cr.graph(f.then(g))
    h = _field_map(F, 2, 4, twist=1)
    assert cr.compose(cr.graph(f), cr.graph(h)) == cr.graph(f.then(h))


def test_pushforward_projects_to_transpose():
    F = GF(3)
    f = _field_map(F, 1, 2)
    assert cr.rank_functor(cr.pushforward_corr(f)).entries == {(0, 0, (0, 0)): 1}
    triv = _field_map(F, 2, 2)
    assert cr.pushforward_corr(triv) == cr.identity(triv.source)


@given(st.sampled_from([3, 5, 7]), st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_category_laws(q, seed):
    rng = random.Random(seed)
    F = GF(q)
    A, B, C, D = [cr.random_algebra(rng, F, 2, 3) for _ in range(4)]
    a = cr.random_correspondence(rng, A, B)
    b = cr.random_correspondence(rng, B, C)
    c = cr.random_correspondence(rng, C, D)
    assert cr.compose(cr.identity(B), a) == a
    assert cr.compose(a, cr.identity(A)) == a
    assert cr.compose(c, cr.compose(b, a)) == cr.compose(cr.compose(c, b), a)
    assert cr.compose(b, a + a) == cr.compose(b, a) + cr.compose(b, a)


@given(st.integers(0, 2**32))
@settings(max_examples=20, deadline=None)
def test_tensor_functoriality(seed):
    rng = random.Random(seed)
    F = GF(3)
    A, B, C, A2, B2, C2 = [cr.random_algebra(rng, F, 2, 2) for _ in range(6)]
    a, b = cr.random_correspondence(rng, A, B), cr.random_correspondence(rng, B, C)
    a2, b2 = cr.random_correspondence(rng, A2, B2), cr.random_correspondence(rng, B2, C2)
    assert cr.compose(cr.tensor(b, b2), cr.tensor(a, a2)) == cr.tensor(cr.compose(b, a), cr.compose(b2, a2))


@given(st.sampled_from([3, 5]), st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_rank_of_hyperbolic_doubles(q, seed):
    rng = random.Random(seed)
    F = GF(q)
    A, B = cr.random_algebra(rng, F), cr.random_algebra(rng, F)
    x = cr.random_correspondence(rng, A, B)
    assert cr.rank_functor(cr.hyperbolic(x)) == 2 * cr.rank_functor(x)


def test_unit_actions():
    F = GF(5)
    rng = random.Random(3)
    A, B = cr.EtaleAlg(F, (1, 2)), cr.EtaleAlg(F, (1, 3))
    x = cr.random_correspondence(rng, A, B, density=1.0)
    one = [F.one(), GF(25).one()]
    assert cr.kmw0_action(one, x) == x
    u = [F.from_int(2), GF(25).nonsquare.data]
    assert cr.kmw0_action(u, cr.kmw0_action(u, x)) == x
    minus = [F.neg(F.one()), GF(25).neg(GF(25).one())]
    eps = -GWClass(F, [F.neg(F.one())])
    assert x.scaled(eps) == -cr.kmw0_action(minus, x)
    F3 = GF(3)
    y = cr.random_correspondence(rng, cr.EtaleAlg(F3, (1,)), cr.EtaleAlg(F3, (2,)), density=1.0)
    assert y.scaled(-GWClass(F3, [F3.from_int(2)])) == -cr.kmw0_action([F3.from_int(2)], y)


def test_json_round_trip():
    rng = random.Random(11)
    F = GF(3)
    x = cr.random_correspondence(rng, cr.EtaleAlg(F, (1, 2)), cr.EtaleAlg(F, (2, 3)), density=1.0)
    text = json.dumps(x.to_json(), sort_keys=True)
    assert cr.Correspondence.from_json(text) == x
    wrapped = {"schema": "mwkit/1", "command": "corr", "ok": True, "result": x.to_json()}
    assert cr.Correspondence.from_json(wrapped) == x


def test_mismatched_composition_rejected():
    F = GF(3)
    a = cr.identity(_ext(F, 1))
    b = cr.identity(_ext(F, 2))
    with pytest.raises(ValueError):
        cr.compose(b, a)

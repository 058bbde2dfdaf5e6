from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwkit import GF, QQ, RR, BilinearForm, GWClass, WittClass, decide_iso, fundamental_ideal_level, parse_form
from mwkit.fields import UnsupportedField
from mwkit.forms import finite_trace_transfer, hasse_invariant, hilbert_symbol, trace_form, trace_transfer


def _congruent_brute(F, A, B):
    """Search all invertible 2x2 matrices P for P^T A P = B."""
    elems = [e.data for e in F.elements()]
    for a, b, c, d in itertools.product(elems, repeat=4):
        if F.sub(F.mul(a, d), F.mul(b, c)) == F.zero():
            continue
        Pm = [[a, b], [c, d]]
        ok = True
        for i in range(2):
            for j in range(2):
                s = F.zero()
                for k in range(2):
                    for l in range(2):
                        s = F.add(s, F.mul(F.mul(Pm[k][i], A[k][l]), Pm[l][j]))
                if s != B[i][j]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


@pytest.mark.parametrize("q", [3, 5])
def test_decide_iso_matches_brute_force_rank_two(q):
    F = GF(q)
    units = [e.data for e in F.nonzero_elements()]
    diags = list(itertools.combinations_with_replacement(units, 2))
    z = F.zero()
    for d1, d2 in itertools.combinations(diags, 2):
        A = [[d1[0], z], [z, d1[1]]]
        B = [[d2[0], z], [z, d2[1]]]
        assert decide_iso(BilinearForm(F, d1), BilinearForm(F, d2)) == _congruent_brute(F, A, B)


def test_gram_diagonalization_preserves_class():
    F = GF(5)
    gram = [[F.from_int(1), F.from_int(2)], [F.from_int(2), F.from_int(3)]]
    # det = 3 - 4 = -1 = 4, a square, and the form represents 1
    assert decide_iso(BilinearForm.from_gram(F, gram), BilinearForm(F, [F.one(), F.from_int(4)]))


def test_rational_isometry_examples():
    Q = QQ
    f = lambda *xs: BilinearForm(Q, [Fraction(x) for x in xs])
    assert decide_iso(f(1, 1), f(2, 2))
    assert not decide_iso(f(1, 1), f(3, 3))
    assert decide_iso(f(1, 1, 1), f(1, 2, 2))
    assert not decide_iso(f(1, 1), f(1, -1))
    assert decide_iso(f(5, 5), f(1, 1))


def test_hilbert_symbol_table():
    assert hilbert_symbol(Fraction(-1), Fraction(-1), 2) == -1
    assert hilbert_symbol(Fraction(-1), Fraction(-1), "inf") == -1
    assert hilbert_symbol(Fraction(2), Fraction(3), 3) == -1
    assert hilbert_symbol(Fraction(2), Fraction(7), 7) == 1
    assert hilbert_symbol(Fraction(5), Fraction(1, 4), 5) == 1


@given(st.integers(-60, 60).filter(bool), st.integers(-60, 60).filter(bool))
@settings(max_examples=150, deadline=None)
def test_hilbert_product_formula(a, b):
    primes = [p for p in range(2, 62) if all(p % d for d in range(2, p))]
    total = hilbert_symbol(Fraction(a), Fraction(b), "inf")
    for p in primes:
        total *= hilbert_symbol(Fraction(a), Fraction(b), p)
    assert total == 1


def test_hyperbolic_planes_cancel_over_q():
    Q = QQ
    g = GWClass(Q, [Fraction(3), Fraction(-3), Fraction(7)])
    assert g == GWClass(Q, [Fraction(1), Fraction(-1), Fraction(7)])
    assert WittClass(g) == WittClass(GWClass(Q, [Fraction(7)]))
    assert WittClass(GWClass.hyperbolic(Q, 2)).is_zero()


def test_fundamental_ideal_levels_over_q():
    Q = QQ
    n_ones = lambda n: GWClass(Q, [Fraction(1)] * n)
    assert fundamental_ideal_level(n_ones(1)) == 0
    assert fundamental_ideal_level(n_ones(2)) == 1
    assert fundamental_ideal_level(n_ones(4)) == 2
    assert fundamental_ideal_level(n_ones(8)) == 3
    assert fundamental_ideal_level(GWClass(Q, [Fraction(1), Fraction(-1)])) == fundamental_ideal_level(
        GWClass.zero(Q)
    )
    assert fundamental_ideal_level(n_ones(8), bound=2) == 2


def test_real_signature_classes():
    g = GWClass(RR, [Fraction(3), Fraction(-2), Fraction(5)])
    assert g.signature() == 1
    assert g == GWClass(RR, [Fraction(1), Fraction(1), Fraction(-1)])
    assert fundamental_ideal_level(GWClass(RR, [Fraction(1)] * 4)) == 2


@pytest.mark.parametrize("q", [9, 25, 27, 49])
def test_trace_transfer_closed_form_agrees_with_gram_matrix(q):
    K = GF(q)
    for c in K.nonzero_elements():
        phi = GWClass(K, [c.data])
        assert trace_transfer(K, phi) == finite_trace_transfer(K, phi)


def test_trace_form_of_f9_over_f3():
    K = GF(9)
    assert trace_form(K) == parse_form(GF(3), "<1,2>")


def test_parse_form_and_print_round_trip(rng):
    for F in (GF(5), GF(9), QQ):
        for _ in range(20):
            pos = [F.random_data(rng, nonzero=True) for _ in range(rng.randrange(4))]
            neg = [F.random_data(rng, nonzero=True) for _ in range(rng.randrange(3))]
            g = GWClass(F, pos, neg)
            assert parse_form(F, str(g)) == g


def test_finite_normal_form_examples():
    F = GF(3)
    assert parse_form(F, "<1,1>") == parse_form(F, "<2,2>")
    assert parse_form(F, "<1,2>") == GWClass.hyperbolic(F)
    assert parse_form(F, "2<1> - <1>") == GWClass.one(F)


def test_hasse_invariant_of_sum_of_squares():
    # <1,-1,-1> picks up (-1,-1), nontrivial exactly at 2 and infinity
    entries = [Fraction(1), Fraction(-1), Fraction(-1)]
    assert hasse_invariant(entries, 2) == -1
    assert hasse_invariant(entries, "inf") == -1
    assert hasse_invariant(entries, 3) == 1


def test_undecidable_field_is_reported():
    from mwkit import FunField

    T = FunField(GF(3))
    with pytest.raises(UnsupportedField):
        decide_iso(BilinearForm(T, [T.one()]), BilinearForm(T, [T.gen()]))

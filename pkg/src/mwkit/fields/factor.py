"""Factorization of univariate polynomials over finite fields and Q.

Finite fields (including towers) use square-free decomposition, distinct
degree splitting and Cantor-Zassenhaus equal degree splitting.  The random
choices in the last step come from a fixed-seed generator so results are
reproducible; the factor list is returned sorted.  Over Q we defer to sympy.
"""

from __future__ import annotations

import functools
import random
from fractions import Fraction

from . import poly as P
from .base import FieldError, RationalField, UnsupportedField


def factor_poly(F, f):
    """Return ``(leading, [(monic irreducible, multiplicity), ...])`` for ``f != 0``."""
    f = P.strip(F, f)
    if not f:
        raise FieldError("cannot factor the zero polynomial")
    lead = f[-1]
    if len(f) == 1:
        return lead, []
    return lead, list(_factor_monic(F, P.monic(F, f)))


@functools.lru_cache(maxsize=8192)
def _factor_monic(F, f):
    if F.is_finite:
        result = _factor_finite(F, f)
    elif isinstance(F, RationalField):
        result = _factor_rational(F, f)
    else:
        raise UnsupportedField(f"factorization over {F.label()} is not available")
    return tuple(sorted(result, key=lambda item: (len(item[0]), _sort_key(item[0]))))


def _sort_key(f):
    return tuple(repr(c) for c in reversed(f))


def is_irreducible(F, f) -> bool:
    f = P.strip(F, f)
    if len(f) < 2:
        return False
    if len(f) == 2:
        return True
    _, factors = factor_poly(F, f)
    return len(factors) == 1 and factors[0][1] == 1


# -- finite fields --------------------------------------------------------------


def _factor_finite(F, f):
    out = []
    for g, mult in _squarefree(F, f):
        for d, h in _distinct_degree(F, g):
            for irr in _equal_degree(F, h, d):
                out.append((irr, mult))
    merged: dict = {}
    for g, m in out:
        merged[g] = merged.get(g, 0) + m
    return list(merged.items())


def _pth_root_poly(F, f):
    p = F.characteristic
    q = F.order
    coeffs = [F.pow(f[i], q // p) for i in range(0, len(f), p)]
    return P.strip(F, coeffs)


def _squarefree(F, f):
    """Square-free decomposition over a finite field: list of (factor, multiplicity)."""
    result = []
    p = F.characteristic
    one = P.const(F, F.one())
    i = 1
    df = P.derivative(F, f)
    c = P.gcd(F, f, df)
    w = P.exact_div(F, f, c)
    while w != one:
        y = P.gcd(F, w, c)
        fac = P.exact_div(F, w, y)
        if fac != one:
            result.append((fac, i))
        w = y
        c = P.exact_div(F, c, y)
        i += 1
    if c != one:
        for g, m in _squarefree(F, _pth_root_poly(F, c)):
            result.append((g, m * p))
    return result


def _distinct_degree(F, f):
    q = F.order
    out = []
    d = 1
    xpoly = P.x(F)
    h = xpoly
    while len(f) - 1 >= 2 * d:
        h = P.powmod(F, h, q, f)
        g = P.gcd(F, f, P.sub(F, h, xpoly))
        if len(g) > 1:
            out.append((d, g))
            f = P.exact_div(F, f, g)
            h = P.rem(F, h, f)
        d += 1
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def _equal_degree(F, f, d):
    n = len(f) - 1
    if n == d:
        return [f]
    rng = random.Random(1729 + n)
    q = F.order
    exponent = (q**d - 1) // 2
    one = P.const(F, F.one())
    while True:
        a = P.strip(F, [F.random_data(rng) for _ in range(n)])
        if len(a) < 2:
            continue
        g = P.gcd(F, a, f)
        if len(g) == 1:
            b = P.powmod(F, a, exponent, f)
            g = P.gcd(F, P.sub(F, b, one), f)
        if 1 < len(g) < len(f):
            return _equal_degree(F, g, d) + _equal_degree(F, P.exact_div(F, f, g), d)


# -- rationals ------------------------------------------------------------------


def _factor_rational(F, f):
    import sympy

    x = sympy.Symbol("x")
    expr = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f)], x, domain="QQ")
    _, factors = expr.factor_list()
    out = []
    for fac, mult in factors:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())]
        out.append((P.monic(F, P.strip(F, coeffs)), mult))
    return out


# -- defining polynomials ---------------------------------------------------------


def least_irreducible(F, d: int):
    """Least monic irreducible of degree ``d`` over a finite field ``F``.

    Candidates ``x^d + c_{d-1} x^{d-1} + ... + c_0`` are ordered
    lexicographically by ``(c_{d-1}, ..., c_0)`` in the field's enumeration order.
    """
    if not F.is_finite:
        raise FieldError("least_irreducible needs a finite field")
    elems = list(F.elements_data())
    import itertools

    for combo in itertools.product(elems, repeat=d):
        f = tuple(reversed(combo)) + (F.one(),)
        if f[0] == F.zero():
            continue
        if is_irreducible(F, f):
            return f
    raise FieldError("no irreducible polynomial found")

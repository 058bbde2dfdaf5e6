"""Dense univariate polynomials over a `Field`, on raw coefficient data.

A polynomial is a tuple ``(c0, c1, ..., cn)`` of field data with ``cn != 0``;
the zero polynomial is ``()``.  Every function takes the coefficient field
first.  These routines sit underneath extension fields, function fields and
factorization, so they work on data rather than `FieldElem` wrappers.
"""

from __future__ import annotations


def strip(F, coeffs):
    zero = F.zero()
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == zero:
        coeffs.pop()
    return tuple(coeffs)


def deg(f) -> int:
    return len(f) - 1


def lc(F, f):
    return f[-1] if f else F.zero()


def const(F, c):
    return () if c == F.zero() else (c,)


def monomial(F, c, n):
    if c == F.zero():
        return ()
    return (F.zero(),) * n + (c,)


def x(F):
    return (F.zero(), F.one())


def add(F, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return strip(F, out)


def neg(F, f):
    return tuple(F.neg(c) for c in f)


def sub(F, f, g):
    return add(F, f, neg(F, g))


def scale(F, c, f):
    if c == F.zero():
        return ()
    return strip(F, [F.mul(c, a) for a in f])


def mul(F, f, g):
    if not f or not g:
        return ()
    zero = F.zero()
    out = [zero] * (len(f) + len(g) - 1)
    fmul, fadd = F.mul, F.add
    for i, a in enumerate(f):
        if a == zero:
            continue
        for j, b in enumerate(g):
            out[i + j] = fadd(out[i + j], fmul(a, b))
    return strip(F, out)


def divmod_(F, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if len(f) < len(g):
        return (), f
    inv_lc = F.inv(g[-1])
    rem = list(f)
    dg = len(g) - 1
    quo = [F.zero()] * (len(f) - dg)
    for k in range(len(f) - 1, dg - 1, -1):
        c = rem[k]
        if c == F.zero():
            continue
        q = F.mul(c, inv_lc)
        quo[k - dg] = q
        for j in range(dg + 1):
            rem[k - dg + j] = F.sub(rem[k - dg + j], F.mul(q, g[j]))
    return strip(F, quo), strip(F, rem[:dg])


def rem(F, f, g):
    return divmod_(F, f, g)[1]


def quo(F, f, g):
    return divmod_(F, f, g)[0]


def exact_div(F, f, g):
    q, r = divmod_(F, f, g)
    if r:
        raise ValueError("inexact polynomial division")
    return q


def monic(F, f):
    if not f:
        return f
    return scale(F, F.inv(f[-1]), f)


def is_monic(F, f):
    return bool(f) and f[-1] == F.one()


def gcd(F, f, g):
    while g:
        f, g = g, rem(F, f, g)
    return monic(F, f)


def xgcd(F, f, g):
    """Return ``(d, s, t)`` with ``s*f + t*g = d`` and ``d`` monic."""
    r0, r1 = f, g
    s0, s1 = const(F, F.one()), ()
    t0, t1 = (), const(F, F.one())
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return (), (), ()
    c = F.inv(r0[-1])
    return scale(F, c, r0), scale(F, c, s0), scale(F, c, t0)


def mulmod(F, f, g, m):
    return rem(F, mul(F, f, g), m)


def powmod(F, f, n, m):
    result = const(F, F.one())
    base = rem(F, f, m)
    while n:
        if n & 1:
            result = mulmod(F, result, base, m)
        n >>= 1
        if n:
            base = mulmod(F, base, base, m)
    return result


def pow_(F, f, n):
    result = const(F, F.one())
    while n:
        if n & 1:
            result = mul(F, result, f)
        n >>= 1
        if n:
            f = mul(F, f, f)
    return result


def evaluate(F, f, a):
    """Horner evaluation of ``f`` at field data ``a``."""
    acc = F.zero()
    for c in reversed(f):
        acc = F.add(F.mul(acc, a), c)
    return acc


def evaluate_in(E, f, a, embed):
    """Evaluate ``f`` (coefficients in some field) at ``a`` in ``E``.

    ``embed`` maps coefficient data into ``E``.
    """
    acc = E.zero()
    for c in reversed(f):
        acc = E.add(E.mul(acc, a), embed(c))
    return acc


def derivative(F, f):
    return strip(F, [F.mul(F.from_int(i), f[i]) for i in range(1, len(f))])


def compose(F, f, g):
    """``f(g(x))``."""
    acc = ()
    for c in reversed(f):
        acc = add(F, mul(F, acc, g), const(F, c))
    return acc


def fmt(F, f, var="t") -> str:
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == F.zero():
            continue
        cs = F.fmt(c)
        if i == 0:
            terms.append(cs)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        if c == F.one():
            terms.append(mono)
        elif c == F.neg(F.one()) and F.characteristic == 0:
            terms.append("-" + mono)
        else:
            if any(ch in cs for ch in "+- ") and not cs.lstrip("-").isdigit():
                cs = f"({cs})"
            terms.append(f"{cs}*{mono}")
    out = terms[0]
    for term in terms[1:]:
        out += " - " + term[1:] if term.startswith("-") else " + " + term
    return out

"""Milnor K-theory in decidable models, tame symbols, and mod 2 classes.

Models by field:

* finite F_q: ``K_0 = Z``, ``K_1 = F_q^x`` (stored as the element), ``K_n = 0`` for ``n >= 2``;
* Q: ``K_1 = Q^x``; ``K_2`` by its tame symbols at odd primes together with
  the sign of ``{a, b}`` at the real place; ``K_n`` for ``n >= 3`` by the real
  bit (``Z/2`` generated by ``{-1, ..., -1}``);
* function fields and number fields: formal Z-combinations of symbols, with
  no equality decision.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable

from .fields import FieldElem, FieldError, UnsupportedField, Valuation
from .fields import FunctionField, SimpleExtension
from . import forms


def model_kind(F) -> str:
    kind = F.form_kind
    if kind == "finite":
        return "finite"
    if kind == "rational":
        return "rational"
    return "formal"


def _entry(F, a):
    d = a if isinstance(a, tuple) else F.coerce(a)
    if d == F.zero():
        raise FieldError("symbol entries must be nonzero")
    return d


class MilnorElem:
    """A class in ``K^M_n(F)`` in the model of its field."""

    __slots__ = ("field", "degree", "data")

    def __init__(self, field, degree: int, data):
        if degree < 0:
            raise ValueError("Milnor K-theory lives in degrees >= 0")
        self.field = field
        self.degree = degree
        self.data = data

    # -- construction ----------------------------------------------------------
    @classmethod
    def zero(cls, field, degree: int) -> MilnorElem:
        kind = model_kind(field)
        if degree == 0:
            return cls(field, 0, 0)
        if kind == "finite":
            return cls(field, degree, field.one() if degree == 1 else None)
        if kind == "rational":
            if degree == 1:
                return cls(field, 1, Fraction(1))
            if degree == 2:
                return cls(field, 2, ((), 0))
            return cls(field, degree, 0)
        return cls(field, degree, ())

    @classmethod
    def integer(cls, field, n: int) -> MilnorElem:
        return cls(field, 0, n)

    @property
    def is_formal(self) -> bool:
        return model_kind(self.field) == "formal"

    # -- group structure ---------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, MilnorElem):
            raise TypeError("expected a MilnorElem")
        if other.field != self.field or other.degree != self.degree:
            raise FieldError("Milnor elements from different groups")

    def __add__(self, other: MilnorElem) -> MilnorElem:
        self._check(other)
        F, n = self.field, self.degree
        if n == 0:
            return MilnorElem(F, 0, self.data + other.data)
        kind = model_kind(F)
        if kind == "formal":
            c = Counter(dict(self.data))
            c.update(dict(other.data))
            return MilnorElem(F, n, _formal(c))
        if kind == "finite":
            if n == 1:
                return MilnorElem(F, 1, F.mul(self.data, other.data))
            return self
        if n == 1:
            return MilnorElem(F, 1, self.data * other.data)
        if n == 2:
            return MilnorElem(F, 2, _k2_add(self.data, other.data))
        return MilnorElem(F, n, self.data ^ other.data)

    def __neg__(self) -> MilnorElem:
        F, n = self.field, self.degree
        if n == 0:
            return MilnorElem(F, 0, -self.data)
        kind = model_kind(F)
        if kind == "formal":
            return MilnorElem(F, n, tuple((k, -v) for k, v in self.data))
        if kind == "finite":
            return MilnorElem(F, 1, F.inv(self.data)) if n == 1 else self
        if n == 1:
            return MilnorElem(F, 1, 1 / self.data)
        if n == 2:
            places, bit = self.data
            return MilnorElem(F, 2, (tuple((p, pow(r, -1, p)) for p, r in places), bit))
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int) -> MilnorElem:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (-self).__rmul__(-k)
        out = MilnorElem.zero(self.field, self.degree)
        base = self
        while k:
            if k & 1:
                out = out + base
            k >>= 1
            if k:
                base = base + base
        return out

    def __mul__(self, other):
        if isinstance(other, int):
            return self.__rmul__(other)
        return product(self, other)

    def is_zero(self) -> bool:
        return self == MilnorElem.zero(self.field, self.degree)

    def __eq__(self, other):
        if not isinstance(other, MilnorElem):
            return NotImplemented
        if other.field != self.field or other.degree != self.degree:
            return False
        if self.is_formal and self.degree > 0:
            raise UnsupportedField(f"no equality decision for K^M over {self.field.label()}")
        return self.data == other.data

    def __hash__(self):
        return hash((self.field, self.degree, self.data))

    def __str__(self):
        F, n = self.field, self.degree
        if n == 0:
            return str(self.data)
        kind = model_kind(F)
        if kind == "formal":
            if not self.data:
                return "0"
            terms = []
            for entries, c in self.data:
                sym = "{" + ",".join(F.fmt(a) for a in entries) + "}"
                terms.append(sym if c == 1 else f"{c}*{sym}")
            return " + ".join(terms)
        if kind == "finite":
            if n >= 2:
                return "0"
            return "0" if self.data == F.one() else "{" + F.fmt(self.data) + "}"
        if n == 1:
            return "0" if self.data == 1 else "{" + str(self.data) + "}"
        if n == 2:
            places, bit = self.data
            if not places and not bit:
                return "0"
            parts = [f"{p}:{r}" for p, r in places]
            if bit:
                parts.append("inf:-1")
            return "K2[" + ", ".join(parts) + "]"
        return "{-1}^" + str(n) if self.data else "0"

    def __repr__(self):
        return f"MilnorElem(deg {self.degree}: {self}, {self.field.label()})"


def _formal(c: Counter):
    return tuple(sorted(((k, v) for k, v in c.items() if v), key=repr))


def _k2_add(x, y):
    places = dict(x[0])
    for p, r in y[0]:
        places[p] = places.get(p, 1) * r % p
    return (tuple(sorted((p, r) for p, r in places.items() if r != 1)), x[1] ^ y[1])


# -- symbols -------------------------------------------------------------------------


def _vp(q: Fraction, p: int) -> int:
    n = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        n += 1
    while den % p == 0:
        den //= p
        n -= 1
    return n


def _odd_primes(q: Fraction):
    from sympy import primefactors

    return [p for p in primefactors(abs(q.numerator) * q.denominator) if p != 2]


def tame_symbol_q(a: Fraction, b: Fraction, p: int) -> int:
    """``(-1)^(v(a)v(b)) a^v(b) / b^v(a)`` reduced mod an odd prime ``p``."""
    alpha, beta = _vp(a, p), _vp(b, p)
    val = Fraction(a) ** beta / Fraction(b) ** alpha
    if (alpha * beta) % 2:
        val = -val
    return val.numerator * pow(val.denominator, -1, p) % p


def _k2_symbol_q(a: Fraction, b: Fraction):
    places = []
    for p in sorted(set(_odd_primes(a)) | set(_odd_primes(b))):
        r = tame_symbol_q(a, b, p)
        if r != 1:
            places.append((p, r))
    return (tuple(places), int(a < 0 and b < 0))


def real_bit(x: MilnorElem) -> int:
    """Image in ``K^M_n(R)/2``: 1 exactly when the class is ``{-1,...,-1}`` there."""
    n = x.degree
    if n == 0:
        return x.data % 2
    if n == 1:
        return int(x.data < 0)
    if n == 2:
        return x.data[1]
    return x.data


def product(x: MilnorElem, y: MilnorElem) -> MilnorElem:
    if x.field != y.field:
        raise FieldError("Milnor elements over different fields")
    F = x.field
    n = x.degree + y.degree
    if x.degree == 0:
        return x.data * y
    if y.degree == 0:
        return y.data * x
    kind = model_kind(F)
    if kind == "finite":
        return MilnorElem.zero(F, n)
    if kind == "formal":
        c = Counter()
        for e1, c1 in x.data:
            for e2, c2 in y.data:
                c[e1 + e2] += c1 * c2
        return MilnorElem(F, n, _formal(c))
    if n == 2:
        return MilnorElem(F, 2, _k2_symbol_q(x.data, y.data))
    return MilnorElem(F, n, real_bit(x) & real_bit(y))


def km_symbol(F, entries: Iterable) -> MilnorElem:
    """The symbol ``{a_1, ..., a_n}``."""
    data = [_entry(F, a) for a in entries]
    if not data:
        return MilnorElem(F, 0, 1)
    kind = model_kind(F)
    if kind == "formal":
        return MilnorElem(F, len(data), ((tuple(data), 1),))
    out = MilnorElem(F, 1, data[0])
    for a in data[1:]:
        out = product(out, MilnorElem(F, 1, a))
    return out


def formal_symbols(x: MilnorElem):
    """``[(entries, coefficient)]`` for a formal element."""
    if x.degree == 0:
        return [((), x.data)]
    if not x.is_formal:
        raise ValueError("only formal elements carry symbol lists")
    return list(x.data)


# -- residues and norms --------------------------------------------------------------


def km_tame_symbol(v: Valuation, x: MilnorElem) -> MilnorElem:
    """Tame symbol of a formal element of ``K^M_n(F(t))`` at a valuation."""
    if x.degree == 0:
        raise ValueError("the residue of a degree 0 element is not defined")
    K = x.field
    k = v.residue_field
    out = MilnorElem.zero(k, x.degree - 1)
    minus_one = k.neg(k.one())
    for entries, coeff in formal_symbols(x):
        split = [v.valuation_of(FieldElem(K, a)) for a in entries]
        units = [v.residue_class(u).data for _, u in split]
        n = len(entries)
        # {a_1..a_n} = sum over subsets S of the product of k_i {pi} (i in S) and {u_i} (i not in S)
        for mask in range(1, 1 << n):
            idx = [i for i in range(n) if mask >> i & 1]
            mult = 1
            for i in idx:
                mult *= split[i][0]
            if not mult:
                continue
            # move the pi entries to the front: sign of the shuffle
            sign = (-1) ** sum(pos - r for r, pos in enumerate(idx))
            rest = [units[i] for i in range(n) if not mask >> i & 1]
            term = km_symbol(k, [minus_one] * (len(idx) - 1) + rest)
            out = out + (sign * mult * coeff) * term
    return out


def norm(K, x: MilnorElem, base=None) -> MilnorElem:
    """Norm ``K^M_n(K) -> K^M_n(F)`` for a simple extension ``K/F`` (``n <= 1``, or finite)."""
    if not isinstance(K, SimpleExtension):
        return x
    F = base or K.base
    if x.degree == 0:
        return MilnorElem(F, 0, x.data * K.degree)
    if x.degree == 1:
        return MilnorElem(F, 1, K.norm_data(x.data))
    if model_kind(F) == "finite":
        return MilnorElem.zero(F, x.degree)
    raise UnsupportedField("norms in degree >= 2 are only available over finite fields")


# -- mod 2 classes ---------------------------------------------------------------------


class Mod2Class:
    """An element of ``K^M_n(F)/2`` for a finite field or Q.

    Data: degree 0 a bit; degree 1 a canonical square-class representative;
    degree 2 over Q the sorted places with nontrivial Hilbert symbol; higher
    degrees over Q the real bit; everything else in degree >= 2 over F_q is 0.
    """

    __slots__ = ("field", "degree", "data")

    def __init__(self, field, degree, data):
        self.field = field
        self.degree = degree
        self.data = data

    def __eq__(self, other):
        return (
            isinstance(other, Mod2Class)
            and self.field == other.field
            and self.degree == other.degree
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.field, self.degree, self.data))

    def is_zero(self):
        return self == mod2_zero(self.field, self.degree)

    def __repr__(self):
        return f"Mod2Class(deg {self.degree}: {self.data!r}, {self.field.label()})"


def mod2_zero(F, n: int) -> Mod2Class:
    if n == 0:
        return Mod2Class(F, 0, 0)
    if n == 1:
        return Mod2Class(F, 1, F.one())
    if n == 2 and model_kind(F) == "rational":
        return Mod2Class(F, 2, ())
    return Mod2Class(F, n, 0)


def _hilbert_places_from_k2(data) -> tuple:
    places, bit = data
    out = []
    for p, r in places:
        if pow(r, (p - 1) // 2, p) == p - 1:
            out.append(p)
    if bit:
        out.append(forms.INFINITY)
    # the product formula fixes the symbol at 2
    if len(out) % 2:
        out.insert(0, 2)
    return _sort_places(out)


def milnor_mod2(x: MilnorElem) -> Mod2Class:
    """Reduction ``K^M_n -> K^M_n/2`` in the decidable models."""
    F, n = x.field, x.degree
    kind = model_kind(F)
    if kind == "formal":
        raise UnsupportedField(f"no mod 2 model over {F.label()}")
    if n == 0:
        return Mod2Class(F, 0, x.data % 2)
    if n == 1:
        return Mod2Class(F, 1, forms.square_class_rep(F, x.data))
    if kind == "finite":
        return mod2_zero(F, n)
    if n == 2:
        return Mod2Class(F, 2, _hilbert_places_from_k2(x.data))
    return Mod2Class(F, n, x.data)


def mod2_class_of_form(x, n: int) -> Mod2Class:
    """The class of ``x`` (in ``I^n``) in ``I^n/I^(n+1)``, read in ``K^M_n/2``."""
    gw = x.gw if isinstance(x, forms.WittClass) else x
    F = gw.field
    kind = model_kind(F)
    if kind == "formal":
        raise UnsupportedField(f"no mod 2 model over {F.label()}")
    level = forms.fundamental_ideal_level(gw, forms.MAX_BOUND)
    if level < n:
        raise ValueError(f"class lies in I^{level} but not in I^{n}")
    if n == 0:
        return Mod2Class(F, 0, gw.rank % 2)
    if n == 1:
        return Mod2Class(F, 1, forms.square_class_rep(F, gw.witt_form().signed_discriminant()))
    if kind == "finite":
        return mod2_zero(F, n)
    if n == 2:
        return Mod2Class(F, 2, _sort_places(forms.clifford_places(gw)))
    # I^n(Q) is 2^n Z through the signature for n >= 3
    return Mod2Class(F, n, (gw.signature() >> n) & 1)


def _sort_places(ps):
    return tuple(sorted(ps, key=lambda p: (p == forms.INFINITY, p if p != forms.INFINITY else 0)))


def parse_milnor(F, text: str) -> MilnorElem:
    """``{a,b,...}`` symbols joined by ``+``/``-`` with integer multiples, or an integer."""
    from .fields.parse import TokenStream, generator_names, parse_sum, tokenize

    ts = TokenStream(tokenize(text), text)
    names = generator_names(F)
    total = None
    while not ts.at_end():
        if total is None:
            sign = -1 if ts.accept("-") else 1
        elif ts.accept("+"):
            sign = 1
        else:
            ts.expect("-")
            sign = -1
        mult = 1
        kind, v = ts.peek()
        if kind == "num":
            ts.next()
            mult = int(v)
            if not ts.accept("*"):
                term = MilnorElem(F, 0, sign * mult)
                total = term if total is None else total + term
                continue
        ts.expect("{")
        entries = []
        if not ts.accept("}"):
            while True:
                entries.append(parse_sum(F, ts, names))
                if ts.accept("}"):
                    break
                ts.expect(",")
        term = (sign * mult) * km_symbol(F, entries)
        total = term if total is None else total + term
    if total is None:
        raise ValueError("empty Milnor literal")
    return total

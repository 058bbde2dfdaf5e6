"""Milnor-Witt K-theory of a field.

`MWElem` is the pullback pair model: a class of degree ``n`` is a Milnor
class together with a form class, agreeing in ``I^n / I^(n+1)``.

* ``n >= 1``: Milnor class in ``K^M_n``, form leg a rank zero class in ``I^n``;
* ``n = 0``: the Grothendieck-Witt class (its Milnor leg is the rank);
* ``n < 0``: a Witt class, Milnor leg zero.

Generators map as ``[a] -> ({a}, <a> - 1)`` and ``eta -> (0, 1 in W)``.

`MWExpr` is the free symbolic side: Z-combinations of words in the tokens
``eta``, ``[a]`` and ``<a>``.  `evaluate` sends a word to the model.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable

from . import forms, milnor
from .fields import FieldError, UnsupportedField
from .forms import GWClass
from .milnor import MilnorElem

MAX_DEGREE = 6


def _data(F, a):
    if isinstance(a, tuple):
        d = a
    else:
        d = F.coerce(a)
    if d == F.zero():
        raise FieldError("symbol entries must be nonzero")
    return d


class MWElem:
    """An element of ``K^MW_n(F)`` as a pullback pair."""

    __slots__ = ("field", "degree", "milnor", "form")

    def __init__(self, field, degree: int, milnor_leg: MilnorElem | None, form: GWClass):
        if abs(degree) > MAX_DEGREE:
            raise ValueError(f"degree {degree} exceeds the cap {MAX_DEGREE}")
        self.field = field
        self.degree = degree
        if degree == 0:
            milnor_leg = MilnorElem(field, 0, form.rank)
        elif degree < 0:
            milnor_leg = None
        self.milnor = milnor_leg
        self.form = form

    # -- constants ----------------------------------------------------------------
    @classmethod
    def zero(cls, F, degree: int) -> MWElem:
        m = MilnorElem.zero(F, degree) if degree > 0 else None
        return cls(F, degree, m, GWClass.zero(F))

    @classmethod
    def from_gw(cls, g: GWClass) -> MWElem:
        return cls(g.field, 0, None, g)

    @classmethod
    def integer(cls, F, n: int) -> MWElem:
        return cls.from_gw(GWClass.from_int(F, n))

    @classmethod
    def angle(cls, F, a) -> MWElem:
        """``<a> = 1 + eta[a]``."""
        return cls.from_gw(GWClass(F, [_data(F, a)]))

    @classmethod
    def eta(cls, F) -> MWElem:
        return cls(F, -1, None, GWClass.one(F))

    @classmethod
    def eps(cls, F) -> MWElem:
        """``eps = -<-1>``."""
        return cls.from_gw(-GWClass(F, [F.neg(F.one())]))

    @classmethod
    def hyperbolic_elem(cls, F) -> MWElem:
        """``h = 1 + <-1> = 2 + eta[-1]``."""
        return cls.from_gw(GWClass.hyperbolic(F))

    # -- ring structure ------------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, MWElem):
            raise TypeError("expected an MWElem")
        if other.field != self.field:
            raise FieldError("Milnor-Witt elements over different fields")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add elements of different degrees")
        m = self.milnor + other.milnor if self.degree > 0 else None
        return MWElem(self.field, self.degree, m, self.form + other.form)

    __radd__ = __add__

    def __neg__(self):
        m = -self.milnor if self.degree > 0 else None
        return MWElem(self.field, self.degree, m, -self.form)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        self._check(other)
        return mw_mul(self, other)

    def __rmul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        m = k * self.milnor if self.degree > 0 else None
        return MWElem(self.field, self.degree, m, self.form * k)

    # -- comparison -----------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, MWElem):
            return NotImplemented
        if other.field != self.field or other.degree != self.degree:
            return False
        if self.degree < 0:
            return forms.WittClass(self.form) == forms.WittClass(other.form)
        if self.degree == 0:
            return self.form == other.form
        return self.milnor == other.milnor and self.form == other.form

    def __hash__(self):
        if self.degree < 0:
            return hash((self.field, self.degree, hash(forms.WittClass(self.form))))
        return hash((self.field, self.degree, hash(self.form)))

    def is_zero(self) -> bool:
        return self == MWElem.zero(self.field, self.degree)

    def is_compatible(self) -> bool:
        """The Cartesian-square condition: both legs define the same class in ``I^n/I^(n+1)``."""
        n = self.degree
        if n < 0:
            return True
        if self.form.rank != 0 and n > 0:
            return False
        if forms.fundamental_ideal_level(self.form, forms.MAX_BOUND) < n:
            return False
        return milnor.milnor_mod2(self.milnor) == milnor.mod2_class_of_form(self.form, n)

    def __str__(self):
        if self.degree < 0:
            try:
                rep = forms.WittClass(self.form).representative()
            except UnsupportedField:
                return f"W[{self.form}]"
            if not rep.diagonal:
                return "0"
            k = -self.degree
            return ("eta" if k == 1 else f"eta^{k}") + str(rep)
        if self.degree == 0:
            return str(self.form)
        try:
            if self.is_zero():
                return "0"
            if self.degree == 1:
                return str(to_expr(self))
        except UnsupportedField:
            pass
        return f"({self.milnor}, {self.form})"

    def __repr__(self):
        return f"MWElem(deg {self.degree}: {self}, {self.field.label()})"


def mw_add(x: MWElem, y: MWElem) -> MWElem:
    return x + y


def mw_mul(x: MWElem, y: MWElem) -> MWElem:
    F = x.field
    n = x.degree + y.degree
    form = x.form * y.form
    if n > 0:
        if x.degree < 0 or y.degree < 0:
            # a multiple of eta forgets to zero
            m = MilnorElem.zero(F, n)
        else:
            m = milnor.product(x.milnor, y.milnor)
    else:
        m = None
    return MWElem(F, n, m, form)


def mw_symbol(F, entries: Iterable) -> MWElem:
    """``[a_1, ..., a_n]`` in the pullback model."""
    data = [_data(F, a) for a in entries]
    if not data:
        return MWElem.integer(F, 1)
    # prod (<a_i> - 1) = sum over subsets S of (-1)^(n-|S|) <prod_S a_i>
    pos, neg = [], []
    n = len(data)
    for mask in range(1 << n):
        c = F.one()
        for i in range(n):
            if mask >> i & 1:
                c = F.mul(c, data[i])
        (neg if (n - bin(mask).count("1")) % 2 else pos).append(c)
    form = GWClass(F, pos, neg)
    return MWElem(F, len(data), milnor.km_symbol(F, data), form)


def eta_mul(x: MWElem) -> MWElem:
    n = x.degree - 1
    m = MilnorElem.zero(x.field, n) if n > 0 else None
    return MWElem(x.field, n, m, x.form)


def forgetful(x: MWElem) -> MilnorElem:
    """The projection ``K^MW_n -> K^M_n`` (``n >= 0``)."""
    if x.degree < 0:
        raise ValueError("K^M vanishes in negative degrees")
    return x.milnor


def hyperbolic(y: MilnorElem) -> MWElem:
    """``H(y) = h * y``: Milnor leg ``2y``; the form leg vanishes in positive degree."""
    F = y.field
    if y.degree == 0:
        return MWElem.from_gw(GWClass.hyperbolic(F, y.data))
    return MWElem(F, y.degree, 2 * y, GWClass.zero(F))


# -- twists ---------------------------------------------------------------------------


class TwistedElem:
    """``x (x) g`` in ``K^MW_n(F, (i, L))`` for a line ``L`` with chosen generator ``g``.

    ``generator`` is a label (typically the printed uniformizer).  Changing
    generator to ``u*g`` multiplies the element by ``<u>``.
    """

    __slots__ = ("element", "grading", "generator")

    def __init__(self, element: MWElem, grading: int = 1, generator="1"):
        self.element = element
        self.grading = grading
        self.generator = generator

    @property
    def field(self):
        return self.element.field

    @property
    def degree(self):
        return self.element.degree

    def change_basis(self, u, new_generator) -> TwistedElem:
        """Re-express with respect to ``new_generator = u * generator``."""
        return twist_change_basis(self, u, new_generator)

    def swap(self, other: TwistedElem):
        """Sign acquired by the commutativity isomorphism of graded lines."""
        sign = -1 if (self.grading * other.grading) % 2 else 1
        return MWElem.angle(self.field, sign)

    def __add__(self, other: TwistedElem) -> TwistedElem:
        if other.generator != self.generator or other.grading != self.grading:
            raise ValueError("twisted elements need the same twist to be added")
        return TwistedElem(self.element + other.element, self.grading, self.generator)

    def __neg__(self):
        return TwistedElem(-self.element, self.grading, self.generator)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, TwistedElem):
            return NotImplemented
        return (
            self.grading == other.grading
            and self.generator == other.generator
            and self.element == other.element
        )

    def __hash__(self):
        return hash((self.grading, self.generator, self.element))

    def is_zero(self):
        return self.element.is_zero()

    def __str__(self):
        return f"{self.element} (x) {self.generator}"

    def __repr__(self):
        return f"TwistedElem({self})"


def twist_change_basis(t: TwistedElem, u, new_generator) -> TwistedElem:
    F = t.field
    u = _data(F, u)
    return TwistedElem(MWElem.angle(F, u) * t.element, t.grading, new_generator)


def twisted_product(x: TwistedElem, y: TwistedElem) -> TwistedElem:
    """``(x (x) g)(y (x) g') = xy (x) (g (x) g')``."""
    return TwistedElem(x.element * y.element, x.grading + y.grading, (x.generator, y.generator))


def swap_twisted_product(x: TwistedElem, y: TwistedElem) -> TwistedElem:
    """``xy (x) (g (x) g')`` rewritten with the factors of the line swapped."""
    prod = twisted_product(x, y)
    sign = x.swap(y)
    return TwistedElem(sign * prod.element, prod.grading, (y.generator, x.generator))


# -- symbolic expressions ----------------------------------------------------------------

ETA = ("eta",)


def sym(a):
    return ("sym", a)


def ang(a):
    return ("angle", a)


def word_degree(word) -> int:
    return sum(1 if tok[0] == "sym" else -1 if tok[0] == "eta" else 0 for tok in word)


class MWExpr:
    """A homogeneous Z-combination of words in ``eta``, ``[a]`` and ``<a>``."""

    __slots__ = ("field", "degree", "terms")

    def __init__(self, field, terms=(), degree: int | None = None):
        c = Counter()
        for word, coeff in (terms.items() if isinstance(terms, dict) else terms):
            c[tuple(word)] += coeff
        items = tuple(sorted(((w, k) for w, k in c.items() if k), key=lambda wk: repr(wk[0])))
        degrees = {word_degree(w) for w, _ in items}
        if len(degrees) > 1:
            raise ValueError("expression is not homogeneous")
        if degrees:
            d = degrees.pop()
            if degree is not None and degree != d:
                raise ValueError("expression degree mismatch")
            degree = d
        elif degree is None:
            degree = 0
        self.field = field
        self.degree = degree
        self.terms = items

    # constructors
    @classmethod
    def symbol(cls, F, entries: Iterable) -> MWExpr:
        return cls(F, [(tuple(sym(_data(F, a)) for a in entries), 1)])

    @classmethod
    def eta(cls, F) -> MWExpr:
        return cls(F, [((ETA,), 1)])

    @classmethod
    def angle(cls, F, a) -> MWExpr:
        return cls(F, [((ang(_data(F, a)),), 1)])

    @classmethod
    def integer(cls, F, n: int) -> MWExpr:
        return cls(F, [((), n)], degree=0)

    @classmethod
    def eps(cls, F) -> MWExpr:
        return -cls.angle(F, -1)

    @classmethod
    def h(cls, F) -> MWExpr:
        return cls.integer(F, 1) + cls.angle(F, -1)

    @classmethod
    def zero(cls, F, degree=0) -> MWExpr:
        return cls(F, (), degree=degree)

    @classmethod
    def from_words(cls, F, words) -> MWExpr:
        return cls(F, words)

    # arithmetic
    def _lift(self, other):
        if isinstance(other, MWExpr):
            if other.field != self.field:
                raise FieldError("expressions over different fields")
            return other
        if isinstance(other, int):
            return MWExpr.integer(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.terms:
            return other
        if not other.terms:
            return self
        return MWExpr(self.field, list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self):
        return MWExpr(self.field, [(w, -k) for w, k in self.terms], degree=self.degree)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return MWExpr(self.field, [(w, k * other) for w, k in self.terms], degree=self.degree)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms = [(w1 + w2, k1 * k2) for w1, k1 in self.terms for w2, k2 in other.terms]
        return MWExpr(self.field, terms, degree=self.degree + other.degree)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        out = MWExpr.integer(self.field, 1)
        for _ in range(n):
            out = out * self
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for word, k in self.terms:
            body = _fmt_word(F, word)
            if k == 1:
                parts.append(body)
            elif k == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{k}*{body}" if word else str(k))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"MWExpr({self}, {self.field.label()})"


def _fmt_word(F, word) -> str:
    pieces = []
    run = []
    for tok in word:
        if tok[0] == "sym":
            run.append(F.fmt(tok[1]))
            continue
        if run:
            pieces.append("[" + ",".join(run) + "]")
            run = []
        pieces.append(_fmt_token(F, tok))
    if run:
        pieces.append("[" + ",".join(run) + "]")
    return "*".join(pieces) or "1"


def _fmt_token(F, tok):
    if tok[0] == "eta":
        return "eta"
    text = F.fmt(tok[1])
    return f"[{text}]" if tok[0] == "sym" else f"<{text}>"


def token_value(F, tok) -> MWElem:
    if tok[0] == "eta":
        return MWElem.eta(F)
    if tok[0] == "sym":
        return mw_symbol(F, [tok[1]])
    return MWElem.angle(F, tok[1])


def evaluate_word(F, word) -> MWElem:
    """Left-to-right product of the token values of a word."""
    out = MWElem.integer(F, 1)
    run = []
    for tok in word:
        # consecutive symbols are built as one symbol, which is their product
        if tok[0] == "sym":
            run.append(tok[1])
            continue
        if run:
            out = out * mw_symbol(F, run)
            run = []
        out = out * token_value(F, tok)
    if run:
        out = out * mw_symbol(F, run)
    return out


def evaluate(e: MWExpr) -> MWElem:
    """Image of a symbolic expression in the pullback model."""
    F = e.field
    total = MWElem.zero(F, e.degree)
    for word, k in e.terms:
        total = total + k * evaluate_word(F, word)
    return total


def to_expr(x: MWElem) -> MWExpr:
    """A symbolic representative, for degrees where one is cheap to write down.

    Degree 0 gives the diagonal form; negative degrees give ``eta^k`` times
    it; degree 1 over a finite field or Q gives a signed sum of symbols.
    """
    F = x.field
    if x.degree <= 0:
        terms = [((ang(a),), 1) for a in x.form.pos.diagonal] + [((ang(a),), -1) for a in x.form.neg.diagonal]
        base = MWExpr(F, terms, degree=0)
        return MWExpr(F, [((ETA,) * (-x.degree), 1)], degree=x.degree) * base if x.degree else base
    if x.degree == 1 and F.form_kind in ("finite", "rational"):
        if x.is_zero():
            return MWExpr.zero(F, 1)
        # phi = sum (<p> - 1) - sum (<n> - 1); the Milnor leg fixes the last symbol
        pos, neg = x.form.pos.diagonal, x.form.neg.diagonal
        rest = x.milnor.data
        for a in pos:
            rest = F.div(rest, a)
        for a in neg:
            rest = F.mul(rest, a)
        one = F.one()
        terms = [((sym(a),), 1) for a in pos if a != one] + [((sym(a),), -1) for a in neg if a != one]
        if rest != F.one():
            terms.append(((sym(rest),), 1))
        e = MWExpr(F, terms, degree=1)
        if evaluate(e) == x:
            return e
    if x.is_zero():
        return MWExpr.zero(F, x.degree)
    raise UnsupportedField("no symbolic representative implemented for this element")


# -- parsing ---------------------------------------------------------------------------


def parse_expr(F, text: str) -> MWExpr:
    """Grammar: sums and products of ``[a,b,...]``, ``eta``, ``<a>``, ``eps``, ``h``,
    integers, parentheses and ``^n`` powers."""
    from .fields.parse import TokenStream, generator_names, tokenize

    ts = TokenStream(tokenize(text), text)
    names = generator_names(F)
    e = _p_sum(F, ts, names)
    if not ts.at_end():
        raise ValueError(f"trailing input in {text!r}")
    return e


def _p_sum(F, ts, names):
    neg = ts.accept("-")
    acc = _p_prod(F, ts, names)
    if neg:
        acc = -acc
    while True:
        if ts.accept("+"):
            acc = acc + _p_prod(F, ts, names)
        elif ts.accept("-"):
            acc = acc - _p_prod(F, ts, names)
        else:
            return acc


def _p_prod(F, ts, names):
    acc = _p_pow(F, ts, names)
    while True:
        kind, v = ts.peek()
        if ts.accept("*"):
            acc = acc * _p_pow(F, ts, names)
        elif (kind == "op" and v in "[<(") or (kind in ("name", "num")):
            acc = acc * _p_pow(F, ts, names)
        else:
            return acc


def _p_pow(F, ts, names):
    base = _p_atom(F, ts, names)
    if ts.accept("^"):
        kind, v = ts.next()
        if kind != "num":
            raise ValueError("exponent must be a nonnegative integer")
        return base ** int(v)
    return base


def _p_entry(F, ts, names):
    from .fields.parse import parse_sum

    return parse_sum(F, ts, names)


def _p_atom(F, ts, names):
    kind, v = ts.next()
    if kind == "num":
        return MWExpr.integer(F, int(v))
    if kind == "name":
        if v == "eta":
            return MWExpr.eta(F)
        if v == "eps":
            return MWExpr.eps(F)
        if v == "h":
            return MWExpr.h(F)
        raise ValueError(f"unknown name {v!r} in expression")
    if v == "(":
        e = _p_sum(F, ts, names)
        ts.expect(")")
        return e
    if v == "[":
        entries = []
        if not ts.accept("]"):
            while True:
                entries.append(_p_entry(F, ts, names))
                if ts.accept("]"):
                    break
                ts.expect(",")
        return MWExpr.symbol(F, entries)
    if v == "<":
        entries = []
        while True:
            entries.append(_p_entry_angle(F, ts, names))
            if ts.accept(">"):
                break
            ts.expect(",")
        out = MWExpr.zero(F, 0)
        for a in entries:
            out = out + MWExpr.angle(F, a)
        return out
    raise ValueError(f"unexpected {v!r}")


def _p_entry_angle(F, ts, names):
    from .fields.parse import parse_sum

    return parse_sum(F, ts, names)

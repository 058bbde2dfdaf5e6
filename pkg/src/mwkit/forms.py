"""Symmetric bilinear forms, Grothendieck-Witt and Witt classes.

Forms are diagonal.  Isometry is decided by classical invariants:

* finite fields: rank and determinant square class;
* Q: rank, signature, determinant and the Hasse invariants
  ``prod_{i<j} (a_i, a_j)_p`` at ``p = 2`` and the primes dividing entries;
* the formal reals: rank and signature.

The signed discriminant of a rank ``n`` form is ``(-1)^(n(n-1)/2) det``.
"""

from __future__ import annotations

import functools
import math
from collections import Counter
from fractions import Fraction
from typing import Iterable, Sequence

from .fields import FieldElem, FieldError, SimpleExtension, UnsupportedField
from .fields import linalg

INFINITY = "inf"
MAX_BOUND = 6


# -- square classes --------------------------------------------------------------


@functools.lru_cache(maxsize=65536)
def _squarefree_int(n: int) -> int:
    """Signed square-free part of a nonzero integer."""
    from sympy import factorint

    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


@functools.lru_cache(maxsize=65536)
def squarefree_rational(q: Fraction) -> int:
    q = Fraction(q)
    if q == 0:
        raise FieldError("zero has no square class")
    return _squarefree_int(q.numerator * q.denominator)


def square_class_rep(F, a):
    """Canonical representative data of the square class of ``a``."""
    kind = F.form_kind
    if kind in ("finite", "rational"):
        return _cached_rep(F, a)
    if kind == "real":
        return Fraction(1 if a > 0 else -1)
    if a == F.zero():
        raise FieldError("zero has no square class")
    return a


@functools.lru_cache(maxsize=1 << 16)
def _cached_rep(F, a):
    if a == F.zero():
        raise FieldError("zero has no square class")
    if F.form_kind == "finite":
        return F.one() if F.is_square_data(a) else F.nonsquare.data
    return Fraction(squarefree_rational(a))


def _entry_key(F, a):
    if F.form_kind == "finite":
        return (0, repr(a))
    if F.form_kind in ("rational", "real"):
        return (abs(a), a < 0)
    return (1, repr(a))


def _require_decidable(F):
    if F.form_kind not in ("finite", "rational", "real"):
        raise UnsupportedField(f"form isometry is not decidable over {F.label()}")


# -- Hilbert symbols over Q --------------------------------------------------------


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


@functools.lru_cache(maxsize=65536)
def hilbert_symbol(a, b, p) -> int:
    """Hilbert symbol ``(a, b)_p`` for nonzero rationals; ``p = "inf"`` is the real place."""
    a = squarefree_rational(Fraction(a))
    b = squarefree_rational(Fraction(b))
    if p == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split_p(a, p)
    beta, v = _split_p(b, p)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    e = (alpha * beta * ((p - 1) // 2)) % 2
    sign = -1 if e else 1
    if beta % 2:
        sign *= _legendre(u, p)
    if alpha % 2:
        sign *= _legendre(v, p)
    return sign


def _split_p(n: int, p: int):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


@functools.lru_cache(maxsize=65536)
def _prime_divisors(n: int):
    from sympy import primefactors

    return tuple(primefactors(abs(n)))


def relevant_primes(entries: Iterable[Fraction]):
    """2 together with every prime dividing a square-free entry."""
    primes = {2}
    for a in entries:
        primes.update(_prime_divisors(squarefree_rational(a)))
    return sorted(primes)


def hasse_invariant(entries: Sequence[Fraction], p) -> int:
    s = 1
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            s *= hilbert_symbol(entries[i], entries[j], p)
    return s


# -- forms ---------------------------------------------------------------------------


class BilinearForm:
    """The diagonal form ``<a_1, ..., a_n>`` (entries stored as field data)."""

    __slots__ = ("field", "diagonal")

    def __init__(self, field, diagonal: Iterable = ()):
        self.field = field
        entries = []
        for a in diagonal:
            d = _data(field, a)
            if d == field.zero():
                raise FieldError("diagonal entries must be nonzero")
            entries.append(d)
        self.diagonal = tuple(entries)

    @classmethod
    def from_gram(cls, field, gram):
        """Diagonalize a symmetric Gram matrix (data entries); the radical is discarded."""
        return cls(field, linalg.diagonalize_symmetric(field, gram))

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def entries(self):
        return [FieldElem(self.field, a) for a in self.diagonal]

    def __add__(self, other: BilinearForm) -> BilinearForm:
        _same_field(self.field, other.field)
        return BilinearForm(self.field, self.diagonal + other.diagonal)

    def __mul__(self, other: BilinearForm) -> BilinearForm:
        _same_field(self.field, other.field)
        F = self.field
        return BilinearForm(F, [F.mul(a, b) for a in self.diagonal for b in other.diagonal])

    def scaled(self, c) -> BilinearForm:
        F = self.field
        c = F.coerce(c)
        return BilinearForm(F, [F.mul(c, a) for a in self.diagonal])

    def determinant(self):
        F = self.field
        d = F.one()
        for a in self.diagonal:
            d = F.mul(d, a)
        return d

    def signed_discriminant(self):
        F = self.field
        n = self.rank
        d = self.determinant()
        return F.neg(d) if (n * (n - 1) // 2) % 2 else d

    def signature(self) -> int:
        if self.field.form_kind not in ("rational", "real"):
            raise UnsupportedField("signature needs an ordered field")
        return sum(1 if a > 0 else -1 for a in self.diagonal)

    def canonical(self) -> BilinearForm:
        F = self.field
        reps = [square_class_rep(F, a) for a in self.diagonal]
        return BilinearForm(F, sorted(reps, key=lambda a: _entry_key(F, a)))

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and self.field == other.field and decide_iso(self, other)

    def __hash__(self):
        return hash((self.field, self.rank))

    def __str__(self):
        return "<" + ",".join(self.field.fmt(a) for a in self.diagonal) + ">"

    def __repr__(self):
        return f"BilinearForm({self}, {self.field.label()})"


def _same_field(F, G):
    if F != G:
        raise FieldError(f"field mismatch: {F.label()} vs {G.label()}")


def decide_iso(phi: BilinearForm, psi: BilinearForm) -> bool:
    """Whether two diagonal forms over the same field are isometric."""
    _same_field(phi.field, psi.field)
    F = phi.field
    _require_decidable(F)
    if phi.rank != psi.rank:
        return False
    if phi.rank == 0:
        return True
    kind = F.form_kind
    if kind == "finite":
        return F.is_square_data(F.div(phi.determinant(), psi.determinant()))
    if phi.signature() != psi.signature():
        return False
    if kind == "real":
        return True
    a = [square_class_rep(F, x) for x in phi.diagonal]
    b = [square_class_rep(F, x) for x in psi.diagonal]
    if squarefree_rational(math.prod(a)) != squarefree_rational(math.prod(b)):
        return False
    for p in relevant_primes(a + b):
        if hasse_invariant(a, p) != hasse_invariant(b, p):
            return False
    return True


# -- Grothendieck-Witt classes -------------------------------------------------------


class GWClass:
    """A virtual form ``pos - neg``; entries are kept as canonical square-class reps."""

    __slots__ = ("field", "pos", "neg")

    def __init__(self, field, pos: Iterable = (), neg: Iterable = ()):
        self.field = field
        p = Counter(square_class_rep(field, _data(field, a)) for a in pos)
        n = Counter(square_class_rep(field, _data(field, a)) for a in neg)
        if field.form_kind == "rational":
            p, n = _split_hyperbolic(field, p), _split_hyperbolic(field, n)
        common = p & n
        p -= common
        n -= common
        key = lambda a: _entry_key(field, a)
        pos_entries = sorted(p.elements(), key=key)
        neg_entries = sorted(n.elements(), key=key)
        if field.form_kind == "finite":
            pos_entries, neg_entries = _finite_normal_form(field, pos_entries, neg_entries)
        self.pos = BilinearForm(field, pos_entries)
        self.neg = BilinearForm(field, neg_entries)

    # constructors
    @classmethod
    def one(cls, field):
        return cls(field, [field.one()])

    @classmethod
    def zero(cls, field):
        return cls(field)

    @classmethod
    def diag(cls, field, *entries):
        return cls(field, entries)

    @classmethod
    def pfister(cls, field, a):
        """The class ``<a> - 1``."""
        return cls(field, [a], [field.one()])

    @classmethod
    def hyperbolic(cls, field, m: int = 1):
        one, minus = field.one(), field.neg(field.one())
        if m >= 0:
            return cls(field, [one, minus] * m)
        return cls(field, [], [one, minus] * (-m))

    @classmethod
    def from_int(cls, field, n: int):
        one = field.one()
        return cls(field, [one] * n) if n >= 0 else cls(field, [], [one] * (-n))

    @classmethod
    def from_form(cls, form: BilinearForm):
        return cls(form.field, form.diagonal)

    # invariants
    @property
    def rank(self) -> int:
        return self.pos.rank - self.neg.rank

    def determinant(self):
        F = self.field
        return F.div(self.pos.determinant(), self.neg.determinant())

    def signed_discriminant(self):
        F = self.field
        n = self.rank
        d = self.determinant()
        return F.neg(d) if (n * (n - 1) // 2) % 2 else d

    def signature(self) -> int:
        return self.pos.signature() - self.neg.signature()

    def witt_form(self) -> BilinearForm:
        """An honest form with the same Witt class: ``pos + (-1) * neg``."""
        F = self.field
        return BilinearForm(F, self.pos.diagonal + tuple(F.neg(a) for a in self.neg.diagonal))

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, GWClass):
            _same_field(self.field, other.field)
            return other
        if isinstance(other, int):
            return GWClass.from_int(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GWClass(
            self.field, self.pos.diagonal + other.pos.diagonal, self.neg.diagonal + other.neg.diagonal
        )

    __radd__ = __add__

    def __neg__(self):
        return GWClass(self.field, self.neg.diagonal, self.pos.diagonal)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other < 0:
                return -(self * (-other))
            return GWClass(self.field, self.pos.diagonal * other, self.neg.diagonal * other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        prod = lambda xs, ys: [F.mul(a, b) for a in xs for b in ys]
        P, N = self.pos.diagonal, self.neg.diagonal
        P2, N2 = other.pos.diagonal, other.neg.diagonal
        return GWClass(F, prod(P, P2) + prod(N, N2), prod(P, N2) + prod(N, P2))

    __rmul__ = __mul__

    def scaled(self, c) -> GWClass:
        """Multiplication by ``<c>``."""
        F = self.field
        c = _data(F, c)
        return GWClass(F, [F.mul(c, a) for a in self.pos.diagonal], [F.mul(c, a) for a in self.neg.diagonal])

    def __pow__(self, n: int):
        out = GWClass.one(self.field)
        for _ in range(n):
            out = out * self
        return out

    # equality
    def __eq__(self, other):
        if isinstance(other, int):
            other = GWClass.from_int(self.field, other)
        if not isinstance(other, GWClass) or other.field != self.field:
            return NotImplemented if not isinstance(other, GWClass) else False
        return decide_iso(self.pos + other.neg, other.pos + self.neg)

    def __hash__(self):
        return hash(_coarse_invariants(self))

    def is_zero(self) -> bool:
        return self == 0

    def witt_zero(self) -> bool:
        """Whether the class dies in the Witt ring."""
        r = self.rank
        if r % 2:
            return False
        return self == GWClass.hyperbolic(self.field, r // 2)

    def __str__(self):
        if not self.neg.rank:
            return str(self.pos) if self.pos.rank else "0"
        if not self.pos.rank:
            return "-" + str(self.neg)
        return f"{self.pos} - {self.neg}"

    def __repr__(self):
        return f"GWClass({self}, {self.field.label()})"


def _data(F, a):
    """Field data from an element, literal, or data already in canonical form."""
    if isinstance(a, tuple):
        return a
    return F.coerce(a)


def _split_hyperbolic(F, c: Counter) -> Counter:
    """Rewrite each pair ``<a,-a>`` as ``<1,-1>`` so hyperbolic planes cancel."""
    out = Counter()
    one, minus = F.one(), F.neg(F.one())
    for a in sorted(c, key=lambda a: _entry_key(F, a)):
        b = F.neg(a)
        if a in (one, minus) or b not in c:
            out[a] += c[a]
            continue
        if _entry_key(F, a) > _entry_key(F, b):
            continue
        k = min(c[a], c[b])
        out[a] += c[a] - k
        out[b] += c[b] - k
        out[one] += k
        out[minus] += k
    return Counter({a: m for a, m in out.items() if m > 0})


def _finite_normal_form(F, pos, neg):
    """``r<1> `` or ``<u> + (r-1)<1>`` with the rank carried by copies of 1."""
    one = F.one()
    rank = len(pos) - len(neg)
    nonsq = (sum(1 for a in pos if a != one) + sum(1 for a in neg if a != one)) % 2
    if not nonsq:
        return ([one] * rank, []) if rank >= 0 else ([], [one] * (-rank))
    u = F.nonsquare.data
    if rank >= 1:
        return [one] * (rank - 1) + [u], []
    return [u], [one] * (1 - rank)


def _coarse_invariants(x: GWClass):
    F = x.field
    kind = F.form_kind
    if kind == "finite":
        return (F, x.rank, F.is_square_data(x.determinant()))
    if kind == "real":
        return (F, x.rank, x.signature())
    if kind == "rational":
        return (F, x.rank, x.signature(), squarefree_rational(x.determinant()))
    return (F, x.rank)


class WittClass:
    """A Grothendieck-Witt class viewed modulo hyperbolic forms."""

    __slots__ = ("gw",)

    def __init__(self, gw: GWClass):
        self.gw = gw

    @property
    def field(self):
        return self.gw.field

    def __add__(self, other):
        return WittClass(self.gw + _gw(other))

    def __sub__(self, other):
        return WittClass(self.gw - _gw(other))

    def __mul__(self, other):
        return WittClass(self.gw * _gw(other))

    def __neg__(self):
        return WittClass(-self.gw)

    def __eq__(self, other):
        if not isinstance(other, (WittClass, GWClass, int)):
            return NotImplemented
        return (self.gw - _gw(other, self.field)).witt_zero()

    def __hash__(self):
        F = self.field
        if F.form_kind == "finite":
            return hash((F, self.gw.rank % 2, F.is_square_data(self.gw.signed_discriminant())))
        if F.form_kind in ("rational", "real"):
            return hash((F, self.gw.signature()))
        return hash(F)

    def is_zero(self):
        return self.gw.witt_zero()

    def representative(self) -> BilinearForm:
        """A small diagonal form in the class: anisotropic over finite fields and R."""
        F = self.field
        g = self.gw
        kind = F.form_kind
        if kind == "finite":
            sd = g.signed_discriminant()
            if g.rank % 2:
                k = (g.rank - 1) // 2
                return BilinearForm(F, [square_class_rep(F, F.mul(F.pow(F.neg(F.one()), k), g.determinant()))])
            if F.is_square_data(sd):
                return BilinearForm(F, [])
            return BilinearForm(F, [F.one(), square_class_rep(F, F.neg(sd))])
        if kind == "real":
            n = g.signature()
            return BilinearForm(F, [Fraction(1 if n > 0 else -1)] * abs(n))
        entries = list(g.pos.diagonal) + [F.neg(a) for a in g.neg.diagonal]
        if kind == "rational":
            entries = [square_class_rep(F, a) for a in entries]
            c = Counter(entries)
            for a in list(c):
                b = F.neg(a)
                if b in c and _entry_key(F, a) < _entry_key(F, b):
                    k = min(c[a], c[b])
                    c[a] -= k
                    c[b] -= k
            entries = sorted(c.elements(), key=lambda a: _entry_key(F, a))
        return BilinearForm(F, entries)

    def __str__(self):
        try:
            return f"W{self.representative()}"
        except UnsupportedField:
            return f"W[{self.gw}]"

    def __repr__(self):
        return f"WittClass({self.gw}, {self.field.label()})"


def _gw(x, field=None):
    if isinstance(x, WittClass):
        return x.gw
    if isinstance(x, int):
        return GWClass.from_int(field, x)
    return x


# -- filtration by powers of the fundamental ideal ---------------------------------


def disc_class_trivial(x: GWClass) -> bool:
    """Signed discriminant is a square (the degree one invariant of an even class)."""
    F = x.field
    return F.is_square_data(x.witt_form().signed_discriminant())


def clifford_places(x: GWClass) -> list:
    """Places of Q where the degree two invariant of an ``I^2`` class is nontrivial.

    For a form of rank ``2m`` with trivial signed discriminant the local
    invariant at ``p`` is the ratio of its Hasse invariant to that of ``m``
    hyperbolic planes.
    """
    F = x.field
    if F.form_kind == "real":
        phi = x.witt_form()
        m = phi.rank // 2
        h = [Fraction(1), Fraction(-1)] * m
        return [INFINITY] if hasse_invariant(list(phi.diagonal), INFINITY) != hasse_invariant(h, INFINITY) else []
    phi = x.witt_form()
    entries = [square_class_rep(F, a) for a in phi.diagonal]
    m = len(entries) // 2
    h = [Fraction(1), Fraction(-1)] * m
    out = []
    for p in relevant_primes(entries) + [INFINITY]:
        if hasse_invariant(entries, p) != hasse_invariant(h, p):
            out.append(p)
    return out


def fundamental_ideal_level(x, bound: int = MAX_BOUND) -> int:
    """Largest ``n`` with the Witt class of ``x`` in ``I^n``, capped at ``bound``."""
    if bound > MAX_BOUND or bound < 0:
        raise ValueError(f"bound must lie in 0..{MAX_BOUND}")
    gw = x.gw if isinstance(x, WittClass) else x
    F = gw.field
    _require_decidable(F)
    if gw.witt_zero():
        return bound
    if gw.rank % 2:
        return 0
    if F.form_kind == "finite":
        # I^2 vanishes over a finite field
        return min(1, bound)
    if F.form_kind == "real":
        return min(_two_adic(gw.signature()), bound)
    if not disc_class_trivial(gw):
        return min(1, bound)
    if clifford_places(gw):
        return min(2, bound)
    # I^3(Q) embeds in I^3(R) = 8Z via the signature
    return min(_two_adic(gw.signature()), bound)


def _two_adic(n: int) -> int:
    if n == 0:
        return MAX_BOUND
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    return k


# -- transfers ---------------------------------------------------------------------


def scharlau_transfer(K, functional: Sequence, phi, base=None) -> GWClass:
    """Transfer along an F-linear functional ``s: K -> F`` given on the power basis.

    ``phi`` is a `BilinearForm` or `GWClass` over ``K``; ``K`` is a
    `SimpleExtension` of ``F`` or ``F`` itself (then ``functional`` has one value).
    """
    if base is None:
        base = K.base if isinstance(K, SimpleExtension) else K
    F = base
    degree = 1 if K == F else K.degree
    s = [_data(F, c) for c in functional]
    if len(s) != degree:
        raise ValueError("functional needs one value per basis element")
    if all(c == F.zero() for c in s):
        raise ValueError("the functional is identically zero")
    if isinstance(phi, BilinearForm):
        phi = GWClass(K, phi.diagonal)
    return GWClass(F, _transfer_entries(K, F, s, phi.pos.diagonal), _transfer_entries(K, F, s, phi.neg.diagonal))


def _transfer_entries(K, F, s, entries):
    out = []
    if K == F:
        for c in entries:
            out.append(F.mul(s[0], c))
        return out
    d = K.degree
    powers = [K.one()]
    x = K.gen()
    for _ in range(2 * d - 2):
        powers.append(K.mul(powers[-1], x))
    for c in entries:
        vals = []
        for k in range(2 * d - 1):
            z = K.mul(c, powers[k])
            acc = F.zero()
            for coord, sv in zip(z, s):
                acc = F.add(acc, F.mul(coord, sv))
            vals.append(acc)
        gram = [[vals[i + j] for j in range(d)] for i in range(d)]
        diag = linalg.diagonalize_symmetric(F, gram)
        if len(diag) != d:
            raise FieldError("transfer form is degenerate")
        out.extend(diag)
    return out


def trace_functional(K) -> list:
    """Values ``Tr(x^i)`` of the trace on the power basis."""
    if not isinstance(K, SimpleExtension):
        return [K.one()]
    out = []
    z = K.one()
    x = K.gen()
    for _ in range(K.degree):
        out.append(K.trace_data(z))
        z = K.mul(z, x)
    return out


def top_coefficient_functional(K) -> list:
    """The functional sending ``x^(d-1)`` to 1 and lower powers to 0."""
    if not isinstance(K, SimpleExtension):
        return [K.one()]
    F = K.base
    return [F.zero()] * (K.degree - 1) + [F.one()]


def trace_form(K) -> GWClass:
    if isinstance(K, SimpleExtension) and K.characteristic and _inseparable(K):
        raise FieldError("inseparable extension")
    return scharlau_transfer(K, trace_functional(K), GWClass.one(K))


def _inseparable(K):
    from .fields import poly as P

    return not P.derivative(K.base, K.modulus)


def trace_transfer(K, phi) -> GWClass:
    return scharlau_transfer(K, trace_functional(K), phi)


def finite_trace_transfer(K, phi: GWClass) -> GWClass:
    """Trace transfer over a finite simple extension via its closed form.

    ``Tr<c>`` has rank ``m = [K:F]`` and determinant nontrivial exactly when
    ``c`` is a nonsquare in ``K`` or ``m`` is even (but not both).
    """
    F = K.base
    m = K.degree
    one = F.one()
    u = F.nonsquare.data

    def image(c):
        flag = (not K.is_square_data(c)) ^ (m % 2 == 0)
        return [one] * (m - 1) + [u if flag else one]

    pos = [e for c in phi.pos.diagonal for e in image(c)]
    neg = [e for c in phi.neg.diagonal for e in image(c)]
    return GWClass(F, pos, neg)


def parse_form(F, text: str) -> GWClass:
    """``<a,b,...>`` literals joined by ``+`` and ``-``, with optional integer multiples."""
    from .fields.parse import TokenStream, parse_sum, tokenize, generator_names

    ts = TokenStream(tokenize(text), text)
    names = generator_names(F)
    total = GWClass.zero(F)
    sign = 1
    first = True
    while not ts.at_end():
        if ts.accept("+"):
            sign = 1
        elif ts.accept("-"):
            sign = -1
        elif not first:
            raise ValueError(f"expected + or - in {text!r}")
        mult = 1
        kind, v = ts.peek()
        if kind == "num":
            ts.next()
            mult = int(v)
            if mult == 0 and not ts.peek()[0]:
                break
            ts.accept("*")
        ts.expect("<")
        entries = []
        if not ts.accept(">"):
            while True:
                entries.append(_parse_entry(F, ts, names))
                if ts.accept(">"):
                    break
                ts.expect(",")
        total = total + GWClass(F, entries) * (sign * mult)
        first = False
        sign = 1
    return total


def _parse_entry(F, ts, names):
    from .fields.parse import parse_sum

    return parse_sum(F, ts, names)

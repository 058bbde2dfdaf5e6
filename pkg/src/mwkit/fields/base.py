"""Exact ground fields: F_p, F_q towers, Q, a formal copy of R, and F(t).

Each `Field` implements arithmetic on its own canonical *data* (an int for
F_p, a `Fraction` for Q, a coefficient tuple for a simple extension, a
``(numerator, denominator)`` pair for F(t)).  Canonical data means equality
of elements is equality of data.  `FieldElem` wraps ``(field, data)`` with
operator overloading for code that is not performance critical.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from fractions import Fraction

from . import poly as P


class FieldError(ValueError):
    """Raised for ill-formed field constructions or unsupported operations."""


class UnsupportedField(FieldError):
    """The requested decision is not available over this field."""


class Field:
    characteristic = 0
    is_finite = False
    order: int | None = None
    #: which decision backend the forms layer uses: "finite", "rational", "real" or None
    form_kind: str | None = None

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return self is other or (isinstance(other, Field) and self._key() == other._key())

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = self.__dict__["_hash"] = hash(self._key())
        return h

    def __repr__(self):
        return self.label()

    # -- data level ---------------------------------------------------------
    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one()
        while n:
            if n & 1:
                result = self.mul(result, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return result

    def is_square_data(self, a) -> bool:
        raise UnsupportedField(f"squareness is not decidable over {self.label()}")

    def fmt(self, a) -> str:
        raise NotImplementedError

    def random_data(self, rng: random.Random, nonzero: bool = False):
        raise NotImplementedError

    def elements_data(self):
        raise FieldError(f"{self.label()} is not finite")

    def label(self) -> str:
        raise NotImplementedError

    # -- element level ------------------------------------------------------
    def __call__(self, value) -> FieldElem:
        return FieldElem(self, self.coerce(value))

    def coerce(self, value):
        if isinstance(value, FieldElem):
            if value.field == self:
                return value.data
            return self.coerce_from(value)
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_fraction(value)
        if isinstance(value, str):
            from .parse import parse_element

            return parse_element(self, value).data
        raise TypeError(f"cannot coerce {value!r} into {self.label()}")

    def coerce_from(self, elem: FieldElem):
        raise TypeError(f"no coercion from {elem.field.label()} to {self.label()}")

    def from_fraction(self, q: Fraction):
        return self.div(self.from_int(q.numerator), self.from_int(q.denominator))

    def elem(self, data) -> FieldElem:
        return FieldElem(self, data)

    def random(self, rng: random.Random, nonzero: bool = False) -> FieldElem:
        return FieldElem(self, self.random_data(rng, nonzero))

    def elements(self):
        return (FieldElem(self, d) for d in self.elements_data())

    def nonzero_elements(self):
        z = self.zero()
        return (FieldElem(self, d) for d in self.elements_data() if d != z)

    def degree_over_prime(self) -> int:
        return 1

    def prime_field(self) -> Field:
        return self

    @property
    def size(self) -> int:
        """Number of elements of a finite field."""
        if not getattr(self, "is_finite", False):
            raise FieldError(f"{self.label()} is not finite")
        return self.characteristic ** self.degree_over_prime()

    @functools.cached_property
    def nonsquare(self) -> FieldElem:
        """Least nonsquare in the canonical enumeration (finite fields only)."""
        for a in self.nonzero_elements():
            if not a.is_square():
                return a
        raise FieldError("no nonsquare found")


class PrimeField(Field):
    is_finite = True
    form_kind = "finite"

    def __init__(self, p: int):
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        if p < 3 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise FieldError(f"{p} is not an odd prime")
        self.p = p
        self.characteristic = p
        self.order = p

    def _key(self):
        return ("GF", self.p)

    def label(self):
        return f"GF({self.p})"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return -a % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in " + self.label())
        return pow(a, -1, self.p)

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        return pow(a, n, self.p)

    def is_square_data(self, a):
        if a == 0:
            raise FieldError("zero has no square class")
        return pow(a, (self.p - 1) // 2, self.p) == 1

    def fmt(self, a):
        return str(a)

    def random_data(self, rng, nonzero=False):
        return rng.randrange(1 if nonzero else 0, self.p)

    def elements_data(self):
        return range(self.p)


class RationalField(Field):
    form_kind = "rational"

    def _key(self):
        return ("QQ",)

    def label(self):
        return "QQ"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return a / b

    def pow(self, a, n):
        return a**n

    def is_square_data(self, a):
        if a == 0:
            raise FieldError("zero has no square class")
        if a < 0:
            return False
        return _is_square_int(a.numerator) and _is_square_int(a.denominator)

    def fmt(self, a):
        return str(a)

    def random_data(self, rng, nonzero=False, height=10):
        while True:
            num = rng.randint(-height, height)
            den = rng.randint(1, height)
            if num or not nonzero:
                return Fraction(num, den)

    def coerce_from(self, elem):
        if isinstance(elem.field, RationalField):
            return elem.data
        return super().coerce_from(elem)


class RealsFormal(RationalField):
    """Q with the ordering of R: only the sign of an entry matters for squareness.

    Used to read off signatures of forms defined over Q.
    """

    form_kind = "real"

    def _key(self):
        return ("RR",)

    def label(self):
        return "RR"

    def is_square_data(self, a):
        if a == 0:
            raise FieldError("zero has no square class")
        return a > 0


def _is_square_int(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


class SimpleExtension(Field):
    """``base[x]/(modulus)`` for a monic irreducible ``modulus`` over ``base``.

    Elements are coefficient tuples of length ``deg(modulus)`` in the power
    basis ``1, x, ..., x^(d-1)``.  Over a finite base this is a finite field
    (possibly a tower); over Q it is a number field, where only arithmetic
    is offered (no square-class decisions).
    """

    def __init__(self, base: Field, modulus, name: str = "x", label: str | None = None):
        modulus = P.strip(base, modulus)
        if len(modulus) < 2:
            raise FieldError("modulus must have positive degree")
        if not P.is_monic(base, modulus):
            raise FieldError("modulus must be monic")
        self.base = base
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self.name = name
        self._label = label
        self.characteristic = base.characteristic
        self.is_finite = base.is_finite
        if self.is_finite:
            self.order = base.order**self.degree
            self.form_kind = "finite"
        self._zero = (base.zero(),) * self.degree
        self._one = (base.one(),) + (base.zero(),) * (self.degree - 1)

    def _key(self):
        return ("ext", self.base._key(), self.modulus)

    def label(self):
        if self._label:
            return self._label
        return f"{self.base.label()}[{self.name}]/({P.fmt(self.base, self.modulus, self.name)})"

    def degree_over_prime(self):
        return self.degree * self.base.degree_over_prime()

    def prime_field(self):
        return self.base.prime_field()

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def gen(self):
        return self.from_poly(P.x(self.base))

    def from_int(self, n):
        return self.embed_base(self.base.from_int(n))

    def embed_base(self, c):
        return (c,) + (self.base.zero(),) * (self.degree - 1)

    def from_poly(self, f):
        r = P.rem(self.base, f, self.modulus)
        return tuple(r) + (self.base.zero(),) * (self.degree - len(r))

    def to_poly(self, a):
        return P.strip(self.base, a)

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        B = self.base
        return tuple(B.neg(x) for x in a)

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        B = self.base
        return self.from_poly(P.mul(B, P.strip(B, a), P.strip(B, b)))

    def inv(self, a):
        B = self.base
        f = P.strip(B, a)
        if not f:
            raise ZeroDivisionError("division by zero in " + self.label())
        d, s, _ = P.xgcd(B, f, self.modulus)
        if len(d) != 1:
            raise FieldError("modulus is not irreducible")
        return self.from_poly(s)

    def is_square_data(self, a):
        if not self.is_finite:
            raise UnsupportedField(f"squareness is not decidable over {self.label()}")
        if a == self._zero:
            raise FieldError("zero has no square class")
        return self.pow(a, (self.order - 1) // 2) == self._one

    def fmt(self, a):
        return P.fmt(self.base, P.strip(self.base, a), self.name)

    def random_data(self, rng, nonzero=False):
        while True:
            a = tuple(self.base.random_data(rng) for _ in range(self.degree))
            if not nonzero or a != self._zero:
                return a

    def elements_data(self):
        if not self.is_finite:
            raise FieldError(f"{self.label()} is not finite")
        return itertools.product(*[list(self.base.elements_data())] * self.degree)

    def coerce_from(self, elem):
        if elem.field == self.base:
            return self.embed_base(elem.data)
        return self.embed_base(self.base.coerce(elem))

    def trace_data(self, a):
        """Trace down to ``base``: the trace of multiplication by ``a``."""
        B = self.base
        total = B.zero()
        basis_elem = self._one
        x = self.gen()
        for i in range(self.degree):
            col = self.mul(a, basis_elem)
            total = B.add(total, col[i])
            basis_elem = self.mul(basis_elem, x)
        return total

    def norm_data(self, a):
        """Norm down to ``base``: determinant of multiplication by ``a``."""
        from .linalg import det

        B = self.base
        x = self.gen()
        cols = []
        basis_elem = self._one
        for _ in range(self.degree):
            cols.append(self.mul(a, basis_elem))
            basis_elem = self.mul(basis_elem, x)
        matrix = [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]
        return det(B, matrix)


class FunctionField(Field):
    """Rational function field ``base(t)`` over F_q (any tower) or Q."""

    def __init__(self, base: Field, var: str = "t"):
        if isinstance(base, FunctionField):
            raise FieldError("only one transcendence level is supported")
        if base.form_kind not in ("finite", "rational") or isinstance(base, RealsFormal):
            raise FieldError("function fields need a finite or rational base")
        self.base = base
        self.var = var
        self.characteristic = base.characteristic
        B = base
        self._zero = ((), (B.one(),))
        self._one = ((B.one(),), (B.one(),))

    def _key(self):
        return ("FunField", self.base._key(), self.var)

    def label(self):
        return f'FunField({self.base.label()},"{self.var}")'

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def gen(self):
        return (P.x(self.base), (self.base.one(),))

    def from_int(self, n):
        return self.from_base(self.base.from_int(n))

    def from_base(self, c):
        return (P.const(self.base, c), (self.base.one(),))

    def from_poly(self, f):
        return (P.strip(self.base, f), (self.base.one(),))

    def make(self, num, den):
        B = self.base
        num, den = P.strip(B, num), P.strip(B, den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return self._zero
        g = P.gcd(B, num, den)
        if len(g) > 1:
            num, den = P.exact_div(B, num, g), P.exact_div(B, den, g)
        c = B.inv(den[-1])
        return (P.scale(B, c, num), P.scale(B, c, den))

    def add(self, a, b):
        B = self.base
        if a[1] == b[1]:
            return self.make(P.add(B, a[0], b[0]), a[1])
        return self.make(
            P.add(B, P.mul(B, a[0], b[1]), P.mul(B, b[0], a[1])), P.mul(B, a[1], b[1])
        )

    def neg(self, a):
        return (P.neg(self.base, a[0]), a[1])

    def mul(self, a, b):
        B = self.base
        return self.make(P.mul(B, a[0], b[0]), P.mul(B, a[1], b[1]))

    def inv(self, a):
        if not a[0]:
            raise ZeroDivisionError("division by zero in " + self.label())
        return self.make(a[1], a[0])

    def is_square_data(self, a):
        from .factor import factor_poly

        if not a[0]:
            raise FieldError("zero has no square class")
        B = self.base
        c = B.div(a[0][-1], a[1][-1])
        if not B.is_square_data(c):
            return False
        for part in a:
            _, factors = factor_poly(B, part)
            if any(m % 2 for _, m in factors):
                return False
        return True

    def fmt(self, a):
        B = self.base
        num = P.fmt(B, a[0], self.var)
        if a[1] == (B.one(),):
            return num
        den = P.fmt(B, a[1], self.var)
        if any(ch in num.lstrip("-") for ch in "+-/ "):
            num = f"({num})"
        if any(ch in den for ch in "+-/* "):
            den = f"({den})"
        return f"{num}/{den}"

    def random_data(self, rng, nonzero=False, degree=3):
        B = self.base
        while True:
            num = P.strip(B, [B.random_data(rng) for _ in range(rng.randint(0, degree) + 1)])
            den = P.strip(B, [B.random_data(rng) for _ in range(rng.randint(0, degree) + 1)])
            if not den or (nonzero and not num):
                continue
            return self.make(num, den)

    def coerce_from(self, elem):
        if elem.field == self.base:
            return self.from_base(elem.data)
        return self.from_base(self.base.coerce(elem))

    def numerator(self, a):
        return a[0]

    def denominator(self, a):
        return a[1]


class FieldElem:
    """An element of a `Field`, with arithmetic operators."""

    __slots__ = ("field", "data")

    def __init__(self, field: Field, data):
        self.field = field
        self.data = data

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.field == self.field:
                return other.data
            return self.field.coerce(other)
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, self.field.add(self.data, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, self.field.sub(self.data, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, self.field.sub(o, self.data))

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, self.field.mul(self.data, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, self.field.div(self.data, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, self.field.div(o, self.data))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.data))

    def __pow__(self, n: int):
        return FieldElem(self.field, self.field.pow(self.data, n))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.data == other.data
        if isinstance(other, (int, Fraction)):
            return self.data == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.data))

    def __bool__(self):
        return self.data != self.field.zero()

    def is_zero(self) -> bool:
        return self.data == self.field.zero()

    def is_one(self) -> bool:
        return self.data == self.field.one()

    def inverse(self) -> FieldElem:
        return FieldElem(self.field, self.field.inv(self.data))

    def is_square(self) -> bool:
        return self.field.is_square_data(self.data)

    def __str__(self):
        return self.field.fmt(self.data)

    def __repr__(self):
        return f"{self.field.fmt(self.data)} in {self.field.label()}"

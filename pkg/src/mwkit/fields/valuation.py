"""Discrete valuations of a rational function field F(t) that are trivial on F.

A place is either a monic irreducible polynomial over the base or the place
at infinity.  The default uniformizer at infinity is ``-1/t``; other
uniformizers may be passed explicitly to `Valuation`.
"""

from __future__ import annotations

import functools

from . import poly as P
from .base import FieldElem, FieldError, FunctionField, SimpleExtension
from .factor import is_irreducible


class Place:
    """A closed point of P^1 over the base of a function field."""

    __slots__ = ("field", "poly", "__weakref__")

    def __init__(self, field: FunctionField, poly=None):
        if not isinstance(field, FunctionField):
            raise FieldError("places live on rational function fields")
        self.field = field
        if poly is not None:
            B = field.base
            if isinstance(poly, FieldElem):
                num, den = poly.data
                if den != (B.one(),):
                    raise FieldError("place polynomial must be a polynomial")
                poly = num
            poly = P.strip(B, poly)
            if not P.is_monic(B, poly) or not is_irreducible(B, poly):
                raise FieldError("place polynomial must be monic irreducible")
        self.poly = poly

    @classmethod
    def infinity(cls, field):
        return cls(field, None)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else len(self.poly) - 1

    def __eq__(self, other):
        return isinstance(other, Place) and self.field == other.field and self.poly == other.poly

    def __hash__(self):
        return hash((self.field, self.poly))

    def __repr__(self):
        return f"Place({self})"

    def __str__(self):
        if self.poly is None:
            return "inf"
        return P.fmt(self.field.base, self.poly, self.field.var)

    def sort_key(self):
        if self.poly is None:
            return (10**9, ())
        return (len(self.poly), tuple(repr(c) for c in reversed(self.poly)))

    @property
    def residue_field(self):
        return _residue_field(self.field.base, self.poly)

    def polynomial(self) -> FieldElem:
        if self.poly is None:
            raise FieldError("the place at infinity has no polynomial")
        return FieldElem(self.field, self.field.from_poly(self.poly))

    def default_uniformizer(self) -> FieldElem:
        F = self.field
        if self.poly is None:
            return FieldElem(F, F.make((F.base.neg(F.base.one()),), P.x(F.base)))
        return self.polynomial()

    # -- valuation of polynomials and rational functions ---------------------------
    def _poly_order(self, f):
        B = self.field.base
        n = 0
        while True:
            q, r = P.divmod_(B, f, self.poly)
            if r:
                return n
            f = q
            n += 1

    def order(self, a: FieldElem) -> int:
        """Valuation of a nonzero element of the function field."""
        num, den = a.data
        if not num:
            raise FieldError("the valuation of zero is undefined")
        if self.poly is None:
            return (len(den) - 1) - (len(num) - 1)
        return self._poly_order(num) - self._poly_order(den)

    def reduce_poly(self, f):
        """Image of a polynomial over the base in the residue field (finite places)."""
        B = self.field.base
        k = self.residue_field
        if len(self.poly) == 2:
            root = B.neg(self.poly[0])
            return P.evaluate(B, f, root)
        return k.from_poly(f)

    def residue_class(self, u: FieldElem) -> FieldElem:
        """Reduction of a unit at this place into the residue field."""
        if u.field != self.field:
            raise FieldError("element is not in this function field")
        if not u or self.order(u) != 0:
            raise FieldError(f"{u} is not a unit at {self}")
        num, den = u.data
        k = self.residue_field
        if self.poly is None:
            return FieldElem(k, k.div(num[-1], den[-1]))
        return FieldElem(k, k.div(self.reduce_poly(num), self.reduce_poly(den)))

    def embed_base(self, c):
        """Base field data into residue field data."""
        k = self.residue_field
        if k == self.field.base:
            return c
        return k.embed_base(c)

    def derivative_at(self) -> FieldElem:
        """The class of ``p'(t)`` in the residue field (finite places)."""
        if self.poly is None:
            raise FieldError("no derivative at infinity")
        k = self.residue_field
        return FieldElem(k, self.reduce_poly(P.derivative(self.field.base, self.poly)))


@functools.lru_cache(maxsize=None)
def _residue_field(base, poly):
    if poly is None or len(poly) == 2:
        return base
    return SimpleExtension(base, poly, name="x")


class Valuation:
    """A place together with a chosen uniformizer."""

    def __init__(self, place: Place, uniformizer: FieldElem | None = None):
        self.place = place
        self.field = place.field
        if uniformizer is None:
            uniformizer = place.default_uniformizer()
        else:
            uniformizer = self.field(uniformizer)
            if place.order(uniformizer) != 1:
                raise FieldError(f"{uniformizer} is not a uniformizer at {place}")
        self.uniformizer = uniformizer

    @property
    def residue_field(self):
        return self.place.residue_field

    def valuation_of(self, a: FieldElem):
        """Return ``(n, u)`` with ``a = pi^n * u`` and ``u`` a unit."""
        a = self.field(a)
        n = self.place.order(a)
        return n, a / self.uniformizer**n

    def residue_class(self, u: FieldElem) -> FieldElem:
        return self.place.residue_class(self.field(u))

    def uniformizer_unit(self) -> FieldElem:
        """Residue class of ``pi / p`` where ``p`` is the default uniformizer."""
        return self.place.residue_class(self.uniformizer / self.place.default_uniformizer())

    def __repr__(self):
        return f"Valuation({self.place}, pi={self.uniformizer})"


def places_of(a: FieldElem, include_infinity: bool = True):
    """The finitely many places where ``a`` is not a unit."""
    from .factor import factor_poly

    F = a.field
    B = F.base
    out = []
    for part in a.data:
        if len(part) > 1:
            _, facs = factor_poly(B, part)
            out.extend(Place(F, g) for g, _ in facs)
    if include_infinity and len(a.data[0]) != len(a.data[1]):
        out.append(Place.infinity(F))
    return sorted(set(out), key=Place.sort_key)


def monic_irreducibles(B, degree: int):
    """All monic irreducible polynomials of a given degree over a finite field."""
    import itertools

    elems = list(B.elements_data())
    for combo in itertools.product(elems, repeat=degree):
        f = tuple(reversed(combo)) + (B.one(),)
        if is_irreducible(B, f):
            yield f

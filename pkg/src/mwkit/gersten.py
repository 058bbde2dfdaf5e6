"""Rost-Schmid complexes of curves over a field and the divisor classes on them.

Degree-one terms are finitely supported maps ``place -> TwistedElem``; the
twist generator at a place is the uniformizer used for the residue.  The
canonical sheaf of the line is trivialized by ``dt`` on the affine chart,
so pushing a class at a finite place ``(p)`` to the base multiplies by
``<p'(x)>`` before the trace transfer.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product as iproduct

from . import forms
from .fields import FieldElem, FieldError, FunField, Place, Valuation
from .fields.parse import parse_element
from .fields import poly as P
from .forms import GWClass
from .mwk import MWElem, MWExpr, TwistedElem, mw_symbol, sym, to_expr
from .residues import (
    SCHEMES,
    expression_places,
    is_unramified,
    residue,
    residue_value,
    specialize,
    transfer_cohomological,
    twisted_to_default,
)

POINT = "pt"
ALL_SCHEMES = (POINT,) + SCHEMES


class EnvelopeError(ValueError):
    """Requested weight or scheme is outside what can be decided."""


def _envelope(F, weight: int):
    kind = F.form_kind
    if kind == "finite" and abs(weight) <= 4:
        return
    if kind == "rational" and abs(weight) <= 2:
        return
    raise EnvelopeError(f"weight {weight} over {F.label()} is outside the decidable range")


# -- degree one terms ---------------------------------------------------------------


@dataclass
class RSElement:
    """A finitely supported degree-one element of a Rost-Schmid complex."""

    scheme: str
    field: object  # the function field F(t)
    values: dict = dc_field(default_factory=dict)  # Place -> TwistedElem

    def support(self):
        return sorted(self.values, key=Place.sort_key)

    def default_values(self) -> dict:
        """Values rewritten against the default uniformizer of each place."""
        return {x: twisted_to_default(x, t) for x, t in self.values.items()}

    def __add__(self, other: RSElement) -> RSElement:
        a, b = self.default_values(), other.default_values()
        out = {}
        for x in set(a) | set(b):
            if x in a and x in b:
                v = a[x] + b[x]
            else:
                v = a.get(x, b.get(x))
            out[x] = TwistedElem(v, 1, x.default_uniformizer())
        return RSElement(self.scheme, self.field, out)

    def __neg__(self):
        return RSElement(self.scheme, self.field, {x: -t for x, t in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def nonzero_support(self):
        """Places with a nonzero value; raises if some value is undecidable."""
        return [x for x in self.support() if not self.values[x].element.is_zero()]

    def is_zero(self) -> bool:
        return not self.nonzero_support()

    def __str__(self):
        if not self.values:
            return "0"
        return " + ".join(f"({x}: {self.values[x]})" for x in self.support())


def _scheme_allows(scheme: str, place: Place) -> bool:
    if scheme == "P1":
        return True
    if place.is_infinite:
        return False
    if scheme == "Gm":
        return place.poly != P.x(place.field.base)
    return True


def residue_family(scheme: str, x: MWExpr) -> RSElement:
    """The total residue of ``x`` on ``scheme``, one twisted value per ramified place."""
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    T = x.field
    values = {}
    for place in expression_places(x, include_infinity=(scheme == "P1")):
        if not _scheme_allows(scheme, place):
            continue
        t = residue(Valuation(place), x)
        try:
            if t.element.is_zero():
                continue
        except forms.UnsupportedField:
            pass
        values[place] = t
    return RSElement(scheme, T, values)


@dataclass
class DivisorClass:
    scheme: str
    function: FieldElem
    element: RSElement

    def __str__(self):
        return f"div({self.function}) = {self.element}"


def divisor_class(scheme: str, g, weight: int = 1, field=None) -> DivisorClass:
    """Residues of ``[g]``; weight ``j`` multiplies by ``eta^(1-j)`` for ``j <= 1``.

    ``g`` is a nonzero element of ``F(t)`` (or text parsed in ``field``).
    """
    if not isinstance(g, FieldElem):
        if field is None:
            raise ValueError("a field is needed to parse the function")
        g = parse_element(field, g)
    if g.is_zero():
        raise FieldError("the divisor of zero is undefined")
    T = g.field
    if weight > 1:
        raise EnvelopeError("divisor classes are implemented for weight at most 1")
    x = MWExpr(T, [((("eta",),) * (1 - weight) + (sym(g.data),), 1)], degree=weight)
    return DivisorClass(scheme, g, residue_family(scheme, x))


# -- pushforward to the base ---------------------------------------------------------


@dataclass
class Pushforward:
    total: MWElem
    contributions: list  # (place, MWElem over F)


def pushforward_point(element: RSElement, degree: int = 0) -> Pushforward:
    """Push a degree-one class on A^1, Gm or P^1 to the base field.

    ``degree`` is the degree of the values, used only for an empty support.

    A finite place ``(p)`` contributes ``Tr(<p'(x)> v)`` where ``v`` is the
    value relative to the uniformizer ``p``; infinity contributes its value
    relative to ``-1/t``, which matches ``dt`` under ``d(1/t) = -t^-2 dt``.
    """
    T = element.field
    F = T.base
    contributions = []
    total = None
    for place in element.support():
        t = element.values[place]
        v = twisted_to_default(place, t)
        if place.is_infinite:
            image = MWElem(F, v.degree, v.milnor, v.form) if v.field == F else _to_base(F, v)
        else:
            k = place.residue_field
            if k == F:
                image = _to_base(F, MWElem.angle(k, place.derivative_at().data) * v)
            else:
                image = transfer_cohomological(k, MWElem.angle(k, place.derivative_at().data) * v)
        contributions.append((place, image))
        total = image if total is None else total + image
    if total is None:
        total = MWElem.zero(F, degree)
    return Pushforward(total, contributions)


def _to_base(F, v: MWElem) -> MWElem:
    return MWElem(F, v.degree, v.milnor, GWClass(F, v.form.pos.diagonal, v.form.neg.diagonal))


def degree_lemma_function(T, n: int) -> FieldElem:
    """``(t^(n+1) - 1) / (t^(n+1) - t)``."""
    F = T.base
    num = P.sub(F, P.monomial(F, F.one(), n + 1), P.const(F, F.one()))
    den = P.sub(F, P.monomial(F, F.one(), n + 1), P.monomial(F, F.one(), 1))
    return FieldElem(T, T.make(num, den))


def degree_lemma(F, n: int) -> Pushforward:
    """Pushforward over Gm of the divisor of the degree-lemma function."""
    T = FunField(F, "t")
    return pushforward_point(divisor_class("Gm", degree_lemma_function(T, n)).element)


# -- cohomology --------------------------------------------------------------------


UNDECIDED = "undecided"


@dataclass
class RSComplex:
    """``K^MW_j`` Rost-Schmid complex of a point, A^1, Gm or P^1 over ``base``.

    ``twist`` is ``"omega"`` or ``"trivial"`` and only matters on P^1.
    """

    scheme: str
    base: object
    weight: int
    twist: str = "trivial"

    def __post_init__(self):
        if self.scheme not in ALL_SCHEMES:
            raise ValueError(f"scheme must be one of {ALL_SCHEMES}")
        if self.twist not in ("trivial", "omega"):
            raise ValueError("twist must be 'trivial' or 'omega'")
        _envelope(self.base, self.weight)

    @property
    def function_field(self):
        return FunField(self.base, "t")

    def differential(self, x: MWExpr) -> RSElement:
        if self.scheme == POINT:
            raise ValueError("a point has no degree one term")
        return residue_family(self.scheme, x)

    # H^0
    def h0_contains(self, x: MWExpr):
        """Membership of ``x`` in the unramified kernel, with its certificate."""
        if self.scheme == POINT:
            return True
        return is_unramified(x, self.scheme)

    def h0_from_base(self, y: MWElem) -> MWExpr:
        """Constant classes; on a point and on A^1 these are all of H^0."""
        return MWExpr(self.function_field, _constant_terms(self.function_field, to_expr(y)), degree=y.degree)

    # H^1
    def h1_equal(self, a: RSElement, b: RSElement):
        """True, False or ``"undecided"`` for equality of two classes in H^1."""
        if self.scheme == POINT:
            return True
        # homotopy invariance gives H^1 = 0 on A^1; the Gm splitting then gives 0 there too
        if self.scheme in ("A1", "Gm"):
            return True
        diff = a - b
        if diff.is_zero():
            return True
        if self.twist == "omega":
            return pushforward_point(diff).total.is_zero()
        found = bounded_preimage(self.scheme, diff)
        return True if found is not None else UNDECIDED


def _constant_terms(T, e: MWExpr):
    out = []
    for word, c in e.terms:
        toks = tuple(tok if tok[0] == "eta" else (tok[0], T.from_base(tok[1])) for tok in word)
        out.append((toks, c))
    return out


def bounded_preimage(scheme: str, target: RSElement, max_exponent: int = 2):
    """Search ``<u>[c f]`` for products ``f`` of support polynomials with small exponents.

    Returns a global element whose residue family equals ``target``, or None.
    """
    T = target.field
    F = T.base
    polys = [x.polynomial() for x in target.support() if not x.is_infinite]
    if not polys or F.form_kind != "finite":
        return None
    units = [a.data for a in F.nonzero_elements()]
    want = target.default_values()
    for exps in iproduct(range(-max_exponent, max_exponent + 1), repeat=len(polys)):
        f = FieldElem(T, T.one())
        for p, e in zip(polys, exps):
            f = f * p**e
        for c in units:
            for u in units:
                g = f * FieldElem(T, T.from_base(c))
                x = MWExpr(T, [((("angle", T.from_base(u)), sym(g.data)), 1)], degree=1)
                got = residue_family(scheme, x).default_values()
                if _same_family(got, want):
                    return x
    return None


def _same_family(a: dict, b: dict) -> bool:
    for x in set(a) | set(b):
        va, vb = a.get(x), b.get(x)
        if va is None:
            if not vb.is_zero():
                return False
        elif vb is None:
            if not va.is_zero():
                return False
        elif va != vb:
            return False
    return True


# -- contraction over Gm ------------------------------------------------------------


@dataclass
class Contraction:
    constant: MWElem  # a, weight j
    slope: MWElem  # b, weight j - 1, with x = a + b [t]
    certificate: object


def contraction_decompose(x: MWExpr) -> Contraction:
    """Write an unramified ``x`` on Gm as ``a + b [t]`` with ``a, b`` constant."""
    cert = is_unramified(x, "Gm")
    if cert.unramified is not True:
        raise ValueError("input is not certified unramified on Gm")
    T = x.field
    F = T.base
    one = Place(T, P.sub(F, P.x(F), P.const(F, F.one())))
    t_minus_one = one.polynomial()
    a = _to_base(F, specialize(Valuation(one, t_minus_one), x)) if one.residue_field == F else None
    zero = Place(T, P.x(F))
    r = residue_value(Valuation(zero), x)
    b = _to_base(F, r)
    j = x.degree
    if (j - 1) % 2:
        b = MWElem.eps(F) * b
    return Contraction(a, b, cert)


def reconstruct(F, a: MWElem, b: MWElem) -> MWExpr:
    """``p^* a + p^* b [t]`` over ``F(t)``."""
    T = FunField(F, "t")
    pa = MWExpr(T, _constant_terms(T, to_expr(a)), degree=a.degree)
    pb = MWExpr(T, _constant_terms(T, to_expr(b)), degree=b.degree)
    return pa + pb * MWExpr.symbol(T, [T.gen()])


def check_reconstruction(x: MWExpr, c: Contraction, extra_point=None) -> bool:
    """Residues of the difference vanish on Gm and specializations at 1 and one more point agree."""
    T = x.field
    F = T.base
    diff = x - reconstruct(F, c.constant, c.slope)
    if not is_unramified(diff, "Gm").unramified:
        return False
    if extra_point is None:
        extra_point = F.coerce(2)
    for c0 in (F.one(), extra_point):
        place = Place(T, P.sub(F, P.x(F), P.const(F, c0)))
        s = specialize(Valuation(place), diff)
        if not s.is_zero():
            return False
    return True

"""Residues, specializations and transfers for Milnor-Witt K-theory.

Residues are computed on symbolic expressions over a rational function
field ``F(t)`` and land in the pullback model over the residue field.
Each entry is split as ``a = pi^k u`` and ``[a] = [u] + <u> k_eps [pi]``,
after which the defining values on ``[pi][u_2]...`` and on unit words apply.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import forms, milnor
from .fields import FieldElem, FieldError, FunctionField, FunField, Place, SimpleExtension, Valuation
from .fields import poly as P
from .fields.factor import factor_poly
from .forms import GWClass
from .mwk import MWElem, MWExpr, TwistedElem, eta_mul, mw_symbol, sym, to_expr

ETA_TOKEN = "eta"


class LiftError(ValueError):
    """No lift to the function field could be constructed for a transfer."""


def eps_integer(F, k: int) -> GWClass:
    """``k_eps``: ``sum_{i=1..k} <(-1)^(i-1)>`` for ``k > 0`` and ``eps * (-k)_eps`` for ``k < 0``."""
    one, minus = F.one(), F.neg(F.one())
    if k >= 0:
        return GWClass(F, [one if i % 2 == 0 else minus for i in range(k)])
    # eps = -<-1>
    return -(GWClass(F, [minus]) * eps_integer(F, -k))


def _as_valuation(v, uniformizer=None) -> Valuation:
    if isinstance(v, Valuation):
        if uniformizer is not None:
            return Valuation(v.place, uniformizer)
        return v
    return Valuation(v, uniformizer)


def _split_word(word):
    etas = 0
    angles = []
    syms = []
    for tok in word:
        if tok[0] == ETA_TOKEN:
            etas += 1
        elif tok[0] == "angle":
            angles.append(tok[1])
        else:
            syms.append(tok[1])
    return etas, angles, syms


def _symbol_residue(v: Valuation, K, k, syms) -> MWElem | None:
    """``d^pi([a_1]...[a_m])`` over the residue field, or None if it vanishes for degree reasons."""
    m = len(syms)
    if m == 0:
        return None
    split = [v.valuation_of(FieldElem(K, a)) for a in syms]
    units = [v.residue_class(u).data for _, u in split]
    minus = k.neg(k.one())
    total = MWElem.zero(k, m - 1)
    for mask in range(1, 1 << m):
        idx = [i for i in range(m) if mask >> i & 1]
        if any(split[i][0] == 0 for i in idx):
            continue
        coeff = GWClass.one(k)
        for i in idx:
            coeff = coeff * GWClass(k, [units[i]]) * eps_integer(k, split[i][0])
        first = idx[0]
        # moving the first [pi] to the front passes `first` unit symbols
        if first % 2:
            coeff = -(coeff * GWClass(k, [minus]))
        entries = []
        for i in range(m):
            if i == first:
                continue
            entries.append(minus if i in idx else units[i])
        total = total + MWElem.from_gw(coeff) * mw_symbol(k, entries)
    return total


def residue_value(v, x: MWExpr, uniformizer=None) -> MWElem:
    """``d_v^pi(x)`` as an element of ``K^MW_(n-1)`` of the residue field."""
    v = _as_valuation(v, uniformizer)
    K = x.field
    if K != v.field:
        raise FieldError("expression and valuation live over different fields")
    k = v.residue_field
    pi = v.uniformizer.data
    total = MWElem.zero(k, x.degree - 1)
    for word, coeff in x.terms:
        etas, angles, syms = _split_word(word)
        unit = k.one()
        odd = 0
        for b in angles:
            n, u = v.valuation_of(FieldElem(K, b))
            unit = k.mul(unit, v.residue_class(u).data)
            odd ^= n & 1
        # <pi^k u> = <u> (1 + eta[pi])^(k mod 2)
        parts = [(etas, syms)]
        if odd:
            parts.append((etas + 1, [pi] + syms))
        for s, entries in parts:
            r = _symbol_residue(v, K, k, entries)
            if r is None:
                continue
            r = MWElem.angle(k, unit) * r
            for _ in range(s):
                r = eta_mul(r)
            total = total + coeff * r
    return total


def residue(v, x: MWExpr, uniformizer=None) -> TwistedElem:
    """The residue tagged with the uniformizer as generator of the twist."""
    v = _as_valuation(v, uniformizer)
    return TwistedElem(residue_value(v, x), 1, v.uniformizer)


def twisted_to_default(place: Place, t: TwistedElem) -> MWElem:
    """Rewrite ``y (x) pi`` relative to the default uniformizer of the place."""
    v = Valuation(place, t.generator)
    u = v.uniformizer_unit()
    return MWElem.angle(u.field, u.data) * t.element


def specialize(v, x: MWExpr, uniformizer=None) -> MWElem:
    """``s_v^pi(x) = d^pi([pi] x) - [-1] d^pi(x)``."""
    v = _as_valuation(v, uniformizer)
    K = x.field
    k = v.residue_field
    pi_expr = MWExpr(K, [((sym(v.uniformizer.data),), 1)])
    first = residue_value(v, pi_expr * x)
    second = mw_symbol(k, [k.neg(k.one())]) * residue_value(v, x)
    return first - second


# -- unramified elements ------------------------------------------------------------


SCHEMES = ("A1", "Gm", "P1")


def expression_places(x: MWExpr, include_infinity: bool = True):
    """Places where some entry of the expression is not a unit."""
    from .fields.valuation import places_of

    K = x.field
    found = set()
    for word, _ in x.terms:
        for tok in word:
            if tok[0] in ("sym", "angle"):
                found.update(places_of(FieldElem(K, tok[1]), include_infinity))
    return sorted(found, key=Place.sort_key)


def scheme_places(x: MWExpr, scheme: str):
    """Codimension one points of ``scheme`` at which ``x`` may ramify."""
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    K = x.field
    places = expression_places(x, include_infinity=(scheme == "P1"))
    if scheme == "Gm":
        t = P.x(K.base)
        places = [p for p in places if p.poly != t]
    return places


@dataclass
class UnramifiedCertificate:
    scheme: str
    unramified: bool | None
    residues: list = dc_field(default_factory=list)

    def __bool__(self):
        return bool(self.unramified)


def is_unramified(x: MWExpr, scheme: str = "A1") -> UnramifiedCertificate:
    """Check every place of ``scheme`` where an entry of ``x`` is not a unit.

    ``unramified`` is None when a residue lands in a field without an
    equality decision.
    """
    cert = UnramifiedCertificate(scheme, True)
    for place in scheme_places(x, scheme):
        r = residue_value(Valuation(place), x)
        try:
            zero = r.is_zero()
        except forms.UnsupportedField:
            cert.residues.append((place, r, None))
            cert.unramified = None if cert.unramified else cert.unramified
            continue
        cert.residues.append((place, r, zero))
        if not zero:
            cert.unramified = False
    return cert


# -- transfers -------------------------------------------------------------------------


def _extension_data(K):
    if isinstance(K, SimpleExtension):
        return K.base, K.modulus
    raise FieldError("transfers need a simple extension")


def omega0(K) -> FieldElem:
    """``p'(x)`` for ``K = F[x]/(p)`` (the separable case)."""
    F, p = _extension_data(K)
    d = K.from_poly(P.derivative(F, p))
    if d == K.zero():
        raise FieldError("inseparable extension: p'(x) vanishes")
    return FieldElem(K, d)


def transfer_scharlau(K, y: MWElem, functional) -> MWElem:
    """Transfer of both legs along an F-linear functional ``K -> F``."""
    F, _ = _extension_data(K)
    form = forms.scharlau_transfer(K, functional, y.form)
    n = y.degree
    if n > 0:
        m = milnor.norm(K, y.milnor)
    else:
        m = None
    return MWElem(F, n, m, form)


def transfer_cohomological(K, y: MWElem) -> MWElem:
    """The canonical transfer: trace-form Scharlau transfer on the form leg, norm on the Milnor leg."""
    if K == y.field and not isinstance(K, SimpleExtension):
        return y
    if y.field != K:
        raise FieldError("element does not live over the extension")
    if K.characteristic and not P.derivative(K.base, K.modulus):
        raise FieldError("inseparable extension")
    return transfer_scharlau(K, y, forms.trace_functional(K))


def transfer_top_coefficient(K, y: MWElem) -> MWElem:
    """Transfer along the functional picking the coefficient of ``x^(d-1)``."""
    return transfer_scharlau(K, y, forms.top_coefficient_functional(K))


def _place_for(K, F=None):
    """The place of ``F(t)`` whose residue field is ``K``."""
    if isinstance(K, SimpleExtension):
        F, p = K.base, K.modulus
    else:
        raise FieldError("need an extension given by a modulus")
    T = FunField(F, "t")
    return T, Place(T, p)


def _lift_entry(T, place: Place, a):
    """A polynomial of degree < deg(p) reducing to ``a`` at ``place``."""
    F = T.base
    if place.degree == 1:
        return T.from_base(a)
    return T.from_poly(P.strip(F, a))


def _lift_word(T, place: Place, word):
    out = []
    for tok in word:
        if tok[0] == ETA_TOKEN:
            out.append(tok)
        else:
            out.append((tok[0], _lift_entry(T, place, tok[1])))
    return tuple(out)


def lift_expression(place: Place, y: MWExpr) -> MWExpr:
    """``[p] * y~`` with entries lifted to polynomials of degree below ``deg(p)``.

    Its residue at ``place`` (uniformizer ``p``) is ``y``; it may ramify at
    places of smaller degree.
    """
    T = place.field
    p = place.default_uniformizer().data
    terms = [((sym(p),) + _lift_word(T, place, word), c) for word, c in y.terms]
    return MWExpr(T, terms, degree=y.degree + 1)


def full_lift(place: Place, y: MWExpr, _depth: int = 0) -> MWExpr:
    """An element with residue ``y`` at ``place`` and no other finite residues.

    The naive lift is corrected at each lower-degree place where it ramifies,
    recursively; degrees drop at each step so the recursion ends.
    """
    if _depth > 64:
        raise LiftError("lift recursion did not terminate")
    alpha = lift_expression(place, y)
    for q in expression_places(alpha, include_infinity=False):
        if q == place:
            continue
        r = residue_value(Valuation(q), alpha)
        if r.field.form_kind is None and r.degree > 0:
            raise LiftError(f"cannot lift a degree {r.degree} residue over {r.field.label()}")
        try:
            if r.is_zero():
                continue
        except forms.UnsupportedField:
            pass
        try:
            r_expr = to_expr(r)
        except forms.UnsupportedField as exc:
            raise LiftError(str(exc)) from exc
        alpha = alpha - full_lift(q, r_expr, _depth + 1)
    return alpha


def transfer_geometric_splitseq(K, y) -> MWElem:
    """``-d_inf^(-1/t)`` of a lift of ``y`` supported at the place ``(p)``.

    ``K`` is ``F[x]/(p)``; ``y`` is an `MWElem` or `MWExpr` over ``K``.
    """
    T, place = _place_for(K)
    k = place.residue_field
    if isinstance(y, MWElem):
        try:
            if y.is_zero():
                return MWElem.zero(K.base, y.degree)
        except forms.UnsupportedField:
            pass
        try:
            y = to_expr(y)
        except forms.UnsupportedField as exc:
            raise LiftError(str(exc)) from exc
    if k != K:
        # a linear modulus: the residue field is the base itself
        y = MWExpr(k, [(tuple(_down_token(K, tok) for tok in w), c) for w, c in y.terms], degree=y.degree)
    else:
        y = MWExpr(k, y.terms, degree=y.degree)
    alpha = full_lift(place, y)
    return -residue_value(Valuation(Place.infinity(T)), alpha)


def _down_token(K, tok):
    if len(tok) == 1:
        return tok
    coeffs = K.to_poly(tok[1])
    return (tok[0], coeffs[0] if coeffs else K.base.zero())


def transfer_geometric_of_one(base, modulus) -> GWClass:
    """Geometric transfer of ``1`` along ``base[x]/(P)`` for monic ``P`` over any base.

    The lift ``[P]`` only ramifies at ``(P)`` and infinity.  With
    ``P = (-1/x)^(-d) u`` the residue of ``u`` is ``(-1)^d``, so the transfer
    is ``-<(-1)^d> (-d)_eps``.  This works for purely inseparable ``P`` too.
    """
    d = len(modulus) - 1
    unit = base.one() if d % 2 == 0 else base.neg(base.one())
    unit = base.mul(unit, modulus[-1])
    return -(GWClass(base, [unit]) * eps_integer(base, -d))


def inseparable_pullback_pushforward(p: int) -> GWClass:
    """``f^* f_* (1)`` for ``F_p(s) subset F_p(t)`` with ``s = t^p``.

    The extension is ``x^p - s``; its derivative vanishes, ``p_0(y) = y - s``
    and ``omega_0 = p_0'(x^p) = 1``, so the canonical transfer is the
    geometric one.  Pullback of a class with entries in ``F_p`` is the same
    class, so the result is compared with ``p_eps``.
    """
    from .fields import GF

    L = FunField(GF(p), "s")
    s = L.gen()
    modulus = (L.neg(s),) + (L.zero(),) * (p - 1) + (L.one(),)
    if P.derivative(L, modulus):
        raise FieldError("expected a purely inseparable modulus")
    image = transfer_geometric_of_one(L, modulus)
    # every entry is a constant in F_p
    k = L.base
    down = lambda xs: [L.numerator(a)[0] for a in xs]
    return GWClass(k, down(image.pos.diagonal), down(image.neg.diagonal))

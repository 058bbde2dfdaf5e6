"""Finite MW-correspondences between finite etale algebras over a finite field.

An etale algebra over ``F = F_q`` is a product of fields ``F_(q^a)``, one per
entry of ``degrees``.  Fix an algebraic closure and a compatible system of
embeddings ``s_a : F_(q^a) -> Fbar``; every embedding is ``Frob^x s_a`` for a
unique ``x mod a``.  A component of ``K_1 (x) ... (x) K_m`` is then an orbit of
index tuples ``(x_1, ..., x_m)`` under the diagonal shift, and its residue
field has degree ``lcm(a_i)``.  Projections between tensor products forget
coordinates of a tuple.

A Grothendieck-Witt class over a finite field is determined by its rank and
whether its determinant is a square, so correspondence entries are stored
as such pairs ``(rank, bit)``.  Pullback along a degree ``e`` extension keeps
the bit only for odd ``e``; the trace transfer of ``<c>`` has rank ``e`` and
nonsquare determinant exactly when ``c`` is a nonsquare or ``e`` is even.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from functools import reduce

from .fields import GF, FieldError
from .forms import GWClass

SCHEMA_VERSION = 1


def _lcm(*xs) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), xs, 1)


def orbit_rep(degrees, tup) -> tuple:
    """Least element of the diagonal-shift orbit of ``tup`` in ``prod Z/a``."""
    L = _lcm(*degrees)
    return min(tuple((x + k) % a for x, a in zip(tup, degrees)) for k in range(L))


def tensor_components(degrees) -> list:
    """Orbit representatives of the components of ``F_(q^a_1) (x) ... (x) F_(q^a_m)``."""
    reps = set()
    for tup in _tuples(degrees):
        reps.add(orbit_rep(degrees, tup))
    return sorted(reps)


def _tuples(degrees):
    if not degrees:
        yield ()
        return
    for head in range(degrees[0]):
        for rest in _tuples(degrees[1:]):
            yield (head,) + rest


# -- GW classes over finite fields as (rank, bit) ---------------------------------


def _check_finite(F):
    if F.form_kind != "finite":
        raise FieldError("correspondences are implemented over finite fields")


def component_field(F, degree: int):
    """The finite field ``F_(q^degree)`` containing ``F = F_q``."""
    _check_finite(F)
    return GF(F.characteristic, F.degree_over_prime() * degree)


def gw_invariants(x: GWClass) -> tuple:
    F = x.field
    det = x.determinant()
    return (x.rank, 0 if F.is_square_data(det) else 1)


def gw_from_invariants(k, inv) -> GWClass:
    rank, bit = inv
    u = k.nonsquare.data
    one = k.one()
    if bit:
        return GWClass(k, [u], [one]) + GWClass.from_int(k, rank)
    return GWClass.from_int(k, rank)


def _add(x, y):
    return (x[0] + y[0], (x[1] + y[1]) % 2)


def _mul(x, y):
    return (x[0] * y[0], (x[1] * y[0] + y[1] * x[0]) % 2)


def _pull(x, e: int):
    return (x[0], x[1] if e % 2 else 0)


def _push(x, e: int):
    return (e * x[0], (x[1] + (x[0] if e % 2 == 0 else 0)) % 2)


def _is_zero(x):
    return x == (0, 0)


# -- objects and maps ------------------------------------------------------------------


@dataclass(frozen=True)
class EtaleAlg:
    """``prod_i F_(q^a_i)``; ``parts`` records tensor factors when built by `tensor`."""

    base: object
    degrees: tuple
    parts: tuple | None = None  # per component: (i, i2, rep) for tensor products

    def __post_init__(self):
        _check_finite(self.base)
        if any(int(d) < 1 for d in self.degrees):
            raise ValueError("component degrees must be positive")
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))

    @property
    def n(self) -> int:
        return len(self.degrees)

    def field(self, i: int):
        return component_field(self.base, self.degrees[i])

    def label(self) -> str:
        q = self.base.size
        return " x ".join(f"GF({q ** d})" for d in self.degrees) or "0"

    def __eq__(self, other):
        return (
            isinstance(other, EtaleAlg)
            and self.base == other.base
            and self.degrees == other.degrees
            and self.parts == other.parts
        )

    def __hash__(self):
        return hash((self.base, self.degrees, self.parts))


def tensor_algebra(A: EtaleAlg, B: EtaleAlg) -> EtaleAlg:
    if A.base != B.base:
        raise FieldError("base fields differ")
    degrees, parts = [], []
    for i, a in enumerate(A.degrees):
        for j, b in enumerate(B.degrees):
            for rep in tensor_components((a, b)):
                degrees.append(_lcm(a, b))
                parts.append((i, j, rep))
    return EtaleAlg(A.base, tuple(degrees), tuple(parts))


def _locate(T: EtaleAlg, A: EtaleAlg, B: EtaleAlg, i: int, j: int, pair) -> tuple:
    """Component ``c`` of ``T = A (x) B`` and ``k mod deg c`` with ``rep(c) + k = pair``."""
    a, b = A.degrees[i], B.degrees[j]
    rep = orbit_rep((a, b), pair)
    for c, (ci, cj, crep) in enumerate(T.parts):
        if (ci, cj, crep) == (i, j, rep):
            for k in range(T.degrees[c]):
                if ((crep[0] + k) % a, (crep[1] + k) % b) == tuple(pair):
                    return c, k
    raise ValueError("component not found in tensor product")


@dataclass(frozen=True)
class AlgebraMap:
    """An F-algebra map ``source -> target``; for each target component,
    the source component it comes from and a Frobenius twist.

    Entry ``(j, s)`` for target component ``i`` means ``s_(a_i) phi = Frob^s s_(b_j)``
    on ``F_(q^b_j)``.  It induces the scheme map ``Spec target -> Spec source``.
    """

    source: EtaleAlg
    target: EtaleAlg
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.target.n:
            raise ValueError("one image per target component is required")
        for i, (j, s) in enumerate(self.images):
            if self.target.degrees[i] % self.source.degrees[j]:
                raise ValueError(f"no field map from degree {self.source.degrees[j]} into degree {self.target.degrees[i]}")
        object.__setattr__(
            self, "images", tuple((j, s % self.source.degrees[j]) for j, s in self.images)
        )

    @classmethod
    def identity(cls, A: EtaleAlg) -> AlgebraMap:
        return cls(A, A, tuple((i, 0) for i in range(A.n)))

    @classmethod
    def structure(cls, A: EtaleAlg) -> AlgebraMap:
        """``F -> A``."""
        return cls(EtaleAlg(A.base, (1,)), A, tuple((0, 0) for _ in range(A.n)))

    def then(self, other: AlgebraMap) -> AlgebraMap:
        """``other . self`` as algebra maps (``self`` applied first)."""
        if self.target != other.source:
            raise ValueError("maps do not compose")
        images = []
        for j, t in other.images:
            k, s = self.images[j]
            images.append((k, s + t))
        return AlgebraMap(self.source, other.target, tuple(images))


# -- correspondences ---------------------------------------------------------------------


class Correspondence:
    """An element of ``Cor(source, target)``: GW classes on components of ``source (x) target``.

    Entries are keyed by ``(i, j, rep)`` with ``rep`` an orbit representative
    for ``F_(q^a_i) (x) F_(q^b_j)``; values are ``(rank, bit)`` pairs.
    """

    __slots__ = ("source", "target", "entries")

    def __init__(self, source: EtaleAlg, target: EtaleAlg, entries=None):
        if source.base != target.base:
            raise FieldError("base fields differ")
        self.source = source
        self.target = target
        clean = {}
        for (i, j, rep), v in (entries or {}).items():
            a, b = source.degrees[i], target.degrees[j]
            rep = orbit_rep((a, b), rep)
            v = (int(v[0]), int(v[1]) % 2)
            if (i, j, rep) in clean:
                v = _add(clean[(i, j, rep)], v)
            clean[(i, j, rep)] = v
        self.entries = {k: v for k, v in clean.items() if not _is_zero(v)}

    @property
    def base(self):
        return self.source.base

    def component_degree(self, key) -> int:
        i, j, _ = key
        return _lcm(self.source.degrees[i], self.target.degrees[j])

    def value(self, i, j, rep) -> GWClass:
        key = (i, j, orbit_rep((self.source.degrees[i], self.target.degrees[j]), rep))
        k = component_field(self.base, self.component_degree(key))
        return gw_from_invariants(k, self.entries.get(key, (0, 0)))

    def __eq__(self, other):
        return (
            isinstance(other, Correspondence)
            and self.source == other.source
            and self.target == other.target
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.entries.items()))))

    def __add__(self, other):
        self._check(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = _add(out.get(k, (0, 0)), v)
        return Correspondence(self.source, self.target, out)

    def __neg__(self):
        return Correspondence(self.source, self.target, {k: (-r, b) for k, (r, b) in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def _check(self, other):
        if self.source != other.source or self.target != other.target:
            raise ValueError("correspondences between different objects")

    def scaled(self, g: GWClass) -> Correspondence:
        """Multiply every entry by the pullback of a class over the base field."""
        if g.field != self.base:
            raise FieldError("scalar must live over the base field")
        inv = gw_invariants(g)
        out = {}
        for key, v in self.entries.items():
            out[key] = _mul(v, _pull(inv, self.component_degree(key)))
        return Correspondence(self.source, self.target, out)

    def __str__(self):
        if not self.entries:
            return "0"
        parts = []
        for key in sorted(self.entries):
            i, j, rep = key
            k = component_field(self.base, self.component_degree(key))
            parts.append(f"[{i}->{j} {rep}] {gw_from_invariants(k, self.entries[key])}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Correspondence({self.source.label()} -> {self.target.label()}: {self})"

    # serialization
    def to_json(self) -> dict:
        entries = []
        for key in sorted(self.entries):
            i, j, rep = key
            k = component_field(self.base, self.component_degree(key))
            g = gw_from_invariants(k, self.entries[key])
            entries.append(
                {
                    "source": i,
                    "target": j,
                    "orbit": list(rep),
                    "field": k.label(),
                    "pos": [k.fmt(a) for a in g.pos.diagonal],
                    "neg": [k.fmt(a) for a in g.neg.diagonal],
                }
            )
        return {
            "schema": SCHEMA_VERSION,
            "base": self.base.label(),
            "source": list(self.source.degrees),
            "target": list(self.target.degrees),
            "entries": entries,
        }

    @classmethod
    def from_json(cls, data) -> Correspondence:
        from .fields import parse_element, parse_field

        if isinstance(data, str):
            data = json.loads(data)
        if "result" in data and "base" not in data:
            data = data["result"]
        F = parse_field(data["base"])
        A = EtaleAlg(F, tuple(data["source"]))
        B = EtaleAlg(F, tuple(data["target"]))
        entries = {}
        for e in data.get("entries", []):
            i, j = e["source"], e["target"]
            k = component_field(F, _lcm(A.degrees[i], B.degrees[j]))
            g = GWClass(
                k,
                [parse_element(k, a).data for a in e.get("pos", [])],
                [parse_element(k, a).data for a in e.get("neg", [])],
            )
            key = (i, j, tuple(e["orbit"]))
            entries[key] = _add(entries.get(key, (0, 0)), gw_invariants(g))
        return cls(A, B, entries)


def _compose_entries(src: EtaleAlg, mid: EtaleAlg, tgt: EtaleAlg, first: dict, second: dict, ops) -> dict:
    """Pull both to triple components, multiply, push to ``src (x) tgt``."""
    add, mul, pull, push = ops
    out = {}
    by_mid = {}
    for (j, k, rep), v in second.items():
        by_mid.setdefault(j, []).append((k, rep, v))
    for (i, j, rep1), v1 in first.items():
        a, b = src.degrees[i], mid.degrees[j]
        ab = _lcm(a, b)
        for k, rep2, v2 in by_mid.get(j, ()):
            c = tgt.degrees[k]
            bc = _lcm(b, c)
            degs = (a, b, c)
            D = _lcm(a, b, c)
            triples = set()
            for m in range(ab):
                x, y = (rep1[0] + m) % a, (rep1[1] + m) % b
                for z in range(c):
                    if orbit_rep((b, c), (y, z)) == rep2:
                        triples.add(orbit_rep(degs, (x, y, z)))
            ac = _lcm(a, c)
            for w in triples:
                val = mul(pull(v1, D // ab), pull(v2, D // bc))
                key = (i, k, orbit_rep((a, c), (w[0], w[2])))
                image = push(val, D // ac)
                out[key] = add(out[key], image) if key in out else image
    return out


_GW_OPS = (_add, _mul, _pull, _push)


def compose(second: Correspondence, first: Correspondence) -> Correspondence:
    """``second . first`` for ``first`` in ``Cor(A, B)`` and ``second`` in ``Cor(B, C)``."""
    if first.target != second.source:
        raise ValueError("correspondences do not compose: middle objects differ")
    entries = _compose_entries(first.source, first.target, second.target, first.entries, second.entries, _GW_OPS)
    return Correspondence(first.source, second.target, entries)


def identity(A: EtaleAlg) -> Correspondence:
    return Correspondence(A, A, {(i, i, (0, 0)): (1, 0) for i in range(A.n)})


def graph(phi: AlgebraMap) -> Correspondence:
    """The graph of ``Spec target -> Spec source`` with ``<1>`` on it, in ``Cor(target, source)``."""
    entries = {}
    for i, (j, s) in enumerate(phi.images):
        entries[(i, j, (0, s))] = (1, 0)
    return Correspondence(phi.target, phi.source, entries)


def pushforward_corr(phi: AlgebraMap) -> Correspondence:
    """The transposed graph with ``<1>`` under the canonical orientation, in ``Cor(source, target)``."""
    entries = {}
    for i, (j, s) in enumerate(phi.images):
        entries[(j, i, (s, 0))] = (1, 0)
    return Correspondence(phi.source, phi.target, entries)


def diagonal_action(A: EtaleAlg, units) -> Correspondence:
    """``<u>`` as an endomorphism of ``Spec A``; ``units`` has one element per component."""
    if len(units) != A.n:
        raise ValueError("one unit per component is required")
    entries = {}
    for i, u in enumerate(units):
        k = A.field(i)
        u = k.coerce(u) if not isinstance(u, tuple) else u
        if u == k.zero():
            raise FieldError("the action needs units")
        entries[(i, i, (0, 0))] = (1, 0 if k.is_square_data(u) else 1)
    return Correspondence(A, A, entries)


def kmw0_action(units, alpha: Correspondence) -> Correspondence:
    """Left action of ``<u>`` for a unit ``u`` of the source algebra."""
    return compose(alpha, diagonal_action(alpha.source, units))


def hyperbolic(alpha: Correspondence) -> Correspondence:
    """Entrywise multiplication by ``h = <1,-1>``."""
    out = {}
    for key, v in alpha.entries.items():
        k = component_field(alpha.base, alpha.component_degree(key))
        h = gw_invariants(GWClass.hyperbolic(k, 1))
        out[key] = _mul(v, h)
    return Correspondence(alpha.source, alpha.target, out)


def tensor(alpha: Correspondence, beta: Correspondence) -> Correspondence:
    """``alpha (x) beta`` in ``Cor(A (x) A2, B (x) B2)``."""
    A, B, A2, B2 = alpha.source, alpha.target, beta.source, beta.target
    S, T = tensor_algebra(A, A2), tensor_algebra(B, B2)
    out = {}
    for (i, j, r1), v1 in alpha.entries.items():
        a, b = A.degrees[i], B.degrees[j]
        for (i2, j2, r2), v2 in beta.entries.items():
            a2, b2 = A2.degrees[i2], B2.degrees[j2]
            degs = (a, b, a2, b2)
            D = _lcm(*degs)
            quads = set()
            for m in range(_lcm(a, b)):
                for m2 in range(_lcm(a2, b2)):
                    quads.add(orbit_rep(degs, ((r1[0] + m) % a, (r1[1] + m) % b, (r2[0] + m2) % a2, (r2[1] + m2) % b2)))
            for x, y, x2, y2 in quads:
                c, k = _locate(S, A, A2, i, i2, (x, x2))
                d, l = _locate(T, B, B2, j, j2, (y, y2))
                val = _mul(_pull(v1, D // _lcm(a, b)), _pull(v2, D // _lcm(a2, b2)))
                key = (c, d, orbit_rep((S.degrees[c], T.degrees[d]), (k, l)))
                out[key] = _add(out.get(key, (0, 0)), val)
    return Correspondence(S, T, out)


# -- the rank functor ------------------------------------------------------------------


class RankCorrespondence:
    """Integer multiplicities on the same components: the image under ``rank``."""

    __slots__ = ("source", "target", "entries")

    def __init__(self, source, target, entries=None):
        self.source = source
        self.target = target
        self.entries = {}
        for (i, j, rep), v in (entries or {}).items():
            key = (i, j, orbit_rep((source.degrees[i], target.degrees[j]), rep))
            self.entries[key] = self.entries.get(key, 0) + int(v)
        self.entries = {k: v for k, v in self.entries.items() if v}

    def __eq__(self, other):
        return (
            isinstance(other, RankCorrespondence)
            and self.source == other.source
            and self.target == other.target
            and self.entries == other.entries
        )

    def __rmul__(self, n: int):
        return RankCorrespondence(self.source, self.target, {k: n * v for k, v in self.entries.items()})

    def __str__(self):
        return " + ".join(f"{v}*[{i}->{j} {rep}]" for (i, j, rep), v in sorted(self.entries.items())) or "0"


_RANK_OPS = (
    lambda x, y: x + y,
    lambda x, y: x * y,
    lambda x, e: x,
    lambda x, e: e * x,
)


def rank_functor(alpha: Correspondence) -> RankCorrespondence:
    return RankCorrespondence(alpha.source, alpha.target, {k: r for k, (r, _) in alpha.entries.items()})


def rank_compose(second: RankCorrespondence, first: RankCorrespondence) -> RankCorrespondence:
    if first.target != second.source:
        raise ValueError("correspondences do not compose: middle objects differ")
    entries = _compose_entries(first.source, first.target, second.target, first.entries, second.entries, _RANK_OPS)
    return RankCorrespondence(first.source, second.target, entries)


# -- random data ---------------------------------------------------------------------


def random_algebra(rng: random.Random, F, max_components: int = 2, max_degree: int = 3) -> EtaleAlg:
    n = rng.randint(1, max_components)
    return EtaleAlg(F, tuple(rng.randint(1, max_degree) for _ in range(n)))


def random_correspondence(rng: random.Random, A: EtaleAlg, B: EtaleAlg, density: float = 0.6) -> Correspondence:
    entries = {}
    for i, a in enumerate(A.degrees):
        for j, b in enumerate(B.degrees):
            for rep in tensor_components((a, b)):
                if rng.random() < density:
                    entries[(i, j, rep)] = (rng.randint(-2, 3), rng.randint(0, 1))
    return Correspondence(A, B, entries)


def random_map(rng: random.Random, source: EtaleAlg, target: EtaleAlg) -> AlgebraMap | None:
    """A random algebra map, or None if some target component receives no field map."""
    images = []
    for a in target.degrees:
        choices = [j for j, b in enumerate(source.degrees) if a % b == 0]
        if not choices:
            return None
        j = rng.choice(choices)
        images.append((j, rng.randrange(source.degrees[j])))
    return AlgebraMap(source, target, tuple(images))

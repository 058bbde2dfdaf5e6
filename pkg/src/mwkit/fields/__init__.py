"""Ground fields, polynomials, factorization and valuations."""

from __future__ import annotations

import functools

from .base import (
    Field,
    FieldElem,
    FieldError,
    FunctionField,
    PrimeField,
    RationalField,
    RealsFormal,
    SimpleExtension,
    UnsupportedField,
)
from .factor import factor_poly, is_irreducible, least_irreducible
from .parse import ParseError, parse_element, parse_field
from .valuation import Place, Valuation, places_of

QQ = RationalField()
RR = RealsFormal()


def _prime_power(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            d, r = 0, q
            while r % p == 0:
                r //= p
                d += 1
            if r != 1:
                raise FieldError(f"{q} is not a prime power")
            return p, d
    raise FieldError(f"{q} is not a prime power")


@functools.lru_cache(maxsize=None)
def GF(q: int, d: int | None = None) -> Field:
    """``GF(q)`` for an odd prime power ``q``, or ``GF(p, d)``.

    Degree ``d > 1`` fields are ``F_p[a]/(m)`` with ``m`` the least monic
    irreducible of degree ``d``; the generator prints as ``a``.
    """
    if d is None:
        p, d = _prime_power(q)
    else:
        p = q
    base = PrimeField(p)
    if d == 1:
        return base
    if d < 1:
        raise FieldError("degree must be positive")
    return SimpleExtension(base, least_irreducible(base, d), name="a", label=f"GF({p**d})")


@functools.lru_cache(maxsize=None)
def FunField(base: Field, var: str = "t") -> FunctionField:
    return FunctionField(base, var)


def field_extension(F: Field, modulus, name: str = "x") -> SimpleExtension:
    """``F[name]/(modulus)`` for a monic irreducible modulus given as data or text."""
    if isinstance(modulus, str):
        modulus = parse_poly(F, modulus, name)
    if not is_irreducible(F, modulus):
        raise FieldError("extension modulus must be irreducible")
    return SimpleExtension(F, modulus, name=name)


def parse_poly(F: Field, text: str, var: str = "t"):
    """Polynomial data over ``F`` from text in the variable ``var``."""
    R = FunField(F, var)
    num, den = parse_element(R, text).data
    if den != (F.one(),):
        raise FieldError(f"{text!r} is not a polynomial")
    return num


__all__ = [
    "Field",
    "FieldElem",
    "FieldError",
    "FunctionField",
    "PrimeField",
    "RationalField",
    "RealsFormal",
    "SimpleExtension",
    "UnsupportedField",
    "ParseError",
    "Place",
    "Valuation",
    "QQ",
    "RR",
    "GF",
    "FunField",
    "factor_poly",
    "field_extension",
    "is_irreducible",
    "least_irreducible",
    "parse_element",
    "parse_field",
    "parse_poly",
    "places_of",
]

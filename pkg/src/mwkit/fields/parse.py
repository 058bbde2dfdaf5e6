"""Text grammar for fields and field elements.

Fields: ``GF(q)``, ``GF(p,d)``, ``QQ``, ``RR``, ``FunField(GF(3),"t")``.
Elements: integer literals, generator names, ``+ - * / ^`` and parentheses.
Juxtaposition such as ``2t`` multiplies.
"""

from __future__ import annotations

import re

from .base import Field, FieldElem, FieldError, FunctionField, SimpleExtension

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<num>\d+)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<str>"[^"]*"|'[^']*')
      | (?P<op>[-+*/^()\[\]<>,{}])
    )""",
    re.VERBOSE,
)


class ParseError(ValueError):
    """Malformed text input."""


def tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at {pos} in {text!r}")
        pos = m.end()
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "str":
            value = value[1:-1]
        out.append((kind, value))
    return out


class TokenStream:
    def __init__(self, tokens, text=""):
        self.tokens = tokens
        self.i = 0
        self.text = text

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def next(self):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        self.i += 1
        return tok

    def accept(self, value):
        kind, v = self.peek()
        if kind in ("op", "name") and v == value:
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            raise ParseError(f"expected {value!r} in {self.text!r}, got {self.peek()[1]!r}")

    def at_end(self):
        return self.i >= len(self.tokens)


# -- elements -------------------------------------------------------------------


def generator_names(F: Field) -> dict:
    """Map of names usable in element text to elements of ``F``."""
    names = {}
    chain = []
    K = F
    while True:
        chain.append(K)
        if isinstance(K, (FunctionField, SimpleExtension)):
            K = K.base
        else:
            break
    for K in reversed(chain):
        if isinstance(K, FunctionField):
            names[K.var] = F(FieldElem(K, K.gen()))
        elif isinstance(K, SimpleExtension):
            names[K.name] = F(FieldElem(K, K.gen()))
    return names


def parse_element(F: Field, text) -> FieldElem:
    if isinstance(text, FieldElem):
        return F(text)
    if isinstance(text, int):
        return F(text)
    ts = TokenStream(tokenize(str(text)), str(text))
    value = parse_sum(F, ts, generator_names(F))
    if not ts.at_end():
        raise ParseError(f"trailing input in {text!r}")
    return value


def parse_sum(F, ts, names):
    if ts.accept("-"):
        acc = -parse_product(F, ts, names)
    else:
        ts.accept("+")
        acc = parse_product(F, ts, names)
    while True:
        if ts.accept("+"):
            acc = acc + parse_product(F, ts, names)
        elif ts.accept("-"):
            acc = acc - parse_product(F, ts, names)
        else:
            return acc


def _starts_atom(tok):
    kind, v = tok
    return kind in ("num", "name") or (kind == "op" and v == "(")


def parse_product(F, ts, names):
    acc = parse_power(F, ts, names)
    while True:
        if ts.accept("*"):
            acc = acc * parse_power(F, ts, names)
        elif ts.accept("/"):
            d = parse_power(F, ts, names)
            if d.is_zero():
                raise FieldError("division by zero")
            acc = acc / d
        elif _starts_atom(ts.peek()):
            acc = acc * parse_power(F, ts, names)
        else:
            return acc


def _parse_int(ts):
    sign = -1 if ts.accept("-") else 1
    if ts.accept("("):
        n = _parse_int(ts)
        ts.expect(")")
        return sign * n
    kind, v = ts.next()
    if kind != "num":
        raise ParseError(f"expected an integer exponent, got {v!r}")
    return sign * int(v)


def parse_power(F, ts, names):
    if ts.accept("-"):
        return -parse_power(F, ts, names)
    base = parse_atom(F, ts, names)
    if ts.accept("^"):
        n = _parse_int(ts)
        if n < 0 and base.is_zero():
            raise FieldError("division by zero")
        return base**n
    return base


def parse_atom(F, ts, names):
    kind, v = ts.next()
    if kind == "num":
        return F(int(v))
    if kind == "name":
        if v in names:
            return names[v]
        raise ParseError(f"unknown name {v!r} for {F.label()}")
    if v == "(":
        inner = parse_sum(F, ts, names)
        ts.expect(")")
        return inner
    raise ParseError(f"unexpected {v!r}")


# -- fields ---------------------------------------------------------------------


def parse_field(text: str) -> Field:
    ts = TokenStream(tokenize(text), text)
    F = _parse_field(ts)
    if not ts.at_end():
        raise ParseError(f"trailing input in field {text!r}")
    return F


def _parse_field(ts):
    from . import GF, QQ, RR, FunField

    kind, v = ts.next()
    if kind != "name":
        raise ParseError(f"expected a field, got {v!r}")
    if v == "QQ":
        F = QQ
    elif v == "RR":
        F = RR
    elif v == "GF":
        ts.expect("(")
        q = int(ts.next()[1])
        d = None
        if ts.accept(","):
            d = int(ts.next()[1])
        ts.expect(")")
        F = GF(q, d)
    elif v == "FunField":
        ts.expect("(")
        base = _parse_field(ts)
        var = "t"
        if ts.accept(","):
            var = ts.next()[1]
        ts.expect(")")
        F = FunField(base, var)
    else:
        raise ParseError(f"unknown field {v!r}")
    # shorthand GF(3)(t)
    if ts.peek() == ("op", "("):
        ts.next()
        var = ts.next()[1]
        ts.expect(")")
        F = FunField(F, var)
    return F

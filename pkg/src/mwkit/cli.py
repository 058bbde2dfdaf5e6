"""Command line front end: ``mwkit <subcommand> ...`` or ``mwkit @session.txt``.

Exit status is 0 on success, 1 when an identity that should hold fails and
2 on usage errors.  ``--json`` prints one schema-versioned object.
"""

from __future__ import annotations

import argparse
import json
import random
import shlex
import sys

from . import correspondences as cr
from . import suites
from .fields import FieldError, FunctionField, FunField, Place, Valuation, parse_field
from .fields import parse_poly
from .fields.parse import ParseError, parse_element
from .forms import UnsupportedField, fundamental_ideal_level
from .gersten import (
    check_reconstruction,
    contraction_decompose,
    degree_lemma,
    divisor_class,
    pushforward_point,
)
from .mwk import MWElem, evaluate, parse_expr
from .residues import (
    LiftError,
    omega0,
    residue,
    specialize,
    transfer_cohomological,
    transfer_geometric_splitseq,
    transfer_top_coefficient,
    twisted_to_default,
)

SCHEMA = "mwkit/1"
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class Failed(Exception):
    """An identity that should hold did not; carries the report."""

    def __init__(self, report):
        super().__init__("verification failed")
        self.report = report


# -- helpers ---------------------------------------------------------------------


def _field(text):
    try:
        return parse_field(text)
    except (ParseError, FieldError) as exc:
        raise UsageError(f"bad field {text!r}: {exc}") from exc


def _function_field(text):
    T = _field(text)
    if not isinstance(T, FunctionField):
        raise UsageError(f"{text!r} is not a rational function field such as GF(3)(t)")
    return T


def _expr(F, text):
    try:
        return parse_expr(F, text)
    except (ValueError, FieldError) as exc:
        raise UsageError(f"cannot parse expression {text!r}: {exc}") from exc


def _place(T, text):
    if text.strip() in ("inf", "infinity"):
        return Place.infinity(T)
    try:
        return Place(T, parse_poly(T.base, text, T.var))
    except (ValueError, FieldError) as exc:
        raise UsageError(f"bad place {text!r}: {exc}") from exc


def _valuation(T, place_text, uniformizer_text=None):
    place = _place(T, place_text)
    pi = None
    if uniformizer_text:
        try:
            pi = parse_element(T, uniformizer_text)
            return Valuation(place, pi)
        except (ValueError, FieldError) as exc:
            raise UsageError(f"bad uniformizer {uniformizer_text!r}: {exc}") from exc
    return Valuation(place)


def _level(x: MWElem, bound):
    if x.degree < 0:
        return None
    try:
        return fundamental_ideal_level(x.form, bound)
    except UnsupportedField:
        return None


# -- subcommands --------------------------------------------------------------------


def cmd_normalize(args):
    F = _field(args.field)
    e = _expr(F, args.expression)
    x = evaluate(e)
    out = {"field": F.label(), "input": args.expression, "expression": str(e), "degree": x.degree, "value": str(x)}
    lvl = _level(x, args.bound)
    if lvl is not None:
        out["form_level"] = lvl
    return out, str(x)


def cmd_residue(args):
    T = _function_field(args.field)
    v = _valuation(T, args.place, args.uniformizer)
    e = _expr(T, args.expression)
    r = residue(v, e)
    default = twisted_to_default(v.place, r)
    out = {
        "field": T.label(),
        "place": str(v.place),
        "uniformizer": str(v.uniformizer),
        "residue_field": v.residue_field.label(),
        "value": str(r.element),
        "default_uniformizer_value": str(default),
    }
    return out, f"{r.element}  (x) {v.uniformizer}"


def cmd_specialize(args):
    T = _function_field(args.field)
    v = _valuation(T, args.place, args.uniformizer)
    e = _expr(T, args.expression)
    s = specialize(v, e)
    out = {"field": T.label(), "place": str(v.place), "uniformizer": str(v.uniformizer), "value": str(s)}
    return out, str(s)


def cmd_transfer(args):
    K = _field(args.field)
    if not hasattr(K, "modulus"):
        raise UsageError("transfer needs a finite extension such as GF(9)")
    x = evaluate(_expr(K, args.expression))
    trace = transfer_cohomological(K, x)
    w = omega0(K)
    report = {
        "extension": K.label(),
        "base": K.base.label(),
        "input": str(x),
        "trace": str(trace),
        "top_coefficient": str(transfer_top_coefficient(K, x)),
        "omega0": str(w),
    }
    ok = True
    try:
        geo = transfer_geometric_splitseq(K, x)
        corrected = transfer_cohomological(K, MWElem.angle(K, w.data) * x)
        report["geometric"] = str(geo)
        report["geometric_matches"] = geo == corrected
        ok = geo == corrected
    except LiftError as exc:
        report["geometric"] = None
        report["geometric_error"] = str(exc)
    if not ok:
        raise Failed(report)
    return report, f"Tr_*: {trace}"


def _push_report(pf):
    return [{"place": str(p), "value": str(v)} for p, v in pf.contributions]


def cmd_divisor(args):
    T = _field(args.field)
    if not isinstance(T, FunctionField):
        T = FunField(T, "t")
    try:
        g = parse_element(T, args.function)
    except (ValueError, FieldError) as exc:
        raise UsageError(f"bad function {args.function!r}: {exc}") from exc
    try:
        d = divisor_class(args.scheme, g, weight=args.weight)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    pf = pushforward_point(d.element, degree=args.weight - 1)
    report = {
        "scheme": args.scheme,
        "field": T.label(),
        "function": str(g),
        "support": [
            {"place": str(x), "value": str(t.element), "generator": str(t.generator)} for x, t in
            ((x, d.element.values[x]) for x in d.element.support())
        ],
        "pushforward": str(pf.total),
        "contributions": _push_report(pf),
    }
    if args.scheme == "P1":
        report["reciprocity_holds"] = pf.total.is_zero()
        if not pf.total.is_zero():
            raise Failed(report)
    return report, str(d) + f"\npushforward: {pf.total}"


def cmd_degree_lemma(args):
    F = _field(args.field)
    pf = degree_lemma(F, args.n)
    expected = MWElem.angle(F, F.neg(F.one()))
    ok = pf.total == expected
    report = {
        "field": F.label(),
        "n": args.n,
        "value": str(pf.total),
        "expected": str(expected),
        "holds": ok,
        "contributions": _push_report(pf),
    }
    if not ok:
        raise Failed(report)
    return report, f"{pf.total} = <-1> = {expected}"


def cmd_reciprocity(args):
    F = _field(args.field)
    rng = random.Random(args.seed)
    deg = 6 if F.form_kind == "finite" else 3
    res = suites.suite_reciprocity(rng, args.trials, fields=[(F, args.trials, deg)])
    report = res.to_json() | {"seed": args.seed, "field": F.label(), "trials": args.trials}
    if not res.ok:
        raise Failed(report)
    return report, f"reciprocity: {args.trials} functions over {F.label()}, all pushforwards 0"


def cmd_contraction(args):
    T = _function_field(args.field)
    e = _expr(T, args.expression)
    try:
        c = contraction_decompose(e)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = check_reconstruction(e, c)
    report = {"field": T.label(), "input": str(e), "constant": str(c.constant), "slope": str(c.slope), "reconstructs": ok}
    if not ok:
        raise Failed(report)
    return report, f"a = {c.constant}\nb = {c.slope}"


def _load_corr(text):
    try:
        if text.startswith("{"):
            return cr.Correspondence.from_json(text)
        with open(text) as fh:
            return cr.Correspondence.from_json(fh.read())
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read correspondence {text!r}: {exc}") from exc


def cmd_corr(args):
    if args.corr_command == "compose":
        second, first = _load_corr(args.second), _load_corr(args.first)
        try:
            out = cr.compose(second, first)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return out.to_json(), str(out)
    if args.corr_command == "identity":
        A = cr.EtaleAlg(_field(args.field), tuple(args.degrees))
        out = cr.identity(A)
        return out.to_json(), str(out)
    # check-laws
    F = _field(args.field)
    if F.form_kind != "finite":
        raise UsageError("correspondences are implemented over finite fields")
    res = suites.suite_correspondences(random.Random(args.seed), args.trials, fields=[F])
    report = res.to_json() | {"seed": args.seed, "field": F.label(), "trials": args.trials}
    if not res.ok:
        raise Failed(report)
    return report, f"category laws hold on {args.trials} random triples over {F.label()}"


def cmd_suite(args):
    names = list(suites.SUITES) if args.name == "all" else [args.name]
    if any(n not in suites.SUITES for n in names):
        raise UsageError(f"unknown suite {args.name!r}; choose from {', '.join(suites.SUITES)} or all")
    reports = []
    ok = True
    lines = []
    for name in names:
        fn = suites.SUITES[name]
        kwargs = {}
        if args.trials is not None:
            kwargs["trials"] = args.trials
        if args.field:
            F = _field(args.field)
            kwargs["fields"] = _suite_fields(name, F)
        res = fn(random.Random(args.seed), **kwargs)
        rep = res.to_json()
        rep.pop("elapsed", None)
        reports.append(rep)
        ok = ok and res.ok
        lines.append(f"{'PASS' if res.ok else 'FAIL'} {name}: {res.checks} checks" + "".join(f"\n  {m}" for m in res.failures))
    report = {"seed": args.seed, "suites": reports}
    if not ok:
        raise Failed(report)
    return report, "\n".join(lines)


def _suite_fields(name, F):
    if name == "degree-lemma":
        return [(F, 4 if F.form_kind == "finite" else 2)]
    if name == "reciprocity":
        return [(F, 300, 6 if F.form_kind == "finite" else 3)]
    if name == "transfers":
        if not hasattr(F, "modulus"):
            raise UsageError("the transfers suite needs an extension such as GF(9)")
    return [F]


# -- parser --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--bound", type=int, default=6, help="cap for the fundamental ideal filtration")

    p = _Parser(prog="mwkit", description="Milnor-Witt K-theory computations.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("normalize", parents=[common], help="evaluate an expression to its normal form")
    s.add_argument("expression")
    s.add_argument("--field", default="QQ")
    s.set_defaults(fn=cmd_normalize)

    for name, fn in (("residue", cmd_residue), ("specialize", cmd_specialize)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("expression")
        s.add_argument("--field", required=True, help='a function field such as "GF(3)(t)"')
        s.add_argument("--place", required=True, help='monic irreducible such as "t+1", or "inf"')
        s.add_argument("--uniformizer", default=None)
        s.set_defaults(fn=fn)

    s = sub.add_parser("transfer", parents=[common], help="transfers along a finite extension")
    s.add_argument("expression")
    s.add_argument("--field", required=True)
    s.set_defaults(fn=cmd_transfer)

    s = sub.add_parser("divisor", parents=[common])
    s.add_argument("function")
    s.add_argument("--scheme", choices=["A1", "Gm", "P1"], default="P1")
    s.add_argument("--field", required=True)
    s.add_argument("--weight", type=int, default=1)
    s.set_defaults(fn=cmd_divisor)

    s = sub.add_parser("degree-lemma", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--field", required=True)
    s.set_defaults(fn=cmd_degree_lemma)

    s = sub.add_parser("reciprocity", parents=[common])
    s.add_argument("--trials", type=int, default=300)
    s.add_argument("--field", required=True)
    s.set_defaults(fn=cmd_reciprocity)

    s = sub.add_parser("contraction", parents=[common])
    s.add_argument("expression")
    s.add_argument("--field", required=True)
    s.set_defaults(fn=cmd_contraction)

    s = sub.add_parser("corr", parents=[common], help="finite MW-correspondences")
    csub = s.add_subparsers(dest="corr_command", parser_class=_Parser, required=True)
    c = csub.add_parser("compose", parents=[common], help="SECOND . FIRST (JSON text or file paths)")
    c.add_argument("second")
    c.add_argument("first")
    c = csub.add_parser("identity", parents=[common])
    c.add_argument("--field", required=True)
    c.add_argument("degrees", type=int, nargs="+")
    c = csub.add_parser("check-laws", parents=[common])
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--field", required=True)
    s.set_defaults(fn=cmd_corr)

    s = sub.add_parser("suite", parents=[common], help="run a property suite")
    s.add_argument("name", help="one of: " + ", ".join(suites.SUITES) + ", all")
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--field", default=None)
    s.set_defaults(fn=cmd_suite)
    return p


def _run_one(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "fn", None):
        raise UsageError("a subcommand is required")
    payload = {"schema": SCHEMA, "command": args.command}
    try:
        report, text = args.fn(args)
        payload.update(ok=True, result=report)
        code = 0
    except Failed as exc:
        payload.update(ok=False, result=exc.report)
        text = "verification failed:\n" + json.dumps(exc.report, indent=2, sort_keys=True, default=str)
        code = 1
    return code, payload, text, args.json


def _substitute(word, bindings):
    for name in sorted(bindings, key=len, reverse=True):
        word = word.replace("$" + name, bindings[name])
    return word


def run_session(path, out=None) -> int:
    """Replay a session file: one command per line, ``field F`` sets the default
    field, ``let NAME = TEXT`` binds ``$NAME`` and ``seed N`` sets the seed."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read session {path!r}: {exc}") from exc
    field, seed, bindings = None, DEFAULT_SEED, {}
    results = []
    worst = 0
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        words = shlex.split(line)
        if words[0] != "let":
            words = [_substitute(w, bindings) for w in words]
        if words[0] == "field":
            field = " ".join(words[1:])
            continue
        if words[0] == "seed":
            seed = int(words[1])
            continue
        if words[0] == "let":
            name, _, value = line[3:].partition("=")
            bindings[name.strip()] = value.strip()
            continue
        if field and "--field" not in words and words[0] not in ("suite", "corr"):
            words += ["--field", field]
        if "--seed" not in words:
            words += ["--seed", str(seed)]
        try:
            code, payload, _, _ = _run_one(words)
        except UsageError as exc:
            code, payload = 2, {"schema": SCHEMA, "command": words[0], "ok": False, "error": str(exc)}
        payload["line"] = lineno
        results.append(payload)
        worst = max(worst, code)
    print(json.dumps({"schema": SCHEMA, "session": results}, indent=2, sort_keys=True, default=str), file=out or sys.stdout)
    return worst


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if len(argv) == 1 and argv[0].startswith("@"):
            return run_session(argv[0][1:])
        code, payload, text, as_json = _run_one(argv)
    except UsageError as exc:
        print(f"mwkit: error: {exc}", file=sys.stderr)
        return 2
    except (FieldError, LiftError) as exc:
        print(f"mwkit: error: {exc}", file=sys.stderr)
        return 2
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())

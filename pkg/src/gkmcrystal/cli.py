"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 admissibility
error, 4 identity mismatch, 5 budget exceeded.  Errors are printed to stderr
as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import load_fixture
from .cartan import (DatumError, IndexWord, UnknownWeight, Weight, format_label, format_weight,
                     load_datum, parse_base, weight_to_json)
from .crystal import (DEFAULT_NODE_BUDGET, CopiesExceeded, branch, character, generate, prv_check,
                      tensor_decompose)
from .demazure import demazure_character, demazure_crystal_words, verify_theorem4
from .monoid import (DEFAULT_REWRITE_BUDGET, AdmissibilityError, BudgetExceeded, MonoidWord,
                     WordSyntaxError, to_minimal_dominant_reduced)
from .pathmodel import wt
from .suites import SUITES, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_ADMISSIBLE, EXIT_MISMATCH, EXIT_BUDGET = range(6)


class InputError(ValueError):
    pass


def load_any_datum(spec: str):
    """A datum file path, or the name of a bundled fixture."""
    if os.path.exists(spec):
        return load_datum(spec)
    name = os.path.splitext(os.path.basename(spec))[0]
    try:
        return load_fixture(name)
    except FileNotFoundError:
        raise InputError(f"no datum file or bundled fixture named {spec!r}") from None


def parse_weight(datum, text: str) -> Weight:
    """``lam``, ``lam+mu`` or ``2*lam`` over the named weights of the datum."""
    if text is None:
        raise InputError("--weight is required")
    try:
        base = parse_base(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse weight {text!r}") from None
    for name, n in base:
        if not datum.has_base(name):
            raise UnknownWeight(name)
        if n < 0 or n.denominator != 1:
            raise InputError(f"weight {text!r} must be a nonnegative integer combination")
    return Weight(base, ())


def _character_json(datum, ch) -> list:
    return ch.to_json(datum)


def _character_text(datum, ch) -> str:
    return "\n".join(f"{c}\t{format_weight(w)}" for w, c in ch.sorted_terms(datum)) or "0"


def _emit(args, payload, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _form(datum, lam, args):
    word = MonoidWord.parse(args.word or "")
    return to_minimal_dominant_reduced(datum, word, lam, budget=args.rewrite_budget)


def cmd_crystal(args) -> int:
    datum = load_any_datum(args.datum)
    lam = parse_weight(datum, args.weight)
    g = generate(datum, lam, args.depth, node_budget=args.node_budget)
    lines = [f"{g.node_depth(p)}\t{format_weight(wt(p))}\t"
             + (" ".join(f"f{format_label(x)}" for x in reversed(g.word(p).letters)) or "1")
             for p in g.sorted_nodes()]
    _emit(args, g.to_json(), f"{len(g)} nodes, {len(g.edges)} edges\n" + "\n".join(lines))
    return EXIT_OK


def cmd_char(args) -> int:
    datum = load_any_datum(args.datum)
    lam = parse_weight(datum, args.weight)
    ch = character(datum, lam, args.depth, node_budget=args.node_budget)
    _emit(args, _character_json(datum, ch), _character_text(datum, ch))
    return EXIT_OK


def cmd_demazure_char(args) -> int:
    datum = load_any_datum(args.datum)
    lam = parse_weight(datum, args.weight)
    form = _form(datum, lam, args)
    ch = demazure_character(datum, lam, form)
    payload = {"expression": form.to_json(), "character": _character_json(datum, ch)}
    text = f"w = {str(form) or '1'}\n" + _character_text(datum, ch)
    code = EXIT_OK
    if args.verify:
        rep = verify_theorem4(datum, lam, form)
        payload["verification"] = rep.to_json()
        text += f"\nverification: {rep.status}"
        if not rep.ok:
            code = EXIT_MISMATCH
    _emit(args, payload, text)
    return code


def cmd_demazure_crystal(args) -> int:
    datum = load_any_datum(args.datum)
    lam = parse_weight(datum, args.weight)
    form = _form(datum, lam, args)
    paths = demazure_crystal_words(datum, lam, form)
    order = sorted(paths, key=lambda p: (len(paths[p]), p.key))
    nodes = [{"weight": weight_to_json(wt(p)),
              "word": [format_label(x) for x in paths[p].letters],
              "path": p.to_json()} for p in order]
    text = [f"w = {str(form) or '1'}", f"{len(order)} paths"]
    text += [f"{format_weight(wt(p))}\t"
             + (" ".join(f"f{format_label(x)}" for x in reversed(paths[p].letters)) or "1")
             for p in order]
    _emit(args, {"expression": form.to_json(), "nodes": nodes}, "\n".join(text))
    return EXIT_OK


def _pairings(datum, w: Weight) -> str:
    return "(" + ",".join(str(v) for v in datum.pairing_vector(w)) + ")"


def _decomposition_output(args, datum, dec, header: str) -> int:
    payload = dec.to_json(datum)
    lines = [header] + [f"{n}\t{format_weight(w)}\t{_pairings(datum, w)}" for w, n in dec.components]
    code = EXIT_OK
    if dec.verified is not None:
        lines.append(f"character identity: {'pass' if dec.verified else 'fail'}")
        if not dec.verified:
            code = EXIT_MISMATCH
    _emit(args, payload, "\n".join(lines))
    return code


def cmd_tensor(args) -> int:
    datum = load_any_datum(args.datum)
    lam = parse_weight(datum, args.left)
    mu = parse_weight(datum, args.right)
    dec = tensor_decompose(datum, lam, mu, args.depth, verify=args.verify,
                           node_budget=args.node_budget)
    return _decomposition_output(args, datum, dec, f"components down to depth {args.depth}")


def _levi(datum, text: str) -> tuple:
    parts = [p for p in text.replace(",", " ").split() if p]
    for p in parts:
        if p not in datum.indices:
            raise InputError(f"unknown index {p!r} in --levi")
    return tuple(parts)


def cmd_branch(args) -> int:
    datum = load_any_datum(args.datum)
    lam = parse_weight(datum, args.weight)
    S = _levi(datum, args.levi)
    dec = branch(datum, lam, S, args.depth, verify=args.verify, node_budget=args.node_budget)
    label = "{" + ",".join(S) + "}"
    return _decomposition_output(args, datum, dec, f"components for S={label} down to depth {args.depth}")


def cmd_prv(args) -> int:
    datum = load_any_datum(args.datum)
    lam = parse_weight(datum, args.left)
    mu = parse_weight(datum, args.right)
    wi = IndexWord(MonoidWord.parse(args.word_left).application_order())
    wj = IndexWord(MonoidWord.parse(args.word_right).application_order())
    rep = prv_check(datum, lam, mu, wi, wj, args.depth, node_budget=args.node_budget)
    text = (f"nu = {format_weight(rep.nu)}\nstatus: {rep.status}\n{rep.note}\n"
            + "\n".join(f"pairing {format_label(k)}: {v}" for k, v in rep.nu_bar_pairings.items()))
    _emit(args, rep.to_json(), text)
    return EXIT_VERIFY if rep.status == "fail" else EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    report = run_suite(args.suite, args.depth)
    lines = [f"{c['status'].upper():5} {c['check']}" for c in report["checks"]]
    lines.append(f"suite {args.suite}: {'pass' if report['ok'] else 'fail'}")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if report["ok"] else EXIT_VERIFY


def _common(p: argparse.ArgumentParser, datum: bool = True) -> None:
    if datum:
        p.add_argument("--datum", required=True, help="datum JSON file or bundled fixture name")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET,
                   help=f"maximum crystal size (default {DEFAULT_NODE_BUDGET})")
    p.add_argument("--rewrite-budget", type=int, default=DEFAULT_REWRITE_BUDGET,
                   help=f"maximum words explored when rewriting (default {DEFAULT_REWRITE_BUDGET})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gkmcrystal",
                                     description="Path-model crystals and Demazure characters.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crystal", help="generate a truncated crystal graph")
    _common(p)
    p.add_argument("--weight", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(run=cmd_crystal)

    p = sub.add_parser("char", help="truncated character of an irreducible module")
    _common(p)
    p.add_argument("--weight", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(run=cmd_char)

    for name, run, hlp in (("demazure-char", cmd_demazure_char, "Demazure character by operators"),
                           ("demazure-crystal", cmd_demazure_crystal, "paths of a Demazure crystal")):
        p = sub.add_parser(name, help=hlp)
        _common(p)
        p.add_argument("--weight", required=True)
        p.add_argument("--word", default="", help='written-order word such as "r1 r2^2"')
        if name == "demazure-char":
            p.add_argument("--verify", action="store_true",
                           help="compare with the Demazure crystal enumeration")
        p.set_defaults(run=run)

    p = sub.add_parser("tensor", help="decompose a tensor product")
    _common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="check the truncated character identity")
    p.set_defaults(run=cmd_tensor)

    p = sub.add_parser("branch", help="restrict to a Levi subalgebra")
    _common(p)
    p.add_argument("--weight", required=True)
    p.add_argument("--levi", default="", help='comma separated indices, "" for the Cartan part')
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="check the truncated character identity")
    p.set_defaults(run=cmd_branch)

    p = sub.add_parser("prv", help="dominance criterion for extremal tensor components")
    _common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--word-left", default="", help="word acting on the left weight")
    p.add_argument("--word-right", default="", help="word acting on the right weight")
    p.add_argument("--depth", type=int, default=6)
    p.set_defaults(run=cmd_prv)

    p = sub.add_parser("verify", help="run a verification suite")
    _common(p, datum=False)
    p.add_argument("--suite", required=True, help=", ".join(SUITES))
    p.add_argument("--depth", type=int, default=None, help="override the suite's truncation depth")
    p.set_defaults(run=cmd_verify)
    return parser


def _fail(code: int, kind: str, message: str, **extra) -> int:
    body = {"error": kind, "message": message}
    body.update({k: v for k, v in extra.items() if v is not None})
    sys.stderr.write(json.dumps(body) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if getattr(args, "depth", None) is not None and args.depth < 0:
        return _fail(EXIT_INPUT, "input", "--depth must be nonnegative")
    try:
        return args.run(args)
    except AdmissibilityError as exc:
        return _fail(EXIT_ADMISSIBLE, "admissibility", str(exc),
                     condition=exc.condition, position=exc.position)
    except (BudgetExceeded, CopiesExceeded) as exc:
        return _fail(EXIT_BUDGET, "budget", str(exc))
    except UnknownWeight as exc:
        return _fail(EXIT_INPUT, "input", f"unknown weight {exc.args[0]!r}")
    except DatumError as exc:
        return _fail(EXIT_INPUT, "datum", str(exc),
                     entry=list(exc.entry) if isinstance(exc.entry, tuple) else exc.entry)
    except (InputError, WordSyntaxError, json.JSONDecodeError, OSError, ValueError) as exc:
        return _fail(EXIT_INPUT, "input", str(exc))


if __name__ == "__main__":
    sys.exit(main())

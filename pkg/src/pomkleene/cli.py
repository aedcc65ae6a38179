"""Command-line interface.

Exit codes: 0 success, 1 bad input, 2 state cap exceeded, 3 automaton fails a
structural requirement (not fork-acyclic, not closed).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import automaton as au
from . import pomset as pm
from .derivatives import expr_to_pa
from .expr import (Dot, Expr, ExprSyntaxError, Letter, One, Parallel, Plus,
                   Star, Sum, Zero, enumerate_language, is_empty, normalize,
                   nullable, parse)
from .extraction import pa_to_expr

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_STRUCTURE = 0, 1, 2, 3


@dataclass
class CliConfig:
    max_size: int = 6
    state_cap: int = au.DEFAULT_CAP
    format: str | None = None

    def __post_init__(self):
        if self.max_size < 0:
            raise ValueError("--max-size must be >= 0")
        if self.state_cap < 1:
            raise ValueError("--state-cap must be >= 1")


class _Fail(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def ast_text(e: Expr) -> str:
    """S-expression form of the syntax tree."""
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, One):
        return "1"
    if isinstance(e, Letter):
        return e.name
    if isinstance(e, Star):
        return f"(star {ast_text(e.body)})"
    if isinstance(e, Sum):
        return "(sum" + "".join(" " + ast_text(t) for t in e.terms) + ")"
    op = {Plus: "plus", Dot: "dot", Parallel: "par"}[type(e)]
    return f"({op} {ast_text(e.left)} {ast_text(e.right)})"


def ast_json(e: Expr):
    if isinstance(e, (Zero, One)):
        return {"op": str(e)}
    if isinstance(e, Letter):
        return {"op": "letter", "name": e.name}
    if isinstance(e, Star):
        return {"op": "star", "args": [ast_json(e.body)]}
    if isinstance(e, Sum):
        return {"op": "sum", "args": [ast_json(t) for t in e.terms]}
    op = {Plus: "plus", Dot: "dot", Parallel: "par"}[type(e)]
    return {"op": op, "args": [ast_json(e.left), ast_json(e.right)]}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _expr(text: str) -> Expr:
    try:
        return parse(text)
    except ExprSyntaxError as exc:
        raise _Fail(str(exc), EXIT_INPUT) from None


def _pomset(text: str):
    try:
        return pm.parse_pomset(text)
    except pm.PomsetSyntaxError as exc:
        raise _Fail(f"pomset {exc}", EXIT_INPUT) from None


def _load_pa(path: str) -> au.PomsetAutomaton:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise _Fail(f"cannot read {path}: {exc.strerror}", EXIT_INPUT) from None
    except json.JSONDecodeError as exc:
        raise _Fail(f"invalid JSON in {path}: {exc}", EXIT_INPUT) from None
    try:
        return au.PomsetAutomaton.from_json(data)
    except au.AutomatonError as exc:
        raise _Fail(str(exc), EXIT_INPUT) from None


def _compile(e: Expr, cfg: CliConfig):
    try:
        return expr_to_pa(e, cfg.state_cap)
    except au.CapExceeded as exc:
        raise _Fail(str(exc), EXIT_CAP) from None


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


def cmd_parse(args, cfg, out):
    e = _expr(args.expr)
    out.write((_dump(ast_json(e)) if cfg.format == "json" else ast_text(e)) + "\n")


def cmd_normalize(args, cfg, out):
    out.write(f"{normalize(_expr(args.expr))}\n")


def cmd_nullable(args, cfg, out):
    out.write(_bool(nullable(_expr(args.expr))) + "\n")


def cmd_empty(args, cfg, out):
    out.write(_bool(is_empty(_expr(args.expr))) + "\n")


def cmd_enum(args, cfg, out):
    sample = sorted(enumerate_language(_expr(args.expr), cfg.max_size),
                    key=lambda u: (pm.size(u), u.serialize()))
    if cfg.format == "json":
        out.write(_dump([u.serialize() for u in sample]) + "\n")
    else:
        for u in sample:
            out.write(u.serialize() + "\n")


def cmd_member(args, cfg, out):
    e = _expr(args.expr)
    u = _pomset(args.pomset)
    compiled = _compile(e, cfg)
    out.write(_bool(compiled.accepts(u)) + "\n")


def cmd_compile(args, cfg, out):
    compiled = _compile(_expr(args.expr), cfg)
    if cfg.format == "dot":
        out.write(compiled.pa.to_dot(compiled.start))
        return
    data = compiled.pa.to_json()
    data["start"] = compiled.pa.names[compiled.start]
    out.write(_dump(data) + "\n")


def cmd_dot(args, cfg, out):
    if args.pa:
        pa = _load_pa(args.pa)
        start = pa.index(args.state) if args.state else None
        out.write(pa.to_dot(start))
    elif args.expr is not None:
        compiled = _compile(_expr(args.expr), cfg)
        out.write(compiled.pa.to_dot(compiled.start))
    else:
        raise _Fail("dot needs an expression or --pa FILE", EXIT_INPUT)


def cmd_extract(args, cfg, out):
    pa = _load_pa(args.automaton)
    try:
        q = pa.index(args.state)
    except au.AutomatonError as exc:
        raise _Fail(str(exc), EXIT_INPUT) from None
    try:
        e = pa_to_expr(pa, q)
    except au.NotForkAcyclic as exc:
        raise _Fail(f"not fork-acyclic: {exc}", EXIT_STRUCTURE) from None
    out.write(f"{e}\n")


def cmd_equiv(args, cfg, out):
    e, f = _expr(args.left), _expr(args.right)
    bound = cfg.max_size if args.bound is None else args.bound
    left, right = enumerate_language(e, bound), enumerate_language(f, bound)
    diff = sorted(left ^ right, key=lambda u: (pm.size(u), u.serialize()))
    if not diff:
        out.write(f"equivalent up to {bound}\n")
        return
    u = diff[0]
    side = "left" if u in left else "right"
    out.write(f"counterexample: {u.serialize()} (only in {side})\n")


def cmd_check_pa(args, cfg, out):
    try:
        with open(args.automaton) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _Fail(f"cannot load {args.automaton}: {exc}", EXIT_INPUT) from None
    try:
        pa = au.PomsetAutomaton.from_json(data)
    except au.NotTotal as exc:
        out.write(f"totality: FAIL ({exc})\n")
        raise _Fail("automaton is not total", EXIT_INPUT) from None
    except au.AutomatonError as exc:
        raise _Fail(str(exc), EXIT_INPUT) from None
    out.write("totality: ok\n")
    closed = au.is_closed(pa, pa.states)
    out.write(f"closed: {'ok' if closed else 'FAIL'}\n")
    try:
        order = au.fork_order(pa)
    except au.NotForkAcyclic as exc:
        out.write(f"fork-acyclic: FAIL ({exc})\n")
        raise _Fail("automaton is not fork-acyclic", EXIT_STRUCTURE) from None
    out.write("fork-acyclic: ok\n")
    names = pa.names
    pairs = sorted((names[r], names[q]) for r, q in order.pairs)
    out.write(f"fork order ({len(pairs)} pairs):\n")
    for r, q in pairs:
        out.write(f"  {r} < {q}\n")
    if not closed:
        raise _Fail("state set is not closed", EXIT_STRUCTURE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-size", type=int, default=6,
                        help="largest pomset size to enumerate (default 6)")
    common.add_argument("--state-cap", type=int, default=au.DEFAULT_CAP,
                        help="abort compilation past this many states")
    common.add_argument("--format", choices=["text", "json", "dot"], default=None)

    parser = argparse.ArgumentParser(
        prog="pomkleene",
        description="Series-rational expressions and pomset automata.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("parse", cmd_parse, "print the syntax tree").add_argument("expr")
    add("normalize", cmd_normalize, "print the congruence normal form").add_argument("expr")
    add("nullable", cmd_nullable, "does the language contain the empty pomset").add_argument("expr")
    add("empty", cmd_empty, "is the language empty").add_argument("expr")
    add("enum", cmd_enum, "list the language up to --max-size").add_argument("expr")
    p = add("member", cmd_member, "decide membership through the compiled automaton")
    p.add_argument("expr")
    p.add_argument("pomset")
    add("compile", cmd_compile, "compile to an automaton (JSON or --format dot)").add_argument("expr")
    p = add("extract", cmd_extract, "expression for a state of an automaton")
    p.add_argument("automaton")
    p.add_argument("state")
    p = add("equiv", cmd_equiv, "compare languages up to a size bound")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--bound", type=int, default=None)
    add("check-pa", cmd_check_pa, "check totality, closure and fork-acyclicity").add_argument("automaton")
    p = add("dot", cmd_dot, "graphviz rendering of an expression's automaton or a JSON automaton")
    p.add_argument("expr", nargs="?")
    p.add_argument("--pa", help="automaton JSON file to render instead")
    p.add_argument("--state", help="mark this state of --pa as the start")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = CliConfig(args.max_size, args.state_cap, args.format)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        args.func(args, cfg, out)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""``roommates`` command-line front end.

Exit codes: 0 success, 1 no stable matching, 2 precondition violated,
3 parse or usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from collections.abc import Iterable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import TextIO

from .approx import approximate_report
from .errors import (
    NO_STABLE_MATCHING,
    DomainMismatch,
    InstanceTooLarge,
    NoStableMatchingError,
    NotBipartite,
    NotPerfectCore,
    NotReducible,
    ParseError,
    PreconditionViolated,
    RoommatesError,
)
from .formats import format_instance, parse_instance, parse_matching, parse_point, parse_weights
from .irving import find_stable_matching, perfect_core, phase_one
from .model import Edge, PreferenceSystem, is_stable
from .oracle import brute_optimum, enumerate_stable_matchings
from .polytope import FractionalPoint, PolytopeVariant, membership, variant_domain
from .reduction import compute_em, is_bipartite_reducible, reduce_to_h
from .solver import optimize_exact_report

EXIT_OK, EXIT_NO_STABLE, EXIT_PRECONDITION, EXIT_USAGE = 0, 1, 2, 3

PRECONDITION_ERRORS = (
    PreconditionViolated,
    NotReducible,
    NotPerfectCore,
    NotBipartite,
    InstanceTooLarge,
    DomainMismatch,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        raise UsageError(message)


def rat(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def edges_json(es: Iterable[Edge]) -> list[list[int]]:
    return [[u, v] for u, v in sorted(es)]


def edges_text(es: Iterable[Edge]) -> str:
    return " ".join(f"{u}-{v}" for u, v in sorted(es))


class _Run:
    """State of one invocation: the report under construction."""

    def __init__(self, command: str, out: TextIO, as_json: bool):
        self.command = command
        self.out = out
        self.as_json = as_json
        self.instance: dict | None = None
        self.result: dict = {}
        self.warnings: list[str] = []
        self.stats: dict = {}
        self.lines: list[str] = []
        self.t0 = time.perf_counter()

    def load(self, path: str) -> PreferenceSystem:
        P = parse_instance(_read(path))
        canon = format_instance(P)
        self.instance = {
            "digest": hashlib.sha256(canon.encode()).hexdigest()[:16],
            "agents": len(P),
            "edges": len(P.edges),
        }
        return P

    def say(self, line: str) -> None:
        self.lines.append(line)

    def finish(self, status: str, code: int, error: str | None = None) -> int:
        self.stats["elapsed_seconds"] = round(time.perf_counter() - self.t0, 6)
        if self.as_json:
            report = {
                "command": self.command,
                "status": status,
                "instance": self.instance,
                "result": self.result,
                "warnings": self.warnings,
                "stats": self.stats,
            }
            if error is not None:
                report["error"] = error
            self.out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        else:
            for line in self.lines:
                self.out.write(line + "\n")
            for wmsg in self.warnings:
                self.out.write(f"warning: {wmsg}\n")
            if error is not None:
                self.out.write(f"error: {error}\n")
        return code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# -- subcommands ------------------------------------------------------------------------


def cmd_solve(run: _Run, args) -> int:
    P = run.load(args.instance)
    M = find_stable_matching(P)
    if M is NO_STABLE_MATCHING:
        run.result = {"stable_matching": None}
        run.say("no stable matching")
        return run.finish("no_stable_matching", EXIT_NO_STABLE)
    run.result = {"stable_matching": edges_json(M)}
    run.say(f"stable matching: {edges_text(M)}")
    return run.finish("ok", EXIT_OK)


def cmd_reduce(run: _Run, args) -> int:
    P = run.load(args.instance)
    run.result["emit"] = args.emit
    if args.emit == "gi":
        res = phase_one(P)
        run.result["instance"] = {str(a): list(res.surviving.prefs(a)) for a in res.surviving.agents}
        run.result["removed"] = edges_json(res.removed)
        run.say(format_instance(res.surviving).rstrip("\n"))
        return run.finish("ok", EXIT_OK)
    core = perfect_core(P)
    if len(core) < len(P):
        run.warnings.append(f"{len(P) - len(core)} never-matched agent(s) dropped before reduction")
    red = reduce_to_h(core)
    if args.emit == "h":
        run.result["instance"] = {str(a): list(red.h.prefs(a)) for a in red.h.agents}
        run.say(format_instance(red.h).rstrip("\n"))
    elif args.emit == "em":
        run.result["in_em"] = edges_json(red.em.in_em)
        run.result["out_em"] = edges_json(red.em.out_em)
        run.say("\n".join(f"{u} {v}" for u, v in sorted(red.em.in_em)))
    else:
        run.result["removal_log"] = [[u, v] for u, v in red.removal_log]
        run.say("\n".join(f"{u} {v}" for u, v in red.removal_log))
    run.stats["removed_edges"] = len(red.removal_log)
    return run.finish("ok", EXIT_OK)


def cmd_check(run: _Run, args) -> int:
    P = run.load(args.instance)
    M = parse_matching(_read(args.matching), P)
    verdict = is_stable(P, M)
    run.result = {
        "matching": edges_json(M),
        "stable": verdict.stable,
        "blocking_edge": list(verdict.witness) if verdict.witness else None,
    }
    if verdict.stable:
        run.say("stable")
    else:
        u, v = verdict.witness
        run.say(f"unstable: blocking edge {u}-{v}")
    return run.finish("ok", EXIT_OK)


def cmd_reducible(run: _Run, args) -> int:
    P = run.load(args.instance)
    verdict = is_bipartite_reducible(perfect_core(P))
    run.result = {
        "reducible": verdict.reducible,
        "parts": [sorted(p) for p in verdict.parts] if verdict.parts else None,
        "odd_cycle": list(verdict.odd_cycle) if verdict.odd_cycle else None,
    }
    if verdict:
        a, b = verdict.parts
        run.say(f"reducible: yes (parts {' '.join(map(str, sorted(a)))} | {' '.join(map(str, sorted(b)))})")
    else:
        run.say(f"reducible: no (odd cycle {'-'.join(map(str, verdict.odd_cycle))})")
    return run.finish("ok", EXIT_OK)


def cmd_optimize(run: _Run, args) -> int:
    P = run.load(args.instance)
    w = parse_weights(_read(args.weights), P)
    if w.missing:
        run.warnings.append(f"{len(w.missing)} edge(s) without weight default to 0")
    direction = "max" if args.max else "min"
    if args.method == "approx" and args.max:
        raise UsageError("--method approx only minimizes")
    run.result = {"method": args.method, "direction": direction}
    if args.method == "exact":
        res = optimize_exact_report(P, w, direction)
        M, weight = res.matching, res.weight
        run.stats["rotations"] = res.rotations
    elif args.method == "approx":
        res = approximate_report(P, w)
        M, weight = res.matching, res.weight
        run.result["bound"] = rat(res.bound)
        run.result["path"] = res.path
    else:
        out = brute_optimum(P, w, direction)
        if out is NO_STABLE_MATCHING:
            raise NoStableMatchingError("instance has no stable matching")
        M, weight = out
    run.result["matching"] = edges_json(M)
    run.result["weight"] = rat(weight)
    run.say(f"matching: {edges_text(M)}")
    run.say(f"weight: {weight}")
    if "bound" in run.result:
        run.say(f"bound: {Fraction(run.result['bound'])} ({run.result['path']})")
    return run.finish("ok", EXIT_OK)


def cmd_enumerate(run: _Run, args) -> int:
    P = run.load(args.instance)
    if args.limit is not None and args.limit < 0:
        raise UsageError("--limit must be nonnegative")
    found = enumerate_stable_matchings(P, limit=args.limit)
    ms = list(found)
    run.result = {"count": len(ms), "matchings": [edges_json(M) for M in ms]}
    for M in ms:
        run.say(edges_text(M) or "(empty matching)")
    run.say(f"{len(ms)} stable matching(s)")
    if not ms:
        return run.finish("no_stable_matching", EXIT_NO_STABLE)
    return run.finish("ok", EXIT_OK)


def cmd_polytope(run: _Run, args) -> int:
    P = run.load(args.instance)
    coords = parse_point(_read(args.point))
    variant = PolytopeVariant(args.variant)
    em = compute_em(P) if variant.restricted else None
    domain = variant_domain(P, variant, em)
    x = FractionalPoint(coords, domain)
    verdict = membership(P, variant, x, em)
    run.result = {
        "variant": variant.value,
        "member": verdict.member,
        "violations": [
            {
                "kind": v.kind,
                "index": list(v.index) if isinstance(v.index, tuple) else v.index,
                "lhs": rat(v.lhs),
            }
            for v in verdict.violations
        ],
    }
    run.say("member" if verdict.member else f"not a member: {len(verdict.violations)} violated constraint(s)")
    for v in verdict.violations:
        run.say(f"  {v}")
    return run.finish("ok", EXIT_OK)


COMMANDS = {
    "solve": cmd_solve,
    "reduce": cmd_reduce,
    "check": cmd_check,
    "reducible": cmd_reducible,
    "optimize": cmd_optimize,
    "enumerate": cmd_enumerate,
    "polytope": cmd_polytope,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    parser = _Parser(prog="roommates", description="Stable roommates toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="find a stable matching")
    p.add_argument("instance")

    p = sub.add_parser("reduce", parents=[common], help="phase-one table, H, stable edges or removal log")
    p.add_argument("instance")
    p.add_argument("--emit", choices=["gi", "h", "em", "log"], default="h")

    p = sub.add_parser("check", parents=[common], help="test a matching for stability")
    p.add_argument("instance")
    p.add_argument("matching")

    p = sub.add_parser("reducible", parents=[common], help="decide bipartite reducibility")
    p.add_argument("instance")

    p = sub.add_parser("optimize", parents=[common], help="weighted stable matching")
    p.add_argument("instance")
    p.add_argument("--weights", required=True)
    p.add_argument("--max", action="store_true", help="maximize instead of minimize")
    p.add_argument("--method", choices=["exact", "approx", "brute"], default="exact")

    p = sub.add_parser("enumerate", parents=[common], help="list all stable matchings (small instances)")
    p.add_argument("instance")
    p.add_argument("--limit", type=int)

    p = sub.add_parser("polytope", parents=[common], help="test a point against a polytope")
    p.add_argument("instance")
    p.add_argument("--point", required=True)
    p.add_argument("--variant", choices=[v.value for v in PolytopeVariant], default="fsm")
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out if out is not None else sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _Run(next((a for a in argv if a in COMMANDS), ""), out, as_json).finish("usage_error", EXIT_USAGE, str(exc))
    state = _Run(args.command, out, args.json)
    try:
        return COMMANDS[args.command](state, args)
    except (ParseError, UsageError) as exc:
        return state.finish("usage_error", EXIT_USAGE, str(exc))
    except NoStableMatchingError as exc:
        state.say("no stable matching")
        return state.finish("no_stable_matching", EXIT_NO_STABLE, str(exc))
    except PRECONDITION_ERRORS as exc:
        return state.finish("precondition", EXIT_PRECONDITION, f"{type(exc).__name__}: {exc}")
    except RoommatesError as exc:
        return state.finish("usage_error", EXIT_USAGE, str(exc))


def main() -> None:
    logging.basicConfig(level=logging.ERROR, format="%(levelname)s: %(message)s")
    sys.exit(run())

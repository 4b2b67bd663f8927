"""Command-line entry point: ``queasylab <command> ...``.

Exit codes: 0 ok, 1 usage or invalid input, 2 only censored results,
3 an internal invariant was violated. A JSON ``--config`` file supplies
defaults; explicit flags override it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional, Sequence

from . import metrics, pruning, quantum, reduction
from .complexity import MAX_PROGRAM_LEN_CAP, SearchLimits, UniverseSpec, report
from .machine import hex_to_bits
from .problems import (FAC, PARITY, SAT, FacInstance, all_strings, parse_dimacs, random_kcnf,
                       strings_up_to, emit_dimacs)

EXIT_OK, EXIT_USAGE, EXIT_CENSORED, EXIT_INVARIANT = 0, 1, 2, 3

LANGUAGES = {"parity": PARITY, "fac": FAC, "sat": SAT}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _max_len(v: int) -> int:
    if not 0 <= v <= MAX_PROGRAM_LEN_CAP:
        raise UsageError(f"--max-len {v} refused: resource guard caps program length at "
                         f"{MAX_PROGRAM_LEN_CAP} bits")
    return v


def _resolved(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "config", "out")}


# ------------------------------------------------------------ complexity

def _parse_instance(text: str, language: str):
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            return parse_dimacs(fh.read())
    if language == "fac":
        z = FacInstance.parse(text)
        return z.encode()
    if text.startswith("b:"):
        bits = text[2:]
        if any(c not in "01" for c in bits) or not bits:
            raise ValueError(f"not a bitstring: {bits!r}")
        return bits
    return hex_to_bits(text)


def cmd_complexity(args) -> int:
    try:
        inst = _parse_instance(args.instance, args.language)
    except (ValueError, OSError) as exc:
        raise UsageError(f"invalid instance {args.instance!r}: {exc}") from None
    if not isinstance(inst, str):
        ic = metrics.solver_ic_proxy(inst)
        out = {"mode": "proxy", "instance": args.instance, "language": "sat",
               "variables": inst.variable_count, "clauses": inst.clause_count,
               "ic_proxy": ic, "cd_proxy": metrics.compressor_cd_proxy(metrics.formula_bits(inst)),
               "config": _resolved(args)}
        _write(json.dumps(out, sort_keys=True) + "\n", args.out)
        return EXIT_CENSORED if ic["value"] is None else EXIT_OK
    if not inst:
        raise UsageError("instance must be non-empty")
    universe = (UniverseSpec.up_to_length(len(inst)) if args.universe == "up-to"
                else UniverseSpec.same_length(len(inst)))
    limits = SearchLimits(_max_len(args.max_len), args.budget, universe)
    rep = report(inst, LANGUAGES[args.language], limits)
    values = [rep.c, rep.cd, rep.ic]
    if args.quantum:
        qlim = SearchLimits(_max_len(args.max_len), args.budget, universe)
        qcd = quantum.qcd_t(inst, args.epsilon, qlim)
        qic = quantum.qic_t(inst, LANGUAGES[args.language], args.epsilon, qlim)
        rep.extra.update({"qcd": qcd.value, "qic": qic.value, "epsilon": args.epsilon})
        values += [qcd, qic]
    rep.extra["config"] = _resolved(args)
    _write(rep.to_json() + "\n", args.out)
    return EXIT_CENSORED if all(v.censored for v in values) else EXIT_OK


# ------------------------------------------------------------ reduce

def cmd_reduce(args) -> int:
    if args.invert:
        with open(args.invert, encoding="utf-8") as fh:
            f = parse_dimacs(fh.read())
        try:
            print(reduction.invert_reduction(f))
        except reduction.NotInImage as exc:
            raise UsageError(str(exc)) from None
        return EXIT_OK
    if args.x is None:
        raise UsageError("reduce needs --x (or --invert FILE)")
    try:
        z = FacInstance(args.x, args.a)
        art = reduction.reduce_to_sat(z)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = emit_dimacs(art.formula)
    back = reduction.invert_reduction(parse_dimacs(text))
    _write(text, args.out)
    print(f"inverted: {back}", file=sys.stderr)
    return EXIT_OK if back == z else EXIT_INVARIANT


# ------------------------------------------------------------ prune

def cmd_prune(args) -> int:
    if args.x < 2:
        raise UsageError("--x must be >= 2")
    pool = [pruning.oracle_decider()] + pruning.adversaries(args.adversaries, args.seed)
    try:
        res = pruning.extend_and_prune(args.x, pool, check_premise=True)
    except pruning.PremiseViolation as exc:
        print(f"premise violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    lines = [json.dumps({"config": _resolved(args)}, sort_keys=True)] + res.trace_lines()
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ------------------------------------------------------------ amplify

def _distribution(args) -> dict:
    if args.circuit:
        with open(args.circuit, encoding="utf-8") as fh:
            return quantum.simulate(quantum.parse_circuit(fh.read()))
    if args.dist:
        dist = {}
        for item in args.dist.split(","):
            k, _, v = item.partition(":")
            dist[k.strip()] = float(v)
        return dist
    if not 0 < args.epsilon < 1:
        raise UsageError("--epsilon must lie in (0, 1)")
    if args.epsilon == 0.5:
        return quantum.simulate(quantum.parse_circuit("qubits 1\nmeasure 0\nH 0\n"))
    return {"0": args.epsilon, "1": 1.0 - args.epsilon}


def cmd_amplify(args) -> int:
    try:
        copies = [int(c) for c in args.copies.split(",")]
        dist = _distribution(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    target = args.target
    rows = ["n_copies,j,a,trials,success_rate,failure_rate,failure_bound,binomial_se"]
    for n in copies:
        res = quantum.amplify(dist, target, n, seed=args.seed, trials=args.trials)
        plan = res["plan"]
        fail = 1.0 - res["success_estimate"]
        se = math.sqrt(max(fail * (1 - fail), 0.0) / res["trials"])
        rows.append(f"{n},{plan.j},{plan.a},{res['trials']},{res['success_estimate']:.6f},"
                    f"{fail:.6f},{plan.failure_bound():.6g},{se:.6f}")
    header = "# config: " + json.dumps(_resolved(args), sort_keys=True)
    _write("\n".join([header] + rows) + "\n", args.out)
    return EXIT_OK


# ------------------------------------------------------------ landscape

def _landscape_instances(args) -> list:
    items: list = []
    if args.mode == "exact":
        if args.corpus:
            kind, _, n = args.corpus.partition(":")
            n = int(n)
            items += strings_up_to(n)[1:] if kind == "up-to" else all_strings(n)
        items += [hex_to_bits(h) for h in (args.instances or [])]
    else:
        items += [FacInstance.parse(t) for t in (args.fac or [])]
        if args.random_cnf:
            count, nv, nc = (int(v) for v in args.random_cnf.split(":"))
            items += [random_kcnf(nv, nc, 3, seed=args.seed * 1_000_003 + i) for i in range(count)]
    return items


def cmd_landscape(args) -> int:
    limits = SearchLimits(_max_len(args.max_len), args.budget)
    qlimits = metrics.QuantumLimits(_max_len(args.qmax_len or args.max_len), args.budget,
                                    args.epsilon)
    cfg = metrics.LandscapeConfig(args.mode, limits, qlimits, margin=args.margin, seed=args.seed)
    try:
        items = _landscape_instances(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    records = metrics.landscape(items, LANGUAGES[args.language], cfg)
    header = "# config: " + json.dumps(_resolved(args), sort_keys=True) + "\n"
    _write(header + metrics.landscape_csv(records, args.margin), args.out)
    if records and all(r.censored and metrics.classify_queasy(r, args.margin)
                       == metrics.INDETERMINATE for r in records):
        return EXIT_CENSORED
    return EXIT_OK


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="queasylab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="JSON file of defaults; flags override")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("complexity", help="exact c, cd and ic for one instance")
    common(c)
    c.add_argument("--instance", required=True,
                   help="hex (or n:hex, or b:bits), 'x:a' with --language fac, or a DIMACS path")
    c.add_argument("--language", choices=sorted(LANGUAGES), default="parity")
    c.add_argument("--max-len", type=int, default=14)
    c.add_argument("--budget", type=int, default=256)
    c.add_argument("--universe", choices=("same", "up-to"), default="same")
    c.add_argument("--quantum", action="store_true", help="also compute qcd and qic")
    c.add_argument("--epsilon", type=float, default=quantum.DEFAULT_EPSILON)
    c.set_defaults(func=cmd_complexity)

    r = sub.add_parser("reduce", help="FACTOR-PREFIX instance to DIMACS")
    common(r)
    r.add_argument("--x", type=int)
    r.add_argument("--a", default="")
    r.add_argument("--invert", help="DIMACS file to invert instead")
    r.set_defaults(func=cmd_reduce)

    pr = sub.add_parser("prune", help="extend-and-prune trace as JSON lines")
    common(pr)
    pr.add_argument("--x", type=int, required=True)
    pr.add_argument("--adversaries", type=int, default=50)
    pr.set_defaults(func=cmd_prune)

    a = sub.add_parser("amplify", help="Monte Carlo success curve over copy counts")
    common(a)
    a.add_argument("--epsilon", type=float, default=0.5,
                   help="target probability; 0.5 is the single-H circuit")
    a.add_argument("--copies", default="10,50,200")
    a.add_argument("--trials", type=int, default=1000)
    a.add_argument("--target", default="0")
    a.add_argument("--circuit", help="circuit text file to sample instead")
    a.add_argument("--dist", help="explicit distribution, e.g. 0:0.5,1:0.3,2:0.2")
    a.set_defaults(func=cmd_amplify)

    la = sub.add_parser("landscape", help="queasiness table as CSV")
    common(la)
    la.add_argument("--mode", choices=("exact", "proxy"), default="exact")
    la.add_argument("--language", choices=sorted(LANGUAGES), default="parity")
    la.add_argument("--corpus", help="same:N (all N-bit strings) or up-to:N")
    la.add_argument("--instances", nargs="*", help="hex instances (exact mode)")
    la.add_argument("--fac", nargs="*", help="x:a pairs reduced to SAT (proxy mode)")
    la.add_argument("--random-cnf", help="count:vars:clauses random 3-CNF (proxy mode)")
    la.add_argument("--max-len", type=int, default=14)
    la.add_argument("--qmax-len", type=int)
    la.add_argument("--budget", type=int, default=256)
    la.add_argument("--epsilon", type=float, default=quantum.DEFAULT_EPSILON)
    la.add_argument("--margin", type=int, default=4)
    la.set_defaults(func=cmd_landscape)
    return p


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            parser.exit(EXIT_USAGE, f"queasylab: cannot read config: {exc}\n")
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(cfg) - known
        if unknown:
            parser.exit(EXIT_USAGE, f"queasylab: unknown config keys {sorted(unknown)}\n")
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"queasylab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

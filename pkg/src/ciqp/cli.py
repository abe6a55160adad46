"""Command-line front end.

Exit codes: 0 eps_approx / pass, 10 infeasible, 11 unbounded, 12 verify
failure, 1 usage or parse error, 2 internal error or undecided subproblem.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import gen
from .ilp import IlpUndecided
from .io import (InstanceParseError, format_certificate, format_instance, format_report,
                 format_verdict, parse_instance)
from .matprops import DEFAULT_SIZE_CAP, is_totally_unimodular, max_abs_subdeterminant
from .model import SolveConfig
from .numeric import parse_rational
from .oracle import OracleRefusal, verify_eps
from .solver import DeltaUnavailableError, TuRejectedError, solve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2
EXIT_INFEASIBLE = 10
EXIT_UNBOUNDED = 11
EXIT_VERIFY_FAIL = 12

_STATUS_EXIT = {"eps_approx": EXIT_OK, "infeasible": EXIT_INFEASIBLE, "unbounded": EXIT_UNBOUNDED}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational_arg(text):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed_arg(text):
    try:
        seed = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= seed < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


def _delta_policy_arg(text):
    if text == "declared":
        return "use_declared", None
    if text == "compute":
        return "compute", None
    if text.startswith("capped:"):
        try:
            cap = int(text.split(":", 1)[1])
        except ValueError:
            cap = 0
        if cap >= 1:
            return "compute_capped", cap
    raise argparse.ArgumentTypeError("delta policy must be declared, compute or capped:<size>")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ciqp", description="Epsilon-approximate separable concave integer QP.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("file")
    p.add_argument("--epsilon", type=_rational_arg, required=True)
    p.add_argument("--mode", choices=("auto", "general", "tu"), default="auto")
    p.add_argument("--delta-policy", type=_delta_policy_arg, default=("use_declared", None))
    p.add_argument("--delta-overestimate", action="store_true",
                   help="fall back to a Hadamard bound when the delta search is capped")
    p.add_argument("--verify-tu", action="store_true")
    p.add_argument("--stats", action="store_true", help="include solve counters in the report")
    p.add_argument("--out", default="-")

    p = sub.add_parser("verify", help="check a candidate by exhaustive enumeration")
    p.add_argument("file")
    p.add_argument("--candidate", required=True, help="file or inline list, e.g. '[3]' or '3,1'")
    p.add_argument("--epsilon", type=_rational_arg, required=True)
    p.add_argument("--box", help="JSON list of [lo, hi] pairs; defaults to the oracle_box field")
    p.add_argument("--out", default="-")

    p = sub.add_parser("analyze", help="largest subdeterminant and TU check")
    p.add_argument("file")
    p.add_argument("--size-cap", type=int, default=DEFAULT_SIZE_CAP)
    p.add_argument("--out", default="-")

    p = sub.add_parser("generate", help="write a seeded random instance")
    fam = p.add_subparsers(dest="family", required=True, parser_class=_Parser)
    for name in ("network", "interval", "general"):
        f = fam.add_parser(name)
        f.add_argument("--seed", type=_seed_arg, required=True)
        f.add_argument("--k", type=int, default=1)
        f.add_argument("--coeff-bound", type=int, default=5)
        f.add_argument("--out", default="-")
        if name == "network":
            f.add_argument("--nodes", type=int, default=4)
            f.add_argument("--arcs", type=int, default=5)
            f.add_argument("--capacity", type=int, default=3)
        elif name == "interval":
            f.add_argument("--rows", type=int, default=3)
            f.add_argument("--cols", type=int, default=4)
            f.add_argument("--bound", type=int, default=3)
        else:
            f.add_argument("--n", type=int, default=4)
            f.add_argument("--m", type=int, default=3)
            f.add_argument("--target-delta", type=int, default=2)
            f.add_argument("--bound", type=int, default=3)
    return parser


def _read_instance(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(text)


def _write(path, text):
    if not text.endswith("\n"):
        text += "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _parse_candidate(arg):
    text = arg
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    text = text.strip()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        try:
            doc = [int(v) for v in text.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"cannot parse candidate {arg!r}") from None
    if isinstance(doc, dict):
        doc = doc.get("solution")
    if isinstance(doc, int) and not isinstance(doc, bool):
        doc = [doc]
    if not isinstance(doc, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in doc):
        raise UsageError("candidate must be a list of integers")
    return tuple(doc)


def _cmd_solve(args):
    inst = _read_instance(args.file)
    policy, cap = args.delta_policy
    config = SolveConfig(epsilon=args.epsilon, mode=args.mode, delta_policy=policy, delta_cap=cap,
                         allow_delta_overestimate=args.delta_overestimate, verify_tu=args.verify_tu)
    report = solve(inst, config)
    _write(args.out, format_report(report, include_stats=args.stats))
    return _STATUS_EXIT[report.status]


def _cmd_verify(args):
    inst = _read_instance(args.file)
    cand = _parse_candidate(args.candidate)
    box = None
    if args.box is not None:
        try:
            box = [tuple(p) for p in json.loads(args.box)]
        except (json.JSONDecodeError, TypeError):
            raise UsageError("--box must be a JSON list of [lo, hi] pairs") from None
    elif inst.oracle_box is None:
        raise UsageError("instance has no oracle_box; pass --box")
    if len(cand) != inst.num_vars:
        raise UsageError(f"candidate has {len(cand)} entries, instance has {inst.num_vars} variables")
    verdict = verify_eps(inst, cand, args.epsilon, box)
    _write(args.out, format_verdict(verdict))
    return EXIT_OK if verdict.passed else EXIT_VERIFY_FAIL


def _cmd_analyze(args):
    inst = _read_instance(args.file)
    cap = args.size_cap
    cert = max_abs_subdeterminant(inst.W, cap)
    tu = is_totally_unimodular(inst.W, cap)
    _write(args.out, format_certificate(cert, tu))
    return EXIT_OK


def _cmd_generate(args):
    if args.family == "network":
        inst = gen.gen_network(args.nodes, args.arcs, args.k, args.coeff_bound, args.seed, args.capacity)
    elif args.family == "interval":
        inst = gen.gen_interval(args.rows, args.cols, args.k, args.coeff_bound, args.seed, args.bound)
    else:
        inst = gen.gen_general_delta(args.n, args.m, args.k, args.target_delta, args.coeff_bound,
                                     args.seed, args.bound)
    _write(args.out, format_instance(inst))
    return EXIT_OK


_COMMANDS = {"solve": _cmd_solve, "verify": _cmd_verify, "analyze": _cmd_analyze,
             "generate": _cmd_generate}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InstanceParseError as exc:
        for diag in exc.diagnostics:
            print(f"{args.file}:{diag}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, TuRejectedError, DeltaUnavailableError, OracleRefusal) as exc:
        print(f"ciqp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IlpUndecided as exc:
        print(f"ciqp: undecided: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"ciqp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RuntimeError, AssertionError) as exc:
        print(f"ciqp: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

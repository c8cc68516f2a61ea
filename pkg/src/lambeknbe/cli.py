"""Command-line front end: check, nbe, equiv, gen, and step.

Exit codes: 0 success, 1 error; `equiv` reserves 2 for an inconclusive
verdict so scripts can tell "not proven" from "failed".
"""

from __future__ import annotations

import argparse
import sys

from . import dill as dl
from . import mill as ml
from . import nbe as nbe_mod
from . import rewrite as rw
from . import syntax as lk
from .gen import GenConfig, GenerationExhausted, gen_derivation
from .syntax import IllFormed
from .text import ParseError, parse_derivation, print_derivation, print_nf, print_sequent


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load(path: str, calculus: str):
    return parse_derivation(_read(path), calculus)


def _typecheck(t, calculus: str):
    return {"lambek": lk.typecheck, "mill": ml.typecheck, "dill": dl.typecheck}[calculus](t)


def _normalize(t, calculus: str):
    return {"lambek": nbe_mod.normalize, "mill": ml.nbe, "dill": dl.nbe}[calculus](t)


def _steps_api(calculus: str):
    if calculus == "lambek":
        return rw.applicable_steps, rw.apply_step, rw.EquationId, rw.Direction
    if calculus == "mill":
        return ml.applicable_steps, ml.apply_step, ml.MillEquationId, None
    return dl.applicable_steps, dl.apply_step, dl.DillEquationId, None


def _fail(msg: str) -> int:
    print(msg, file=sys.stderr)
    return 1


def _cmd_check(args) -> int:
    try:
        t = _load(args.file, args.calculus)
        seq = _typecheck(t, args.calculus)
    except (ParseError, IllFormed) as e:
        return _fail(f"{args.file}: {e}")
    print(print_sequent(seq))
    return 0


def _cmd_nbe(args) -> int:
    try:
        t = _load(args.file, args.calculus)
        _typecheck(t, args.calculus)
        n = _normalize(t, args.calculus)
    except (ParseError, IllFormed) as e:
        return _fail(f"{args.file}: {e}")
    print(print_nf(n))
    return 0


def _format_step(step) -> str:
    path = ".".join(str(i) for i in step.path)
    d = step.direction.value if hasattr(step.direction, "value") else step.direction
    return f"{path}:{step.eq.name}:{d}"


def _cmd_equiv(args) -> int:
    try:
        t = _load(args.file1, "lambek")
        u = _load(args.file2, "lambek")
        verdict = rw.equiv_oracle(t, u, args.nodes, args.steps)
    except (ParseError, IllFormed, rw.SequentMismatch) as e:
        return _fail(f"equiv: {e}")
    if isinstance(verdict, rw.Related):
        for step in verdict.trace:
            print(_format_step(step))
        return 0
    print("unknown", file=sys.stderr)
    return 2


def _cmd_gen(args) -> int:
    cfg = GenConfig(
        seed=args.seed,
        max_nodes=args.size,
        atoms=tuple(args.atoms.split(",")),
        calculus=args.calculus,
    )
    try:
        d = gen_derivation(cfg)
    except GenerationExhausted as e:
        return _fail(f"gen: {e}")
    print(print_derivation(d))
    return 0


def _parse_step_spec(spec: str, eq_enum, dir_enum):
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError("step spec must be PATH:EQ:DIR, e.g. 0.1:BetaOver:LR")
    path = tuple(int(p) for p in parts[0].split(".") if p != "")
    try:
        eq = eq_enum[parts[1]]
    except KeyError:
        raise ValueError(f"unknown equation {parts[1]!r}") from None
    if parts[2] not in ("LR", "RL"):
        raise ValueError("direction must be LR or RL")
    direction = parts[2]
    if dir_enum is not None:
        direction = dir_enum.LeftToRight if parts[2] == "LR" else dir_enum.RightToLeft
    return path, eq, direction


def _cmd_step(args) -> int:
    steps_of, apply_one, eq_enum, dir_enum = _steps_api(args.calculus)
    try:
        t = _load(args.file, args.calculus)
        _typecheck(t, args.calculus)
    except (ParseError, IllFormed) as e:
        return _fail(f"{args.file}: {e}")
    if args.list:
        for step in steps_of(t, eta_cap=args.eta_cap):
            print(_format_step(step))
        return 0
    try:
        path, eq, direction = _parse_step_spec(args.apply, eq_enum, dir_enum)
        if dir_enum is not None:
            step = rw.RewriteStep(path, eq, direction)
        elif args.calculus == "mill":
            step = ml.MStep(path, eq, direction)
        else:
            step = dl.DStep(path, eq, direction)
        out = apply_one(t, step)
    except (ValueError, rw.StepNotApplicable, ml.MStepNotApplicable, dl.DStepNotApplicable) as e:
        return _fail(f"step: {e}")
    print(print_derivation(out))
    return 0


def _add_calculus(p):
    p.add_argument(
        "--calculus",
        choices=("lambek", "mill", "dill"),
        default="lambek",
        help="which calculus the input lives in",
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="lambek", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="typecheck a term file and print its sequent")
    p.add_argument("file")
    _add_calculus(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("nbe", help="print the normal form of a term file")
    p.add_argument("file")
    _add_calculus(p)
    p.set_defaults(fn=_cmd_nbe)

    p = sub.add_parser("equiv", help="search for a conversion path between two ordered terms")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--nodes", type=int, default=40, help="intermediate term size bound")
    p.add_argument("--steps", type=int, default=8, help="path length bound")
    p.set_defaults(fn=_cmd_equiv)

    p = sub.add_parser("gen", help="generate a random well-typed derivation")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=30, help="maximum node count")
    p.add_argument("--atoms", default="p,q,r", help="comma-separated atom alphabet")
    _add_calculus(p)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("step", help="list or apply single conversion steps")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--apply", metavar="PATH:EQ:DIR")
    p.add_argument("--eta-cap", type=int, default=40, dest="eta_cap")
    _add_calculus(p)
    p.set_defaults(fn=_cmd_step)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

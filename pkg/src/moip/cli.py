"""Command-line entry point.

Subcommands: generators, basis, check, solve, oracle, skeleton, bench.
Exit codes: 0 success, 1 infeasible, 2 invalid input, 3 internal limit
exceeded (also used for a failed criterion check).
"""

from __future__ import annotations

import argparse
import json
import sys

from moip.bench import BenchConfig, render_csv, run_bench
from moip.engine import DirectedPair, check_criterion, pbuchberger, prem, reduce_basis
from moip.lattice import set_of_generators
from moip.model import MoipInstance, load_instance, validate_instance, vec
from moip.orders import OrderVariant
from moip.solver import (
    Infeasible,
    InvalidInstance,
    LimitExceeded,
    UnboundedRegion,
    default_order,
    fiber_skeleton,
    oracle_pareto,
    solve,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INVALID = 2
EXIT_LIMIT = 3

_ORDER_FLAGS = {"plain": OrderVariant.PLAIN, "lex": OrderVariant.LEX_REFINED, "slack": OrderVariant.SLACK_REFINED}


def _load(path: str) -> MoipInstance:
    inst = load_instance(path)
    report = validate_instance(inst)
    if not report.ok:
        raise InvalidInstance("; ".join(report.problems))
    return inst


def _order_spec(inst: MoipInstance, name: str | None):
    variant = _ORDER_FLAGS[name] if name else None
    return default_order(inst, variant)


def _fmt_vec(v) -> str:
    return " ".join(str(x) for x in v)


def _compute_basis(inst: MoipInstance, order_name: str | None, truncate: int | None):
    spec = _order_spec(inst, order_name)
    gens = set_of_generators(inst.A)
    basis = pbuchberger(
        [u for u, _ in gens],
        [v for _, v in gens],
        spec,
        A=inst.A,
        fingerprint=inst.fingerprint(),
        step_cap=truncate,
    )
    return reduce_basis(basis)


def _cmd_generators(args) -> int:
    inst = _load(args.instance)
    gens = set_of_generators(inst.A)
    for u, v in gens:
        print(f"{_fmt_vec(u)} | {_fmt_vec(v)}")
    return EXIT_OK


def _cmd_basis(args) -> int:
    inst = _load(args.instance)
    basis = _compute_basis(inst, args.order, args.truncate_steps)
    if not basis.certified:
        print("# truncated completion: basis not certified", file=sys.stderr)
    for idx, chain in enumerate(basis.chains, start=1):
        print(f"chain {idx}:")
        for pair in chain:
            print(f"  g = ({_fmt_vec(pair.g)})  h = ({_fmt_vec(pair.h)})")
    return EXIT_OK


def _cmd_check(args) -> int:
    inst = _load(args.instance)
    basis = _compute_basis(inst, args.order, None)
    report = check_criterion(basis)
    if report.holds:
        print(f"criterion: PASS ({len(basis.elements)} elements, {len(basis.chains)} chains)")
        return EXIT_OK
    e1, e2, k, s, survivor = report.certificate
    print("criterion: FAIL")
    print(f"  pair: g=({_fmt_vec(e1.g)}) h=({_fmt_vec(e1.h)}) / g=({_fmt_vec(e2.g)}) h=({_fmt_vec(e2.h)})")
    print(f"  S{k}-vector: g=({_fmt_vec(s.g)}) h=({_fmt_vec(s.h)})")
    print(f"  survivor: g=({_fmt_vec(survivor.g)}) h=({_fmt_vec(survivor.h)})")
    return EXIT_LIMIT


def _print_pareto(ps, as_json: bool) -> None:
    if as_json:
        doc = {
            "solutions": [list(s) for s in ps.solutions],
            "images": [list(i) for i in ps.images],
            "provenance": ps.provenance,
            "certified": ps.certified,
            "timings": {k: v for k, v in ps.timings.items()},
        }
        print(json.dumps(doc, indent=2))
        return
    for sol, img in zip(ps.solutions, ps.images):
        print(f"{_fmt_vec(sol)} -> {_fmt_vec(img)}")


def _cmd_solve(args) -> int:
    inst = _load(args.instance)
    spec = _order_spec(inst, args.order)
    ps = solve(inst, spec, pipeline=args.pipeline, truncate_steps=args.truncate_steps)
    if not ps.certified:
        print("# truncated completion: result not certified", file=sys.stderr)
    _print_pareto(ps, args.json)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    inst = _load(args.instance)
    spec = _order_spec(inst, args.order)
    ps = oracle_pareto(inst, spec)
    _print_pareto(ps, args.json)
    return EXIT_OK


def _cmd_skeleton(args) -> int:
    inst = _load(args.instance)
    basis = _compute_basis(inst, args.order, None)
    fiber = vec(int(t) for t in args.fiber.replace(",", " ").split()) if args.fiber else None
    skel = fiber_skeleton(inst, basis, fiber_b=fiber)
    text = skel.to_dot()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfg = BenchConfig(
        family=args.family,
        n=args.vars,
        origins=args.origins,
        destinations=args.destinations,
        objectives=args.objs,
        instances=args.seeds,
        objective_draws=args.objective_draws,
        rhs_count=args.rhs_count,
        seed=args.seed,
        coeff_max=args.coeff_max,
        oracle_budget=None if args.no_oracle else args.oracle_budget,
    )
    records = run_bench(cfg)
    text = render_csv(records)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    mismatches = [r for r in records if r.oracle_checked and r.oracle_match is False]
    if mismatches:
        print(f"# ORACLE MISMATCH on {len(mismatches)} records", file=sys.stderr)
        return EXIT_LIMIT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moip",
        description="Exact Pareto sets of multiobjective integer linear programs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_instance_cmd(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("instance", help="instance JSON file")
        p.set_defaults(fn=fn)
        return p

    p = add_instance_cmd("generators", _cmd_generators, "print a generating set of the toric ideal")

    p = add_instance_cmd("basis", _cmd_basis, "print the reduced partial Groebner basis chains")
    p.add_argument("--order", choices=sorted(_ORDER_FLAGS), default=None)
    p.add_argument("--truncate-steps", type=int, default=None)

    p = add_instance_cmd("check", _cmd_check, "run the extended Buchberger criterion check")
    p.add_argument("--order", choices=sorted(_ORDER_FLAGS), default=None)

    p = add_instance_cmd("solve", _cmd_solve, "compute the Pareto set")
    p.add_argument("--pipeline", choices=["auto", "hs", "ct", "corank1"], default="auto")
    p.add_argument("--order", choices=sorted(_ORDER_FLAGS), default=None)
    p.add_argument("--truncate-steps", type=int, default=None)
    p.add_argument("--json", action="store_true")

    p = add_instance_cmd("oracle", _cmd_oracle, "compute the Pareto set by enumeration")
    p.add_argument("--order", choices=sorted(_ORDER_FLAGS), default=None)
    p.add_argument("--json", action="store_true")

    p = add_instance_cmd("skeleton", _cmd_skeleton, "emit the fiber skeleton as DOT")
    p.add_argument("--order", choices=sorted(_ORDER_FLAGS), default=None)
    p.add_argument("--fiber", default=None, help="right-hand side override, e.g. '17,11'")
    p.add_argument("--out", default=None)

    p = sub.add_parser("bench", help="run the random-instance benchmark protocol")
    p.add_argument("--family", choices=["knapsack", "transport"], required=True)
    p.add_argument("--vars", type=int, default=4)
    p.add_argument("--origins", type=int, default=3)
    p.add_argument("--destinations", type=int, default=2)
    p.add_argument("--objs", type=int, default=2)
    p.add_argument("--seeds", type=int, default=5, help="constraint/instance draws")
    p.add_argument("--objective-draws", type=int, default=5)
    p.add_argument("--rhs-count", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coeff-max", type=int, default=10, help="use 20 for the full-range protocol")
    p.add_argument("--oracle-budget", type=int, default=200_000)
    p.add_argument("--no-oracle", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except Infeasible as exc:
        print("INFEASIBLE", file=sys.stdout)
        print(f"# {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InvalidInstance, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (LimitExceeded, UnboundedRegion, RuntimeError) as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main(argv=None))

"""Random instance families and the three-stage experiment runner.

Knapsack: one random constraint row plus a slack column, right-hand side
fixed at half the coefficient sum.  Transportation: the bipartite incidence
matrix with balanced random supplies and demands.

The runner mirrors the measurement protocol: the generator set is computed
once per constraint matrix and reused across objective draws, and each basis
is reused across right-hand sides.  Reported CPU times are machine-bound;
only the structure (stages, counts, columns) is the contract.
"""

from __future__ import annotations

import csv
import io
import math
import random
import time
from dataclasses import dataclass
from typing import Sequence

from moip.engine import DirectedPair, pbuchberger, prem, reduce_basis
from moip.lattice import set_of_generators
from moip.model import IntMat, IntVec, MoipInstance, mat, vec
from moip.solver import (
    Infeasible,
    LimitExceeded,
    UnboundedRegion,
    _finish_pareto,
    default_order,
    initial_feasible,
    oracle_pareto,
)

CSV_COLUMNS = (
    "problem",
    "sog",
    "pgroebner",
    "pos",
    "total",
    "pos_count",
    "maxchains",
    "steps",
    "act_pgb",
)


def _rng(*key) -> random.Random:
    return random.Random(repr(key))


def _objective(rng: random.Random, k: int, n: int, coeff_max: int) -> IntMat:
    return mat([[rng.randint(0, coeff_max) for _ in range(n)] for _ in range(k)])


def gen_knapsack(n: int, k: int, seed: int, coeff_max: int = 20) -> MoipInstance:
    """Random knapsack instance with a slack column.

    Constraint coefficients are uniform in [1, coeff_max] (a zero coefficient
    would leave that variable unbounded, so the fiber would not be a
    polytope), the right-hand side is ceil(sum/2), objective entries are
    uniform in [0, coeff_max] with zero cost on the slack.  Deterministic
    per seed.
    """
    if n < 2:
        raise ValueError("need at least two variables")
    rng = _rng("knapsack", n, k, coeff_max, seed)
    a = [rng.randint(1, coeff_max) for _ in range(n)]
    b = math.ceil(sum(a) / 2)
    A = mat([a + [1]])
    C = mat([list(row) + [0] for row in _objective(rng, k, n, coeff_max)])
    return MoipInstance(A=A, b=vec([b]), C=C, slack_indices=frozenset({n}))


def _transport_matrix(s: int, d: int) -> IntMat:
    n = s * d
    rows = []
    for i in range(s):
        rows.append([1 if j // d == i else 0 for j in range(n)])
    for jdx in range(d):
        rows.append([1 if j % d == jdx else 0 for j in range(n)])
    return mat(rows)


def _transport_rhs(rng: random.Random, s: int, d: int, coeff_max: int) -> IntVec:
    supplies = [rng.randint(1, coeff_max) for _ in range(s)]
    demands = [rng.randint(1, coeff_max) for _ in range(d)]
    diff = sum(supplies) - sum(demands)
    if diff > 0:
        demands[-1] += diff
    elif diff < 0:
        supplies[-1] += -diff
    return vec(supplies + demands)


def gen_transport(s: int, d: int, k: int, seed: int, coeff_max: int = 20) -> MoipInstance:
    """Random balanced transportation instance on the s x d incidence matrix.

    Supplies and demands are uniform in [1, coeff_max]; the short side's last
    entry is raised until both sides sum equal (documented convention).
    """
    if s < 2 or d < 2:
        raise ValueError("need at least two origins and two destinations")
    rng = _rng("transport", s, d, k, coeff_max, seed)
    b = _transport_rhs(rng, s, d, coeff_max)
    C = _objective(rng, k, s * d, coeff_max)
    return MoipInstance(A=_transport_matrix(s, d), b=b, C=C)


@dataclass(frozen=True)
class BenchConfig:
    """One experiment cell: a family at fixed dimensions and objective count."""

    family: str  # "knapsack" or "transport"
    n: int = 4  # knapsack variable count
    origins: int = 3
    destinations: int = 2
    objectives: int = 2
    instances: int = 5  # constraint draws (knapsack) / objective draws (transport)
    objective_draws: int = 5  # objective matrices per knapsack constraint
    rhs_count: int = 5  # right-hand sides per basis (transport)
    seed: int = 0
    coeff_max: int = 10  # desk-scale default; the full-range protocol uses 20
    oracle_budget: int | None = 200_000  # fiber-point cap for the oracle check

    def problem_name(self) -> str:
        if self.family == "knapsack":
            return f"knap{self.n}_{self.objectives}"
        return f"tranp{self.origins}x{self.destinations}_{self.objectives}"


@dataclass
class BenchRecord:
    """Per-solve measurements matching the summary-table columns."""

    problem: str
    sog: float
    pgroebner: float
    pos: float
    pos_count: int
    maxchains: int
    steps: int
    act_pgb: float
    oracle_checked: bool = False
    oracle_match: bool | None = None
    note: str = ""

    @property
    def total(self) -> float:
        return self.sog + self.pgroebner + self.pos

    def row(self) -> list:
        return [
            self.problem,
            f"{self.sog:.3f}",
            f"{self.pgroebner:.3f}",
            f"{self.pos:.3f}",
            f"{self.total:.3f}",
            self.pos_count,
            self.maxchains,
            self.steps,
            f"{self.act_pgb:.3f}",
        ]


def _failed_record(problem: str, exc: Exception) -> BenchRecord:
    return BenchRecord(
        problem=problem,
        sog=0.0,
        pgroebner=0.0,
        pos=0.0,
        pos_count=0,
        maxchains=0,
        steps=0,
        act_pgb=0.0,
        note=f"failed: {exc}",
    )


def _solve_staged(
    inst: MoipInstance,
    gens,
    sog_time: float,
    basis,
    pg_time: float,
    problem: str,
    oracle_budget: int | None,
) -> BenchRecord:
    t0 = time.perf_counter()
    alpha = initial_feasible(inst)
    rem = prem(DirectedPair.point(alpha), basis)
    pos_time = time.perf_counter() - t0
    ps = _finish_pareto(
        inst, [p.h for p in rem.members], "hs", basis.spec, {}, certified=basis.certified
    )
    rec = BenchRecord(
        problem=problem,
        sog=sog_time,
        pgroebner=pg_time,
        pos=pos_time,
        pos_count=len(ps),
        maxchains=len(basis.chains),
        steps=basis.stats.steps if basis.stats else 1,
        act_pgb=basis.stats.act_pgb if basis.stats else 0.0,
    )
    if oracle_budget is not None:
        try:
            oracle = oracle_pareto(inst, default_order(inst), max_points=oracle_budget)
            rec.oracle_checked = True
            rec.oracle_match = oracle.as_set() == ps.as_set()
        except (LimitExceeded, UnboundedRegion) as exc:
            rec.note = f"oracle skipped: {exc}"
    return rec


def run_bench(cfg: BenchConfig) -> list[BenchRecord]:
    """Execute one experiment cell; per-instance failures become noted records."""
    if cfg.family == "knapsack":
        return _run_knapsack(cfg)
    if cfg.family == "transport":
        return _run_transport(cfg)
    raise ValueError(f"unknown family: {cfg.family}")


def _run_knapsack(cfg: BenchConfig) -> list[BenchRecord]:
    problem = cfg.problem_name()
    records: list[BenchRecord] = []
    for inst_idx in range(cfg.instances):
        base = gen_knapsack(cfg.n, cfg.objectives, cfg.seed * 1000 + inst_idx, cfg.coeff_max)
        try:
            t0 = time.perf_counter()
            gens = set_of_generators(base.A)
            sog_time = time.perf_counter() - t0
        except LimitExceeded as exc:
            records.append(_failed_record(problem, exc))
            continue
        for obj_idx in range(cfg.objective_draws):
            rng = _rng("knap-obj", cfg.seed, inst_idx, obj_idx)
            C = mat([list(row) + [0] for row in _objective(rng, cfg.objectives, cfg.n, cfg.coeff_max)])
            inst = MoipInstance(A=base.A, b=base.b, C=C, slack_indices=base.slack_indices)
            try:
                spec = default_order(inst)
                t0 = time.perf_counter()
                F1 = [u for u, _ in gens]
                F2 = [v for _, v in gens]
                basis = reduce_basis(
                    pbuchberger(F1, F2, spec, A=inst.A, fingerprint=inst.fingerprint())
                )
                pg_time = time.perf_counter() - t0
                records.append(
                    _solve_staged(inst, gens, sog_time, basis, pg_time, problem, cfg.oracle_budget)
                )
            except (Infeasible, UnboundedRegion, LimitExceeded) as exc:
                records.append(_failed_record(problem, exc))
    return records


def _run_transport(cfg: BenchConfig) -> list[BenchRecord]:
    problem = cfg.problem_name()
    records: list[BenchRecord] = []
    A = _transport_matrix(cfg.origins, cfg.destinations)
    try:
        t0 = time.perf_counter()
        gens = set_of_generators(A)
        sog_time = time.perf_counter() - t0
    except LimitExceeded as exc:
        return [_failed_record(problem, exc)]
    n = cfg.origins * cfg.destinations
    for inst_idx in range(cfg.instances):
        rng = _rng("tran-obj", cfg.seed, inst_idx)
        C = _objective(rng, cfg.objectives, n, cfg.coeff_max)
        spec = default_order(MoipInstance(A=A, b=vec([0] * (cfg.origins + cfg.destinations)), C=C))
        try:
            t0 = time.perf_counter()
            F1 = [u for u, _ in gens]
            F2 = [v for _, v in gens]
            basis = reduce_basis(pbuchberger(F1, F2, spec, A=A))
            pg_time = time.perf_counter() - t0
        except LimitExceeded as exc:
            records.append(_failed_record(problem, exc))
            continue
        for rhs_idx in range(cfg.rhs_count):
            rhs_rng = _rng("tran-rhs", cfg.seed, inst_idx, rhs_idx)
            b = _transport_rhs(rhs_rng, cfg.origins, cfg.destinations, cfg.coeff_max)
            inst = MoipInstance(A=A, b=b, C=C)
            try:
                records.append(
                    _solve_staged(inst, gens, sog_time, basis, pg_time, problem, cfg.oracle_budget)
                )
            except (Infeasible, UnboundedRegion, LimitExceeded) as exc:
                records.append(_failed_record(problem, exc))
    return records


def summarize(records: Sequence[BenchRecord]) -> list[list]:
    """One averaged row per problem name, same column set."""
    by_problem: dict[str, list[BenchRecord]] = {}
    for r in records:
        if r.note.startswith("failed"):
            continue
        by_problem.setdefault(r.problem, []).append(r)
    rows = []
    for problem in sorted(by_problem):
        group = by_problem[problem]
        nrec = len(group)
        rows.append(
            [
                f"{problem}_avg",
                f"{sum(r.sog for r in group) / nrec:.3f}",
                f"{sum(r.pgroebner for r in group) / nrec:.3f}",
                f"{sum(r.pos for r in group) / nrec:.3f}",
                f"{sum(r.total for r in group) / nrec:.3f}",
                f"{sum(r.pos_count for r in group) / nrec:.1f}",
                f"{sum(r.maxchains for r in group) / nrec:.1f}",
                f"{sum(r.steps for r in group) / nrec:.1f}",
                f"{sum(r.act_pgb for r in group) / nrec:.3f}",
            ]
        )
    return rows


def render_csv(records: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.row())
    for row in summarize(records):
        writer.writerow(row)
    return buf.getvalue()

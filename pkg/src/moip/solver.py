"""End-to-end Pareto-set pipelines, brute-force oracle, fiber skeletons.

Three exact routes to the Pareto set of one right-hand side:

* ``solve`` - generator set of the toric ideal, completion to a reduced
  partial Groebner basis, then partial reduction of a feasible point;
* ``solve_conti_traverso`` - the extended big-M program whose trivial
  feasible point and generator set avoid the generator-computation stage;
* ``solve_corank1`` - the one-dimensional-kernel shortcut.

``oracle_pareto`` enumerates the fiber outright and filters dominance; it is
the independent check for everything else.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from moip.engine import (
    DirectedPair,
    PGroebnerBasis,
    ReductionLimit,
    make_basis,
    pbuchberger,
    prem,
    reduce_basis,
)
from moip.lattice import kernel_basis, lll_reduce, particular_solution, set_of_generators
from moip.model import (
    IntMat,
    IntVec,
    MoipInstance,
    mat_vec,
    objective_image,
    validate_instance,
    vec_is_nonneg,
    vec_sub,
    zero_vec,
)
from moip.orders import OrderVariant, PartialOrderSpec, Verdict, compare


class Infeasible(Exception):
    """The fiber is provably empty."""


class UnboundedRegion(Exception):
    """Variable bounds can neither be derived nor were supplied."""


class InvalidInstance(Exception):
    """The instance violates a model invariant."""


LimitExceeded = ReductionLimit


def default_order(inst: MoipInstance, variant: OrderVariant | None = None) -> PartialOrderSpec:
    """Order spec for an instance.

    With no explicit choice, instances that declare slack columns get the
    slack-refined order (ties on slack-only differences are then resolved),
    everything else the plain order.
    """
    if variant is None or variant is OrderVariant.PLAIN:
        if inst.slack_indices:
            return PartialOrderSpec(
                inst.C, OrderVariant.SLACK_REFINED, tuple(sorted(inst.slack_indices))
            )
        return PartialOrderSpec(inst.C, OrderVariant.PLAIN)
    if variant is OrderVariant.SLACK_REFINED:
        if not inst.slack_indices:
            raise InvalidInstance("slack-refined order requested but no slack_indices declared")
        return PartialOrderSpec(inst.C, variant, tuple(sorted(inst.slack_indices)))
    return PartialOrderSpec(inst.C, variant)


# ---------------------------------------------------------------------------
# bounds and fiber enumeration


def derive_bounds(inst: MoipInstance, max_rounds: int = 64) -> IntVec:
    """Per-variable upper bounds certified by interval propagation.

    Starting from any explicit bounds, each equality row is used to tighten:
    a variable with a positive coefficient is bounded once the negative
    contributions of the other variables are bounded, and vice versa.  Raises
    UnboundedRegion when some variable never receives a finite bound.
    """
    m, n = inst.m, inst.n
    INF = None
    ub: list[int | None] = list(inst.bounds) if inst.bounds is not None else [INF] * n
    for _ in range(max_rounds):
        changed = False
        for i in range(m):
            row = inst.A[i]
            bi = inst.b[i]
            for j in range(n):
                a = row[j]
                if a == 0:
                    continue
                # bound on a*x_j: b_i minus best case of the rest
                rest_ok = True
                rest = 0
                for l in range(n):
                    if l == j:
                        continue
                    al = row[l]
                    if a > 0:
                        # need min of a_l x_l: 0 if a_l >= 0 else a_l * ub_l
                        if al < 0:
                            if ub[l] is INF:
                                rest_ok = False
                                break
                            rest += al * ub[l]
                    else:
                        # need max of a_l x_l: 0 if a_l <= 0 else a_l * ub_l
                        if al > 0:
                            if ub[l] is INF:
                                rest_ok = False
                                break
                            rest += al * ub[l]
                if not rest_ok:
                    continue
                if a > 0:
                    cand = (bi - rest) // a
                else:
                    cand = (rest - bi) // (-a)
                cand = max(cand, 0)
                if ub[j] is INF or cand < ub[j]:
                    ub[j] = cand
                    changed = True
        if not changed:
            break
    if any(u is INF for u in ub):
        missing = [j for j, u in enumerate(ub) if u is INF]
        raise UnboundedRegion(f"no finite bound derivable for variables {missing}")
    return tuple(ub)


def enumerate_fiber(
    A: IntMat, b: IntVec, bounds: IntVec, max_points: int | None = None
) -> Iterator[IntVec]:
    """All nonnegative integer solutions of A x = b inside the bound box.

    Depth-first with per-row interval pruning on the remaining suffix.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    # suffix attainable-range per row: [lo, hi] of sum a_ij x_j for j >= depth
    suf_lo = [[0] * m for _ in range(n + 1)]
    suf_hi = [[0] * m for _ in range(n + 1)]
    for j in range(n - 1, -1, -1):
        for i in range(m):
            a = A[i][j]
            lo = min(0, a * bounds[j])
            hi = max(0, a * bounds[j])
            suf_lo[j][i] = suf_lo[j + 1][i] + lo
            suf_hi[j][i] = suf_hi[j + 1][i] + hi

    x = [0] * n
    count = 0

    def rec(j: int, resid: tuple[int, ...]) -> Iterator[IntVec]:
        nonlocal count
        if j == n:
            if all(r == 0 for r in resid):
                count += 1
                if max_points is not None and count > max_points:
                    raise ReductionLimit("fiber enumeration exceeded the point cap")
                yield tuple(x)
            return
        for i in range(m):
            if not (suf_lo[j][i] <= resid[i] <= suf_hi[j][i]):
                return
        for val in range(bounds[j] + 1):
            x[j] = val
            nxt = tuple(resid[i] - A[i][j] * val for i in range(m))
            yield from rec(j + 1, nxt)
        x[j] = 0

    yield from rec(0, tuple(b))


# ---------------------------------------------------------------------------
# feasibility


def initial_feasible(inst: MoipInstance) -> IntVec:
    """One feasible point of the instance's fiber.

    Ladder: an integer particular solution via HNF (its absence proves
    integer infeasibility outright), a small search over the LLL-reduced
    kernel lattice around it, then exhaustive bounded enumeration.  Raises
    Infeasible when the fiber is provably empty and UnboundedRegion when no
    bound box can be certified.
    """
    if all(v == 0 for v in inst.b):
        return zero_vec(inst.n)
    x0 = particular_solution(inst.A, inst.b)
    if x0 is None:
        raise Infeasible("no integer solution of A x = b exists")
    if vec_is_nonneg(x0):
        return x0
    basis = lll_reduce(kernel_basis(inst.A))
    if len(basis):
        found = _lattice_probe(x0, basis.vectors, radius=3)
        if found is not None:
            return found
    bounds = derive_bounds(inst)
    for point in enumerate_fiber(inst.A, inst.b, bounds):
        return point
    raise Infeasible("fiber is empty (exhausted the bound box)")


def _lattice_probe(x0: IntVec, basis: Sequence[IntVec], radius: int) -> IntVec | None:
    """Search x0 + small integer combinations of basis vectors for a
    nonnegative point."""
    n = len(x0)
    d = len(basis)
    if d > 6:
        return None
    span = range(-radius, radius + 1)

    def rec(i: int, cur: list[int]) -> IntVec | None:
        if i == d:
            t = tuple(cur)
            return t if vec_is_nonneg(t) else None
        for c in span:
            nxt = [cur[j] + c * basis[i][j] for j in range(n)]
            hit = rec(i + 1, nxt)
            if hit is not None:
                return hit
        return None

    return rec(0, list(x0))


# ---------------------------------------------------------------------------
# Pareto sets


@dataclass(frozen=True)
class ParetoSet:
    """The Pareto-optimal solutions of one fiber with their images."""

    solutions: tuple[IntVec, ...]
    images: tuple[IntVec, ...]
    provenance: str
    order: PartialOrderSpec | None = None
    timings: dict = field(default_factory=dict, compare=False, repr=False)
    certified: bool = True

    def __len__(self) -> int:
        return len(self.solutions)

    def as_set(self) -> frozenset[IntVec]:
        return frozenset(self.solutions)


def _finish_pareto(
    inst: MoipInstance,
    points: Sequence[IntVec],
    provenance: str,
    spec: PartialOrderSpec | None,
    timings: dict,
    certified: bool = True,
) -> ParetoSet:
    pts = sorted(set(tuple(p) for p in points))
    for p in pts:
        if not vec_is_nonneg(p):
            raise AssertionError(f"negative solution reported: {p}")
        if mat_vec(inst.A, p) != tuple(inst.b):
            raise AssertionError(f"solution off the fiber: {p}")
    images = tuple(objective_image(inst.C, p).values for p in pts)
    return ParetoSet(
        solutions=tuple(pts),
        images=images,
        provenance=provenance,
        order=spec,
        timings=timings,
        certified=certified,
    )


def _minimal_points(spec: PartialOrderSpec, points: Sequence[IntVec]) -> list[IntVec]:
    """Minimal elements of a finite point set under the order spec.

    Dominance is decided on unique image vectors; ties inside an image class
    are resolved by the variant (all kept under the plain order).
    """
    by_image: dict[IntVec, list[IntVec]] = {}
    for p in points:
        by_image.setdefault(spec.image(p), []).append(p)
    images = list(by_image)
    kept: list[IntVec] = []
    for img in images:
        dominated = False
        for other in images:
            if other != img and all(a <= b for a, b in zip(other, img)):
                dominated = True
                break
        if dominated:
            continue
        group = by_image[img]
        if spec.variant is OrderVariant.PLAIN or len(group) == 1:
            kept.extend(group)
        elif spec.variant is OrderVariant.LEX_REFINED:
            kept.append(min(group))
        else:
            best = min(spec.slack_part(p) for p in group)
            kept.extend(p for p in group if spec.slack_part(p) == best)
    return kept


def oracle_pareto(
    inst: MoipInstance,
    spec: PartialOrderSpec | None = None,
    max_points: int | None = None,
) -> ParetoSet:
    """Brute-force oracle: enumerate the fiber, filter dominated points.

    Under the plain order equal-image distinct solutions are all kept; the
    refined variants keep the representative(s) their tie-break selects.
    """
    report = validate_instance(inst)
    if not report.ok:
        raise InvalidInstance("; ".join(report.problems))
    spec = spec or default_order(inst)
    t0 = time.perf_counter()
    bounds = derive_bounds(inst)
    points = list(enumerate_fiber(inst.A, inst.b, bounds, max_points=max_points))
    if not points:
        raise Infeasible("fiber is empty")
    kept = _minimal_points(spec, points)
    dt = time.perf_counter() - t0
    return _finish_pareto(inst, kept, "oracle", spec, {"pos": dt, "fiber_size": len(points)})


# ---------------------------------------------------------------------------
# pipelines


def solve(
    inst: MoipInstance,
    spec: PartialOrderSpec | None = None,
    pipeline: str = "auto",
    truncate_steps: int | None = None,
) -> ParetoSet:
    """Entire Pareto set of the instance.

    ``pipeline`` is one of auto, hs, ct, corank1; auto takes the corank-1
    shortcut when the kernel is one-dimensional and the generator-based
    route otherwise.
    """
    report = validate_instance(inst)
    if not report.ok:
        raise InvalidInstance("; ".join(report.problems))
    spec = spec or default_order(inst)
    if pipeline == "ct":
        return solve_conti_traverso(inst, spec, truncate_steps=truncate_steps)
    if pipeline == "corank1":
        return solve_corank1(inst, spec)
    if pipeline == "auto":
        if len(kernel_basis(inst.A)) == 1:
            return solve_corank1(inst, spec)
        pipeline = "hs"
    if pipeline != "hs":
        raise ValueError(f"unknown pipeline: {pipeline}")

    timings: dict = {}
    t0 = time.perf_counter()
    alpha = initial_feasible(inst)
    t_feas = time.perf_counter() - t0

    t0 = time.perf_counter()
    gens = set_of_generators(inst.A)
    timings["sog"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    F1 = [u for u, _ in gens]
    F2 = [v for _, v in gens]
    basis = pbuchberger(
        F1, F2, spec, A=inst.A, fingerprint=inst.fingerprint(), step_cap=truncate_steps
    )
    basis = reduce_basis(basis)
    timings["pgroebner"] = time.perf_counter() - t0
    if basis.stats is not None:
        timings["steps"] = basis.stats.steps
        timings["act_pgb"] = basis.stats.act_pgb
    timings["maxchains"] = len(basis.chains)

    t0 = time.perf_counter()
    rem = prem(DirectedPair.point(alpha), basis)
    timings["pos"] = time.perf_counter() - t0 + t_feas
    points = [p.h for p in rem.members]
    return _finish_pareto(inst, points, "hs", spec, timings, certified=basis.certified)


@dataclass(frozen=True)
class ExtendedInstance:
    """Big-M extension: identity block, a -1 column, then the original A.

    The artificial block strictly precedes the original objectives in the
    comparison order, which realizes arbitrarily large artificial weights
    exactly.
    """

    base: MoipInstance
    A: IntMat
    spec: PartialOrderSpec

    @property
    def art(self) -> int:
        return self.base.m + 1


def extend_instance(inst: MoipInstance, spec: PartialOrderSpec) -> ExtendedInstance:
    m, n = inst.m, inst.n
    art = m + 1
    A_ext = tuple(
        tuple((1 if j == i else 0) for j in range(m)) + (-1,) + tuple(inst.A[i])
        for i in range(m)
    )
    slack_shifted = tuple(j + art for j in spec.slack_indices)
    ext_spec = PartialOrderSpec(
        C=inst.C,
        variant=spec.variant,
        slack_indices=slack_shifted,
        art_count=art,
    )
    return ExtendedInstance(base=inst, A=A_ext, spec=ext_spec)


def conti_traverso_generators(inst: MoipInstance) -> tuple[list[IntVec], list[IntVec]]:
    """The ready-made generator block of the extended program.

    Column i contributes the pair (M_i, P_i) where M_i lifts the column into
    the artificial block, shifted to be nonnegative, and P_i is the unit
    monomial of the original variable; the all-ones artificial monomial pairs
    with the empty monomial.
    """
    m, n = inst.m, inst.n
    art = m + 1
    width = art + n
    F1: list[IntVec] = []
    F2: list[IntVec] = []
    F1.append(tuple([1] * art + [0] * n))
    F2.append(zero_vec(width))
    for i in range(n):
        col = [inst.A[r][i] for r in range(m)]
        mu = min(0, min(col))
        Mi = tuple([c - mu for c in col] + [-mu] + [0] * n)
        Pi = tuple([0] * art + [1 if j == i else 0 for j in range(n)])
        F1.append(Mi)
        F2.append(Pi)
    return F1, F2


def solve_conti_traverso(
    inst: MoipInstance,
    spec: PartialOrderSpec | None = None,
    truncate_steps: int | None = None,
) -> ParetoSet:
    """Pareto set via the extended big-M program.

    The trivial feasible point (b, 0, ..., 0) is reduced by the extended
    basis; remainders whose artificial block vanishes project to the Pareto
    solutions, and the absence of any such remainder proves infeasibility.
    """
    report = validate_instance(inst)
    if not report.ok:
        raise InvalidInstance("; ".join(report.problems))
    spec = spec or default_order(inst)
    ext = extend_instance(inst, spec)
    art = ext.art
    timings: dict = {"sog": 0.0}

    t0 = time.perf_counter()
    F1, F2 = conti_traverso_generators(inst)
    basis = pbuchberger(
        F1,
        F2,
        ext.spec,
        A=ext.A,
        fingerprint=inst.fingerprint(),
        step_cap=truncate_steps,
        pair_mode="all",
    )
    basis = reduce_basis(basis)
    timings["pgroebner"] = time.perf_counter() - t0
    if basis.stats is not None:
        timings["steps"] = basis.stats.steps
        timings["act_pgb"] = basis.stats.act_pgb
    timings["maxchains"] = len(basis.chains)

    t0 = time.perf_counter()
    start = tuple(inst.b) + zero_vec(inst.n + 1)
    rem = prem(DirectedPair.point(start), basis)
    timings["pos"] = time.perf_counter() - t0
    projected = [p.h[art:] for p in rem.members if all(v == 0 for v in p.h[:art])]
    if not projected:
        raise Infeasible("no remainder with a zero artificial block")
    return _finish_pareto(inst, projected, "ct", spec, timings, certified=basis.certified)


def solve_corank1(inst: MoipInstance, spec: PartialOrderSpec | None = None) -> ParetoSet:
    """One-dimensional-kernel shortcut.

    The fiber is the lattice line alpha - lambda * g; the Pareto set is the
    set of minimal points of that line segment.
    """
    report = validate_instance(inst)
    if not report.ok:
        raise InvalidInstance("; ".join(report.problems))
    spec = spec or default_order(inst)
    kb = kernel_basis(inst.A)
    if len(kb) != 1:
        raise ValueError(f"corank-1 pipeline requires a one-dimensional kernel, got {len(kb)}")
    g = kb.vectors[0]
    t0 = time.perf_counter()
    alpha = initial_feasible(inst)
    points = [alpha]
    for sign in (1, -1):
        lam = sign
        while True:
            cand = tuple(a - lam * gi for a, gi in zip(alpha, g))
            if not vec_is_nonneg(cand):
                break
            points.append(cand)
            lam += sign
    kept = _minimal_points(spec, points)
    dt = time.perf_counter() - t0
    return _finish_pareto(inst, kept, "corank1", spec, {"pos": dt, "gamma_size": len(points)})


# ---------------------------------------------------------------------------
# fiber skeleton


@dataclass(frozen=True)
class FiberSkeleton:
    """Directed graph on one fiber: edges are basis-element translations.

    An edge is improving when the element's leading point strictly dominates
    its tail; the Pareto points are exactly the nodes without an outgoing
    improving edge.
    """

    nodes: tuple[IntVec, ...]
    edges: tuple[tuple[IntVec, IntVec, bool], ...]  # (from, to, improving)
    pareto: tuple[IntVec, ...]

    def to_dot(self) -> str:
        def name(p: IntVec) -> str:
            return "n_" + "_".join(str(v).replace("-", "m") for v in p)

        lines = ["digraph fiber_skeleton {"]
        pareto = set(self.pareto)
        for p in self.nodes:
            label = "(" + ",".join(str(v) for v in p) + ")"
            style = ' style=bold penwidth=2' if p in pareto else ""
            lines.append(f'  {name(p)} [label="{label}"{style}];')
        for src, dst, improving in self.edges:
            style = "" if improving else " [style=dashed]"
            lines.append(f"  {name(src)} -> {name(dst)}{style};")
        lines.append("}")
        return "\n".join(lines)


def fiber_skeleton(
    inst: MoipInstance,
    basis: PGroebnerBasis,
    fiber_b: IntVec | None = None,
    max_points: int | None = 200_000,
) -> FiberSkeleton:
    """Skeleton digraph of one fiber under the basis moves.

    Every feasible translation gamma -> gamma - g is an edge (kept when the
    head stays inside the enumerated node set); improving edges are the ones
    whose move strictly lowers the objective image.
    """
    b = tuple(fiber_b) if fiber_b is not None else tuple(inst.b)
    work = MoipInstance(inst.A, b, inst.C, inst.bounds, inst.slack_indices)
    bounds = derive_bounds(work)
    nodes = sorted(enumerate_fiber(work.A, b, bounds, max_points=max_points))
    node_set = set(nodes)
    spec = basis.spec
    edges = []
    improving_out: set[IntVec] = set()
    for e in basis.elements:
        improving = compare(spec, e.h, e.tail) is Verdict.GREATER
        for gamma in nodes:
            head = vec_sub(gamma, e.g)
            if not vec_is_nonneg(head) or head not in node_set:
                continue
            edges.append((gamma, head, improving))
            if improving:
                improving_out.add(gamma)
    pareto = tuple(p for p in nodes if p not in improving_out)
    return FiberSkeleton(nodes=tuple(nodes), edges=tuple(sorted(edges)), pareto=pareto)

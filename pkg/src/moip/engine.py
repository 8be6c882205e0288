"""Partial Groebner engine: directed pairs, partial reduction, completion.

A directed pair (g, h) is a kernel move g with a designated leading point h;
subtracting g from a point at h lands on the pair's tail h - g.  Reducing a
pair by a chain repeatedly moves its leading point by applicable chain
elements, branching when the two candidate leading points of a moved pair are
incomparable, and keeps the results as an antichain (dominated members are
purged).  The completion loop closes the family of maximal chains under
S-vector reduction, Buchberger style.

Reduction semantics, fixed by the worked golden cases:

* applicable chain elements are tried on an active pair largest leading
  point first, and the scan continues while the pair stays live;
* an unambiguous division (the moved pair's two candidate leading points are
  comparable) is a classical rewrite: the single product is added and the
  parent survives unless a member strictly dominates its leading point;
* an ambiguous division (incomparable candidates) forks into both oriented
  products and consumes the parent;
* a complete cancellation (the moved pair's difference is zero) consumes the
  parent and leaves a null marker carrying the cancellation point, which
  still purges members it dominates;
* a new pair strictly dominated by an existing member is discarded outright.

Point-pairs only ever see unambiguous divisions (their tail is the origin),
so reducing a feasible point accumulates every undominated point it visits;
that is exactly the Pareto walk.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from moip.model import IntMat, IntVec, mat_vec, vec_is_nonneg, vec_is_zero, vec_sub
from moip.orders import (
    ChainFamily,
    PartialOrderSpec,
    Verdict,
    compare,
    compare_keys,
    maximal_chains,
    setlm,
)


class ReductionLimit(RuntimeError):
    """Internal work cap exceeded during a reduction or completion."""


class DirectedPair:
    """Kernel move g with leading point h; h >= 0 and h - g >= 0."""

    __slots__ = ("g", "h", "_hash")

    def __init__(self, g: IntVec, h: IntVec):
        if len(g) != len(h):
            raise ValueError("g and h must have equal length")
        for a in h:
            if a < 0:
                raise ValueError(f"leading point must be nonnegative: {h}")
        for a, b in zip(h, g):
            if a - b < 0:
                raise ValueError(f"tail must be nonnegative: h={h} g={g}")
        self.g = g
        self.h = h
        self._hash = hash((g, h))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return isinstance(other, DirectedPair) and self.g == other.g and self.h == other.h

    def __lt__(self, other) -> bool:
        return (self.g, self.h) < (other.g, other.h)

    def __le__(self, other) -> bool:
        return (self.g, self.h) <= (other.g, other.h)

    def __repr__(self) -> str:
        return f"DirectedPair(g={self.g}, h={self.h})"

    @property
    def tail(self) -> IntVec:
        return vec_sub(self.h, self.g)

    def is_null(self) -> bool:
        return vec_is_zero(self.g)

    @staticmethod
    def point(alpha: IntVec) -> "DirectedPair":
        """The point-pair (alpha, alpha); reductions of it track fiber points."""
        alpha = tuple(alpha)
        return DirectedPair(alpha, alpha)


def oriented_pairs(spec: PartialOrderSpec, u: IntVec, v: IntVec) -> tuple[DirectedPair, ...]:
    """Directed pairs for the monomial pair {u, v}: one per leading point.

    Null moves (u == v) produce nothing.
    """
    out = []
    for w in setlm(spec, u, v):
        other = v if w == u else u
        g = vec_sub(w, other)
        if not vec_is_zero(g):
            out.append(DirectedPair(g, w))
    return tuple(out)


def expand_orientations(spec: PartialOrderSpec, pair: DirectedPair) -> tuple[DirectedPair, ...]:
    """Re-expand a pair through its monomials: both orientations when the
    leading point and tail are incomparable, else the dominant one."""
    return oriented_pairs(spec, pair.h, pair.tail)


class ReductionSet:
    """Antichain of directed pairs under the order on leading points.

    Inserting a pair purges members it strictly dominates and is rejected
    when an existing member strictly dominates it.  Null pairs participate
    with their cancellation point as key.
    """

    def __init__(self, spec: PartialOrderSpec):
        self.spec = spec
        self.members: list[DirectedPair] = []
        self._keys: list[tuple] = []
        self._set: set[DirectedPair] = set()

    def __contains__(self, p: DirectedPair) -> bool:
        return p in self._set

    def __len__(self) -> int:
        return len(self.members)

    def insert(self, p: DirectedPair) -> bool:
        """True iff p was added; False for duplicates and dominated pairs."""
        if p in self._set:
            return False
        kp = self.spec.okey(p.h)
        drop = []
        for i, s in enumerate(self.members):
            if p.h == s.h:
                continue
            v = compare_keys(kp, self._keys[i])
            if v is Verdict.GREATER:
                return False
            if v is Verdict.LESS:
                drop.append(i)
        for i in reversed(drop):
            self._set.discard(self.members[i])
            del self.members[i]
            del self._keys[i]
        self.members.append(p)
        self._keys.append(kp)
        self._set.add(p)
        return True

    def remove(self, p: DirectedPair) -> None:
        if p in self._set:
            i = self.members.index(p)
            del self.members[i]
            del self._keys[i]
            self._set.discard(p)

    def nonnull(self) -> tuple[DirectedPair, ...]:
        return tuple(p for p in self.members if not p.is_null())

    def is_zero(self) -> bool:
        """True when everything cancelled: only null markers remain."""
        return all(p.is_null() for p in self.members)

    def sorted_members(self) -> tuple[DirectedPair, ...]:
        return tuple(sorted(self.members))


def _chain_is_valid(spec: PartialOrderSpec, chain: Sequence[DirectedPair]) -> bool:
    return all(
        compare(spec, chain[i].h, chain[i + 1].h) is Verdict.GREATER for i in range(len(chain) - 1)
    )


def _divides(h_small: IntVec, h_big: IntVec) -> bool:
    return all(a <= b for a, b in zip(h_small, h_big))


def _step(cur: DirectedPair, red: DirectedPair) -> tuple[IntVec, IntVec]:
    """Candidate leading points of the pair moved by one chain element."""
    h_moved = vec_sub(cur.h, red.g)  # leading point after the move
    h_tail = cur.tail                # untouched monomial of the pair
    return h_moved, h_tail


def preduce(
    pair: DirectedPair,
    chain: Sequence[DirectedPair],
    spec: PartialOrderSpec,
    max_work: int = 2_000_000,
) -> ReductionSet:
    """Partial reduction of one pair by a single totally ordered chain.

    The chain must be strictly decreasing on leading points.  Returns the
    antichain of irreducible results; null markers record cancellations.
    """
    chain = list(chain)
    if not _chain_is_valid(spec, chain):
        raise ValueError("reducers do not form a chain (not totally ordered decreasing)")
    R = ReductionSet(spec)
    R.insert(pair)
    queue: deque[DirectedPair] = deque([pair])
    seen: set[DirectedPair] = {pair}
    work = 0
    while queue:
        work += 1
        if work > max_work:
            raise ReductionLimit("partial reduction exceeded its work cap")
        cur = queue.popleft()
        if cur not in R or cur.is_null():
            continue
        for red in chain:
            if not _divides(red.h, cur.h):
                continue
            h_moved, h_tail = _step(cur, red)
            if h_moved == h_tail:
                # complete cancellation: the moved pair is zero
                R.remove(cur)
                R.insert(DirectedPair(tuple(0 for _ in h_moved), h_moved))
                break
            v = compare(spec, h_moved, h_tail)
            if v is Verdict.GREATER:
                products = (DirectedPair(vec_sub(h_moved, h_tail), h_moved),)
            elif v is Verdict.LESS:
                products = (DirectedPair(vec_sub(h_tail, h_moved), h_tail),)
            else:
                products = (
                    DirectedPair(vec_sub(h_moved, h_tail), h_moved),
                    DirectedPair(vec_sub(h_tail, h_moved), h_tail),
                )
            if v is Verdict.INCOMPARABLE or red.h == cur.h:
                # ambiguous leading term, or the head cancelled completely:
                # the parent is rewritten away
                R.remove(cur)
            for p in products:
                if R.insert(p) and p not in seen:
                    seen.add(p)
                    queue.append(p)
            if cur not in R:
                break  # consumed or dominated
    return R


@dataclass(frozen=True)
class CompletionStats:
    """Bookkeeping of one completion run."""

    steps: int
    sv_processed: int
    seconds: float
    act_pgb: float
    certified: bool


@dataclass(frozen=True)
class PGroebnerBasis:
    """Family of maximal chains of directed pairs closed under S-vector
    reduction; the reduced form is the unique minimal test family.

    ``seeds`` records the generator-derived pairs whose S-vectors drive the
    completion and the criterion check; adjoined elements enlarge the chains
    (and so the reduction power) but spawn no further S-pairs.
    """

    elements: tuple[DirectedPair, ...]
    chains: tuple[tuple[DirectedPair, ...], ...]
    spec: PartialOrderSpec
    seeds: tuple[DirectedPair, ...] = ()
    matrix_fingerprint: str = ""
    stats: CompletionStats | None = None
    certified: bool = True

    def __len__(self) -> int:
        return len(self.elements)

    def with_chain_order(self, order: Sequence[int]) -> "PGroebnerBasis":
        if sorted(order) != list(range(len(self.chains))):
            raise ValueError("chain order must be a permutation")
        return PGroebnerBasis(
            elements=self.elements,
            chains=tuple(self.chains[i] for i in order),
            spec=self.spec,
            seeds=self.seeds,
            matrix_fingerprint=self.matrix_fingerprint,
            stats=self.stats,
            certified=self.certified,
        )


def _build_chains(spec: PartialOrderSpec, elements: Iterable[DirectedPair]) -> tuple[tuple[DirectedPair, ...], ...]:
    elems = sorted(set(elements))
    if not elems:
        return ()
    fam = maximal_chains(spec, elems, key=lambda e: e.h)
    return tuple(fam.chains)


def make_basis(
    spec: PartialOrderSpec,
    elements: Iterable[DirectedPair],
    seeds: Iterable[DirectedPair] = (),
    fingerprint: str = "",
    stats: CompletionStats | None = None,
    certified: bool = True,
) -> PGroebnerBasis:
    elems = tuple(sorted(set(elements)))
    return PGroebnerBasis(
        elements=elems,
        chains=_build_chains(spec, elems),
        spec=spec,
        seeds=tuple(sorted(set(seeds))),
        matrix_fingerprint=fingerprint,
        stats=stats,
        certified=certified,
    )


def prem(
    pair: DirectedPair,
    basis: PGroebnerBasis,
    chain_order: Sequence[int] | None = None,
    max_work: int = 2_000_000,
) -> ReductionSet:
    """Worklist closure of partial reduction over every chain of the basis.

    Each member is reduced by each chain until all members are irreducible
    by all chains; the result is independent of the chain visitation order.
    """
    spec = basis.spec
    chains = list(basis.chains)
    if chain_order is not None:
        chains = [chains[i] for i in chain_order]
    R = ReductionSet(spec)
    R.insert(pair)
    if not chains:
        return R
    queue: deque[DirectedPair] = deque([pair])
    processed: set[tuple[DirectedPair, int]] = set()
    work = 0
    while queue:
        cur = queue.popleft()
        if cur not in R or cur.is_null():
            continue
        for ci, chain in enumerate(chains):
            work += 1
            if work > max_work:
                raise ReductionLimit("prem exceeded its work cap")
            if (cur, ci) in processed:
                continue
            processed.add((cur, ci))
            out = preduce(cur, chain, spec, max_work=max_work)
            if len(out) == 1 and out.members[0] == cur:
                continue
            if cur not in out:
                R.remove(cur)
            for r in out.members:
                if r == cur:
                    continue
                if R.insert(r) and not r.is_null():
                    queue.append(r)
            if cur not in R:
                break
    return R


@dataclass(frozen=True)
class SVectorPair:
    """The one or two oriented critical pairs of two directed pairs."""

    s1: DirectedPair | None
    s2: DirectedPair | None

    def items(self) -> tuple[tuple[int, DirectedPair], ...]:
        out = []
        if self.s1 is not None:
            out.append((1, self.s1))
        if self.s2 is not None and self.s2 != self.s1:
            out.append((2, self.s2))
        return tuple(out)


def svectors(p: DirectedPair, q: DirectedPair, spec: PartialOrderSpec) -> SVectorPair:
    """S-vectors of two pairs at the componentwise max of their leading points.

    With gamma_i = max(h_i, h'_i) the two candidate leading points are
    gamma - g' and gamma - g; when comparable both S-vectors coincide and take
    the larger one, otherwise each takes one orientation.

    Two orientations of one move (g' = -g) self-cancel: their S-vector is the
    doubled move, which two applications of the move itself annihilate, so
    the pair contributes nothing.
    """
    if q.g == tuple(-a for a in p.g):
        return SVectorPair(None, None)
    gamma = tuple(max(a, b) for a, b in zip(p.h, q.h))
    ca = vec_sub(gamma, q.g)  # leading candidate for orientation g - g'
    cb = vec_sub(gamma, p.g)  # leading candidate for orientation g' - g
    if ca == cb:
        return SVectorPair(None, None)
    v = compare(spec, ca, cb)
    pa = DirectedPair(vec_sub(ca, cb), ca)
    pb = DirectedPair(vec_sub(cb, ca), cb)
    if v is Verdict.GREATER:
        return SVectorPair(pa, pa)
    if v is Verdict.LESS:
        return SVectorPair(pb, pb)
    return SVectorPair(pa, pb)


def _kernel_check(A: IntMat | None, u: IntVec, v: IntVec) -> None:
    if A is not None:
        diff = vec_sub(u, v)
        if any(x != 0 for x in mat_vec(A, diff)):
            raise ValueError(f"generator pair not in the kernel: {u} / {v}")


def pbuchberger(
    F1: Sequence[IntVec],
    F2: Sequence[IntVec],
    spec: PartialOrderSpec,
    A: IntMat | None = None,
    fingerprint: str = "",
    step_cap: int | None = None,
    max_steps: int = 200,
    pair_mode: str = "seeds",
) -> PGroebnerBasis:
    """Buchberger-style completion to a partial Groebner basis.

    F1, F2 hold aligned monomial pairs whose differences span the kernel
    lattice; their oriented directed pairs are the completion's seeds.  Each
    outer step rebuilds the maximal chains of everything collected so far,
    partially reduces S-vectors against that snapshot, and adjoins the
    surviving remainders.  The loop stops at the first step that adjoins
    nothing, so the final step re-verifies the S-vectors against the
    finished family.

    ``pair_mode`` picks the S-pair universe: "seeds" forms S-vectors of the
    generator-derived pairs only (adjoined elements strengthen the chains
    but spawn no pairs), "all" closes over every element pair.  The big-M
    pipeline needs "all"; the generator pipeline matches the published
    worked bases with "seeds".

    ``step_cap`` optionally truncates the completion after that many steps;
    the result is then marked not certified.
    """
    if len(F1) != len(F2):
        raise ValueError("generator sequences must have equal length")
    if pair_mode not in ("seeds", "all"):
        raise ValueError(f"unknown pair_mode: {pair_mode}")
    seeds: set[DirectedPair] = set()
    for u, v in zip(F1, F2):
        _kernel_check(A, tuple(u), tuple(v))
        seeds.update(oriented_pairs(spec, tuple(u), tuple(v)))
    seed_list = tuple(sorted(seeds))
    elements: set[DirectedPair] = set(seeds)

    t0 = time.perf_counter()
    last_growth = t0
    processed: set[tuple[DirectedPair, DirectedPair, int]] = set()
    steps = 0
    sv_count = 0
    certified = True
    while True:
        steps += 1
        if steps > max_steps:
            raise ReductionLimit("completion exceeded its step cap")
        snapshot = make_basis(spec, elements, seeds=seed_list, fingerprint=fingerprint)
        universe = seed_list if pair_mode == "seeds" else snapshot.elements
        new_elements: set[DirectedPair] = set()
        for e1, e2 in combinations(universe, 2):
            for k, s in svectors(e1, e2, spec).items():
                if pair_mode == "all":
                    key = (e1, e2, k)
                    if key in processed:
                        continue
                    processed.add(key)
                sv_count += 1
                rem = prem(s, snapshot)
                for r in rem.nonnull():
                    if r not in elements:
                        new_elements.add(r)
        if not new_elements:
            break
        elements.update(new_elements)
        last_growth = time.perf_counter()
        if step_cap is not None and steps >= step_cap:
            certified = False
            break
    t1 = time.perf_counter()
    stats = CompletionStats(
        steps=steps,
        sv_processed=sv_count,
        seconds=t1 - t0,
        act_pgb=t1 - last_growth,
        certified=certified,
    )
    return make_basis(
        spec, elements, seeds=seed_list, fingerprint=fingerprint, stats=stats, certified=certified
    )


def reduce_basis(basis: PGroebnerBasis) -> PGroebnerBasis:
    """Drop every element that the other members of its own chain cancel.

    An element is redundant when partial reduction by its chain companions
    cancels it completely (only null markers remain).  The scan repeats until
    stable; the surviving family is the reduced basis.
    """
    spec = basis.spec
    elements = set(basis.elements)
    changed = True
    while changed:
        changed = False
        chains = _build_chains(spec, elements)
        for e in sorted(elements):
            for chain in chains:
                if e not in chain:
                    continue
                others = [x for x in chain if x != e]
                if not others:
                    continue
                if preduce(e, others, spec).is_zero():
                    elements.discard(e)
                    changed = True
                    break
            if changed:
                break
    return make_basis(
        spec,
        elements,
        seeds=basis.seeds,
        fingerprint=basis.matrix_fingerprint,
        stats=basis.stats,
        certified=basis.certified,
    )


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of the extended Buchberger criterion check."""

    holds: bool
    certificate: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_criterion(basis: PGroebnerBasis) -> CriterionReport:
    """Extended Buchberger criterion: every S-vector of distinct seed pairs
    partially reduces to the zero set (only null markers survive).

    Bases without recorded seeds are checked over all element pairs.  On
    failure the certificate carries (element, element, k, S-vector,
    surviving remainder).
    """
    spec = basis.spec
    universe = basis.seeds if basis.seeds else basis.elements
    for e1, e2 in combinations(universe, 2):
        sv = svectors(e1, e2, spec)
        for k, s in sv.items():
            rem = prem(s, basis)
            if not rem.is_zero():
                survivor = rem.nonnull()[0]
                return CriterionReport(False, (e1, e2, k, s, survivor))
    return CriterionReport(True, None)

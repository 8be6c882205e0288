"""Objective-induced partial orders and finite-poset machinery.

The core relation: x is below y when C x <= C y componentwise with C x != C y.
Two refinements resolve equal-image ties, one by full lexicographic order and
one by lexicographic order on the slack sub-vectors only.  An optional
artificial prefix (used by the extended big-M pipeline) compares the sum of
the first ``art_count`` coordinates before the objective image, which realizes
arbitrarily large artificial weights without any numeric big-M constant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product as _product
from typing import Callable, Hashable, Iterable, Sequence

from moip.model import IntMat, IntVec, mat, mat_vec


class Verdict(enum.Enum):
    LESS = "LESS"
    GREATER = "GREATER"
    EQUAL = "EQUAL"
    INCOMPARABLE = "INCOMPARABLE"


class OrderVariant(enum.Enum):
    PLAIN = "plain"
    LEX_REFINED = "lex"
    SLACK_REFINED = "slack"


@dataclass(frozen=True, eq=True)
class PartialOrderSpec:
    """Which order variant to use, plus the data that parameterizes it.

    ``slack_indices`` is required (nonempty, disjoint from objective-bearing
    columns) iff the variant is SLACK_REFINED.  ``art_count`` > 0 marks the
    first ``art_count`` columns as artificial: their coordinate sum is
    compared before the objective image (two-level big-M comparison).
    """

    C: IntMat
    variant: OrderVariant = OrderVariant.PLAIN
    slack_indices: tuple[int, ...] = ()
    art_count: int = 0
    _key_cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "C", mat(self.C))
        object.__setattr__(self, "slack_indices", tuple(sorted(set(self.slack_indices))))
        if self.variant is OrderVariant.SLACK_REFINED:
            if not self.slack_indices:
                raise ValueError("slack-refined order requires nonempty slack_indices")
            for j in self.slack_indices:
                base_j = j - self.art_count
                if base_j < 0 or any(row[base_j] != 0 for row in self.C):
                    raise ValueError(f"slack column {j} carries objective weight")

    @property
    def ncols(self) -> int:
        return self.art_count + (len(self.C[0]) if self.C else 0)

    def okey(self, x: IntVec) -> tuple:
        """(artificial sum, objective image, tie-break part), cached per vector."""
        key = self._key_cache.get(x)
        if key is None:
            art = sum(x[: self.art_count]) if self.art_count else 0
            img = mat_vec(self.C, x[self.art_count:])
            if self.variant is OrderVariant.LEX_REFINED:
                tie = x
            elif self.variant is OrderVariant.SLACK_REFINED:
                tie = tuple(x[j] for j in self.slack_indices)
            else:
                tie = None
            key = (art, img, tie)
            self._key_cache[x] = key
        return key

    def image(self, x: IntVec) -> IntVec:
        """Objective image of the non-artificial part of x, cached."""
        return self.okey(x)[1]

    def art_sum(self, x: IntVec) -> int:
        return sum(x[: self.art_count])

    def slack_part(self, x: IntVec) -> IntVec:
        return tuple(x[j] for j in self.slack_indices)


def compare_keys(ka: tuple, kb: tuple) -> Verdict:
    """Order verdict from two cached okey tuples of distinct vectors."""
    sa, ia, ta = ka
    sb, ib, tb = kb
    if sa != sb:
        return Verdict.LESS if sa < sb else Verdict.GREATER
    if ia == ib:
        if ta is not None and ta != tb:
            return Verdict.LESS if ta < tb else Verdict.GREATER
        return Verdict.INCOMPARABLE
    le = True
    ge = True
    for a, b in zip(ia, ib):
        if a > b:
            le = False
        elif a < b:
            ge = False
    if le:
        return Verdict.LESS
    if ge:
        return Verdict.GREATER
    return Verdict.INCOMPARABLE


def compare(spec: PartialOrderSpec, x: IntVec, y: IntVec) -> Verdict:
    """Compare two vectors under the order spec.

    PLAIN: LESS iff Cx <= Cy componentwise with Cx != Cy; EQUAL iff x == y;
    INCOMPARABLE otherwise (equal images on distinct vectors included).
    The refinements break equal-image ties lexicographically (on the whole
    vector, or on the slack sub-vector).  With an artificial prefix the
    prefix sums are compared first.
    """
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    if x == y:
        return Verdict.EQUAL
    return compare_keys(spec.okey(x), spec.okey(y))


def strictly_less(spec: PartialOrderSpec, x: IntVec, y: IntVec) -> bool:
    return compare(spec, x, y) is Verdict.LESS


def setlm(spec: PartialOrderSpec, u: IntVec, v: IntVec) -> tuple[IntVec, ...]:
    """Leading points of the pair {u, v}: the strictly larger one, or both
    when incomparable.  setlm(u, u) returns just (u,)."""
    verdict = compare(spec, u, v)
    if verdict is Verdict.EQUAL:
        return (u,)
    if verdict is Verdict.LESS:
        return (v,)
    if verdict is Verdict.GREATER:
        return (u,)
    return (u, v)


@dataclass(frozen=True)
class Triplet:
    """A pair (u, v) together with one designated leading point w in setlm(u, v)."""

    u: IntVec
    v: IntVec
    w: IntVec

    def __post_init__(self):
        if self.w != self.u and self.w != self.v:
            raise ValueError("leading point must be one of the pair members")


def triplet_set(
    spec: PartialOrderSpec, U: Sequence[IntVec], V: Sequence[IntVec]
) -> tuple[Triplet, ...]:
    """One triplet per leading point, for every aligned pair (u_i, v_i)."""
    if len(U) != len(V):
        raise ValueError(f"length mismatch: {len(U)} vs {len(V)}")
    out = []
    for u, v in zip(U, V):
        for w in setlm(spec, u, v):
            out.append(Triplet(tuple(u), tuple(v), tuple(w)))
    return tuple(out)


@dataclass(frozen=True)
class ChainFamily:
    """The maximal chains of a finite set of keyed items.

    Each chain is strictly decreasing under the order on its keys.  Every
    input item appears in at least one chain and no chain extends another.
    """

    chains: tuple[tuple, ...]

    def __len__(self) -> int:
        return len(self.chains)

    def __iter__(self):
        return iter(self.chains)


def maximal_chains(
    spec: PartialOrderSpec,
    items: Sequence,
    key: Callable[[Hashable], IntVec] = lambda it: it,
    max_chains: int | None = 500_000,
) -> ChainFamily:
    """All maximal chains of the strict-order DAG on the items' keys.

    Items with identical keys are mutually incomparable and therefore land in
    parallel chains (at most one of them per chain).  Chains are computed on
    the Hasse diagram by depth-first search from the maximal elements and are
    returned sorted by their key sequences, so the output is deterministic.
    """
    items = list(items)
    if not items:
        return ChainFamily(())

    groups: dict[IntVec, list] = {}
    for it in items:
        groups.setdefault(tuple(key(it)), []).append(it)
    for g in groups.values():
        g.sort()
    keys = sorted(groups)

    below: dict[IntVec, set[IntVec]] = {k: set() for k in keys}  # strictly smaller keys
    for a in keys:
        for b in keys:
            if a != b and compare(spec, b, a) is Verdict.LESS:
                below[a].add(b)

    # Hasse covers: b is covered by a iff b < a with nothing in between.
    covers: dict[IntVec, list[IntVec]] = {}
    for a in keys:
        smaller = below[a]
        covers[a] = sorted(b for b in smaller if not any(b in below[c] for c in smaller if c != b))

    maximal = [k for k in keys if not any(k in below[a] for a in keys)]

    key_chains: list[tuple[IntVec, ...]] = []

    def walk(k: IntVec, path: list[IntVec]):
        kids = covers[k]
        if not kids:
            key_chains.append(tuple(path))
            return
        for c in kids:
            path.append(c)
            walk(c, path)
            path.pop()

    for k in sorted(maximal):
        walk(k, [k])

    if max_chains is not None:
        total = 0
        for kc in key_chains:
            n = 1
            for k in kc:
                n *= len(groups[k])
            total += n
            if total > max_chains:
                raise RuntimeError(f"maximal chain count exceeds cap {max_chains}")

    chains = []
    for kc in key_chains:
        for combo in _product(*(groups[k] for k in kc)):
            chains.append(tuple(combo))
    chains.sort(key=lambda ch: tuple(tuple(key(e)) for e in ch))
    return ChainFamily(tuple(chains))

"""Integer lattice algebra: HNF kernels, exact LLL, binomial Groebner bases.

The generating set of the toric ideal of A is produced by the classic
saturation pipeline: kernel lattice basis (via column Hermite normal form),
LLL reduction, then one reduced-Groebner-basis round per variable under a
graded reverse lexicographic order that makes that variable cheapest,
dividing out its powers.

Binomials are kept in exponent-pair form throughout; no polynomial data
structures are ever built.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from moip.model import IntMat, IntVec, mat_vec, vec, vec_is_zero


# ---------------------------------------------------------------------------
# Hermite normal form and integer kernels


def _exgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, s, t with s*a + t*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def column_hnf(A: IntMat) -> tuple[list[list[int]], list[list[int]], list[tuple[int, int]]]:
    """Column-style HNF: returns (H, U, pivots) with A @ U = H, U unimodular.

    H has one pivot column per independent row, pivots positive, and all
    columns right of the pivot block zero.  ``pivots`` lists (row, col) pivot
    positions in elimination order.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    H = [list(row) for row in A]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def colcombine(j1: int, j2: int, a: int, b: int, c: int, d: int) -> None:
        # (col j1, col j2) <- (a*j1 + b*j2, c*j1 + d*j2); ad - bc = +-1
        for M in (H, U):
            for row in M:
                x, y = row[j1], row[j2]
                row[j1], row[j2] = a * x + b * y, c * x + d * y

    pivots: list[tuple[int, int]] = []
    col = 0
    for row in range(m):
        if col >= n:
            break
        pivot_col = None
        for j in range(col, n):
            if H[row][j] != 0:
                pivot_col = j
                break
        if pivot_col is None:
            continue
        if pivot_col != col:
            colcombine(col, pivot_col, 0, 1, 1, 0)
        for j in range(col + 1, n):
            if H[row][j] == 0:
                continue
            g, s, t = _exgcd(H[row][col], H[row][j])
            p, q = H[row][col] // g, H[row][j] // g
            # new col = s*col + t*j (entry g), new j = -q*col + p*j (entry 0);
            # det = s*p + t*q = 1
            colcombine(col, j, s, t, -q, p)
        if H[row][col] < 0:
            for M in (H, U):
                for r2 in M:
                    r2[col] = -r2[col]
        pivots.append((row, col))
        col += 1
    return H, U, pivots


@dataclass(frozen=True)
class LatticeBasis:
    """Basis of the integer kernel lattice of a constraint matrix."""

    vectors: tuple[IntVec, ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def kernel_basis(A: IntMat) -> LatticeBasis:
    """Basis of ker_Z(A), saturated by construction (HNF transform columns).

    The size is n - rank(A); a full-rank matrix yields an empty basis.
    """
    n = len(A[0]) if A else 0
    H, U, pivots = column_hnf(A)
    rank = len(pivots)
    vecs = []
    for j in range(rank, n):
        v = tuple(U[i][j] for i in range(n))
        vecs.append(v)
    return LatticeBasis(tuple(vecs))


def particular_solution(A: IntMat, b: IntVec) -> IntVec | None:
    """An integer solution of A x = b, or None when none exists."""
    m = len(A)
    n = len(A[0]) if A else 0
    H, U, pivots = column_hnf(A)
    y = [0] * n
    pivot_rows = {row: col for row, col in pivots}
    for row in range(m):
        acc = sum(H[row][j] * y[j] for j in range(n))
        resid = b[row] - acc
        if row in pivot_rows:
            col = pivot_rows[row]
            p = H[row][col]
            if resid % p != 0:
                return None
            y[col] = resid // p
        elif resid != 0:
            return None
    return tuple(sum(U[i][j] * y[j] for j in range(n)) for i in range(n))


def row_lattice_canonical(vectors: Sequence[IntVec]) -> tuple[IntVec, ...]:
    """Canonical row-HNF of the lattice spanned by the given row vectors.

    Two generating sets span the same lattice iff their canonical forms are
    equal.
    """
    rows = [list(v) for v in vectors if not vec_is_zero(tuple(v))]
    if not rows:
        return ()
    n = len(rows[0])
    pivot_row = 0
    for col in range(n):
        pool = [i for i in range(pivot_row, len(rows)) if rows[i][col] != 0]
        if not pool:
            continue
        i0 = pool[0]
        rows[pivot_row], rows[i0] = rows[i0], rows[pivot_row]
        for i in range(pivot_row + 1, len(rows)):
            while rows[i][col] != 0:
                g, s, t = _exgcd(rows[pivot_row][col], rows[i][col])
                p = rows[pivot_row][col] // g
                q = rows[i][col] // g
                r_top = [s * a + t * c for a, c in zip(rows[pivot_row], rows[i])]
                r_bot = [-q * a + p * c for a, c in zip(rows[pivot_row], rows[i])]
                rows[pivot_row], rows[i] = r_top, r_bot
        if rows[pivot_row][col] < 0:
            rows[pivot_row] = [-a for a in rows[pivot_row]]
        for i in range(pivot_row):
            q = rows[i][col] // rows[pivot_row][col]
            if q:
                rows[i] = [a - q * p for a, p in zip(rows[i], rows[pivot_row])]
        pivot_row += 1
    rows = [tuple(r) for r in rows[:pivot_row]]
    return tuple(rows)


def same_lattice(vs1: Sequence[IntVec], vs2: Sequence[IntVec]) -> bool:
    return row_lattice_canonical(vs1) == row_lattice_canonical(vs2)


# ---------------------------------------------------------------------------
# exact LLL (delta = 3/4, rational Gram-Schmidt)


def _dot_frac(x, y):
    return sum(a * b for a, b in zip(x, y))


def lll_reduce(basis: LatticeBasis | Sequence[IntVec], delta: Fraction = Fraction(3, 4)) -> LatticeBasis:
    """LLL reduction with exact rational arithmetic.

    The output spans the same lattice and satisfies size reduction
    (|mu_ij| <= 1/2) and the Lovasz condition with the given delta.
    """
    vecs = [list(v) for v in (basis.vectors if isinstance(basis, LatticeBasis) else basis)]
    if not vecs:
        return LatticeBasis(())
    b = [[Fraction(a) for a in v] for v in vecs]
    n = len(b)

    def gram_schmidt():
        ortho = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            w = list(b[i])
            for j in range(len(ortho)):
                denom = _dot_frac(ortho[j], ortho[j])
                mu[i][j] = _dot_frac(b[i], ortho[j]) / denom
                w = [a - mu[i][j] * o for a, o in zip(w, ortho[j])]
            ortho.append(w)
        return ortho, mu

    ortho, mu = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                r = _round_half(mu[k][j])
                b[k] = [a - r * c for a, c in zip(b[k], b[j])]
                ortho, mu = gram_schmidt()
        lhs = _dot_frac(ortho[k], ortho[k])
        rhs = (delta - mu[k][k - 1] ** 2) * _dot_frac(ortho[k - 1], ortho[k - 1])
        if lhs >= rhs:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            ortho, mu = gram_schmidt()
            k = max(k - 1, 1)
    out = tuple(tuple(int(a) for a in v) for v in b)
    return LatticeBasis(out)


def _round_half(x: Fraction) -> int:
    # round to nearest integer, half away from zero
    num, den = x.numerator, x.denominator
    if num >= 0:
        return (2 * num + den) // (2 * den)
    return -((-2 * num + den) // (2 * den))


# ---------------------------------------------------------------------------
# total term orders and binomial Groebner bases


@dataclass(frozen=True)
class TermOrder:
    """Weighted graded reverse-lex order with rotated variable priority.

    Exponent vectors compare by weighted degree first, then total degree,
    then reverse-lexicographically with priority x_{i+1} > ... > x_n > x_1
    > ... > x_i for the designated rotation index i (1-based); the rotated
    last variable x_i is the cheapest.
    """

    n: int
    rotation: int = 1
    weights: tuple[int, ...] | None = None

    def __post_init__(self):
        if not (1 <= self.rotation <= self.n):
            raise ValueError("rotation index out of range")
        if self.weights is not None:
            object.__setattr__(self, "weights", vec(self.weights))
            if len(self.weights) != self.n or any(w < 0 for w in self.weights):
                raise ValueError("weights must be nonnegative, length n")

    def _key(self, alpha: IntVec):
        w = sum(self.weights[i] * alpha[i] for i in range(self.n)) if self.weights else sum(alpha)
        deg = sum(alpha)
        # revlex: larger iff the last nonzero of (alpha - beta) in priority
        # order is negative; encode by negated reversed priority view
        prio = [(self.rotation + j) % self.n for j in range(self.n)]  # x_{i+1}..x_i (0-based)
        rv = tuple(-alpha[p] for p in reversed(prio))
        return (w, deg, rv)


def term_compare(order: TermOrder, alpha: IntVec, beta: IntVec) -> int:
    """-1, 0, or 1: alpha below, equal to, or above beta in the total order."""
    ka, kb = order._key(alpha), order._key(beta)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


@dataclass(frozen=True, order=True)
class Binomial:
    """x^plus - x^minus with disjoint supports; plus is the leading exponent."""

    plus: IntVec
    minus: IntVec

    @property
    def vector(self) -> IntVec:
        return tuple(p - m for p, m in zip(self.plus, self.minus))


def make_binomial(u: IntVec, v: IntVec, order: TermOrder) -> Binomial | None:
    """Normalized binomial with monomials u, v; None if it cancels to zero.

    Common variable factors are stripped (supports made disjoint) and the
    leading side is chosen by the term order.
    """
    plus = list(u)
    minus = list(v)
    for i in range(len(plus)):
        c = min(plus[i], minus[i])
        if c:
            plus[i] -= c
            minus[i] -= c
    p, mnus = tuple(plus), tuple(minus)
    if p == mnus:
        return None
    cmp = term_compare(order, p, mnus)
    if cmp == 0:
        raise ValueError("term order failed to separate distinct monomials")
    if cmp < 0:
        p, mnus = mnus, p
    return Binomial(p, mnus)


def binomial_from_vector(v: IntVec, order: TermOrder) -> Binomial | None:
    plus = tuple(a if a > 0 else 0 for a in v)
    minus = tuple(-a if a < 0 else 0 for a in v)
    return make_binomial(plus, minus, order)


def _divides(d: IntVec, a: IntVec) -> bool:
    return all(x <= y for x, y in zip(d, a))


def _reduce_monomial_once(alpha: IntVec, G: Sequence[Binomial]) -> IntVec | None:
    for g in G:
        if _divides(g.plus, alpha):
            return tuple(a - p + m for a, p, m in zip(alpha, g.plus, g.minus))
    return None


def monomial_normal_form(alpha: IntVec, G: Sequence[Binomial], order: TermOrder) -> IntVec:
    """Normal form of a single monomial: the classical improvement walk."""
    cur = alpha
    while True:
        nxt = _reduce_monomial_once(cur, G)
        if nxt is None:
            return cur
        cur = nxt


def _normal_form(f: Binomial, G: Sequence[Binomial], order: TermOrder) -> Binomial | None:
    """Reduce the leading term of f by G until irreducible; None on zero."""
    cur = f
    while True:
        reduced = False
        for g in G:
            if g is cur:
                continue
            if _divides(g.plus, cur.plus):
                nxt = make_binomial(
                    tuple(a - p + m for a, p, m in zip(cur.plus, g.plus, g.minus)),
                    cur.minus,
                    order,
                )
                if nxt is None:
                    return None
                cur = nxt
                reduced = True
                break
        if not reduced:
            return cur


def _spair(f: Binomial, g: Binomial, order: TermOrder) -> Binomial | None:
    gamma = tuple(max(a, b) for a, b in zip(f.plus, g.plus))
    u = tuple(c - p + m for c, p, m in zip(gamma, f.plus, f.minus))
    v = tuple(c - p + m for c, p, m in zip(gamma, g.plus, g.minus))
    return make_binomial(u, v, order)


def buchberger_total(gens: Iterable[Binomial], order: TermOrder) -> tuple[Binomial, ...]:
    """Reduced Groebner basis of the binomial ideal under a total term order.

    Standard Buchberger loop with the coprime-leading-support criterion,
    S-pairs drawn by ascending lcm degree, followed by auto-reduction.  The
    result is unique for the order, hence independent of generator order.
    """
    G: list[Binomial] = []
    for g in gens:
        if g is not None:
            nf = _normal_form(g, G, order)
            if nf is not None:
                G.append(nf)

    pairs = {(i, j) for i in range(len(G)) for j in range(i)}
    while pairs:
        i, j = min(pairs, key=lambda p: (sum(max(a, b) for a, b in zip(G[p[0]].plus, G[p[1]].plus)), p))
        pairs.discard((i, j))
        f, g = G[i], G[j]
        if all(a == 0 or b == 0 for a, b in zip(f.plus, g.plus)):
            continue  # coprime leading supports: S-pair reduces to zero
        s = _spair(f, g, order)
        if s is None:
            continue
        nf = _normal_form(s, G, order)
        if nf is None:
            continue
        G.append(nf)
        k = len(G) - 1
        pairs.update((k, t) for t in range(k))

    # auto-reduce: leading terms minimal, tails fully reduced
    changed = True
    while changed:
        changed = False
        for i in range(len(G)):
            g = G[i]
            if g is None:
                continue
            rest = [h for t, h in enumerate(G) if h is not None and t != i]
            nf = _normal_form(g, rest, order)
            if nf is not None:
                tail = monomial_normal_form(nf.minus, rest, order)
                if tail != nf.minus:
                    nf = make_binomial(nf.plus, tail, order)
            if nf != g:
                G[i] = nf
                changed = True
    out = sorted(set(g for g in G if g is not None))
    return tuple(out)


def saturate_variable(gb: Sequence[Binomial], i: int, order: TermOrder) -> tuple[Binomial, ...]:
    """Divide each binomial by the highest power of x_i dividing it (0-based i).

    With disjoint-support normalization this is usually the identity; it is
    kept as the explicit saturation step of the generator pipeline.
    """
    out = []
    for g in gb:
        c = min(g.plus[i], g.minus[i])
        if c:
            plus = list(g.plus)
            minus = list(g.minus)
            plus[i] -= c
            minus[i] -= c
            g2 = make_binomial(tuple(plus), tuple(minus), order)
            if g2 is not None:
                out.append(g2)
        else:
            out.append(g)
    return tuple(out)


@dataclass(frozen=True)
class GeneratorSet:
    """Monomial pairs (u, v) with u - v in ker(A), generating the toric ideal."""

    pairs: tuple[tuple[IntVec, IntVec], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def set_of_generators(A: IntMat) -> GeneratorSet:
    """Generating set of the toric ideal of A.

    Pipeline: HNF kernel basis, LLL reduction, the lattice-basis binomial
    ideal, then n saturation rounds.  Round i recomputes the reduced Groebner
    basis under the graded revlex order with x_i cheapest and divides out
    x_i powers.
    """
    n = len(A[0]) if A else 0
    kb = kernel_basis(A)
    if not len(kb):
        return GeneratorSet(())
    red = lll_reduce(kb)
    order0 = TermOrder(n=n, rotation=1)
    current = [b for b in (binomial_from_vector(v, order0) for v in red) if b is not None]
    for i in range(1, n + 1):
        order_i = TermOrder(n=n, rotation=i)
        current = [
            g for g in (make_binomial(b.plus, b.minus, order_i) for b in current) if g is not None
        ]
        gb = buchberger_total(current, order_i)
        current = list(saturate_variable(gb, i - 1, order_i))
    pairs = sorted((b.plus, b.minus) for b in current)
    return GeneratorSet(tuple(pairs))

"""Exact data model: integer vectors and matrices, problem instances, validation.

Vectors are plain tuples of Python ints (arbitrary precision), matrices are
tuples of row tuples.  Everything is immutable after construction and safe to
share across threads.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

IntVec = tuple[int, ...]
IntMat = tuple[IntVec, ...]


# ---------------------------------------------------------------------------
# vector / matrix helpers


def vec(entries: Iterable[int]) -> IntVec:
    return tuple(int(e) for e in entries)


def mat(rows: Iterable[Iterable[int]]) -> IntMat:
    out = tuple(vec(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("matrix rows have inconsistent lengths")
    return out


def vec_add(x: IntVec, y: IntVec) -> IntVec:
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: IntVec, y: IntVec) -> IntVec:
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c: int, x: IntVec) -> IntVec:
    return tuple(c * a for a in x)


def vec_neg(x: IntVec) -> IntVec:
    return tuple(-a for a in x)


def vec_is_nonneg(x: IntVec) -> bool:
    return all(a >= 0 for a in x)


def vec_is_zero(x: IntVec) -> bool:
    return all(a == 0 for a in x)


def zero_vec(n: int) -> IntVec:
    return (0,) * n


def mat_vec(A: IntMat, x: IntVec) -> IntVec:
    if A and len(A[0]) != len(x):
        raise ValueError(f"dimension mismatch: matrix has {len(A[0])} columns, vector has {len(x)}")
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def dot(x: IntVec, y: IntVec) -> int:
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return sum(a * b for a, b in zip(x, y))


# ---------------------------------------------------------------------------
# instance


@dataclass(frozen=True)
class ObjImage:
    """Objective image C @ x of a solution vector."""

    values: IntVec

    def __len__(self) -> int:
        return len(self.values)


def objective_image(C: IntMat, x: IntVec) -> ObjImage:
    """Exact objective image C @ x.

    Raises ValueError on a dimension mismatch.
    """
    return ObjImage(mat_vec(C, x))


@dataclass(frozen=True)
class MoipInstance:
    """A multiobjective integer linear program in standard form.

    Parameters
    ----------
    A : IntMat
        Constraint matrix, m x n.
    b : IntVec
        Right-hand side, length m, nonnegative.
    C : IntMat
        Objective matrix, k x n, nonnegative entries.
    bounds : IntVec or None
        Optional per-variable upper bounds (length n).
    slack_indices : frozenset[int]
        Column indices holding slack variables.  Recorded so the
        slack-refined order can be requested; the conversion of
        inequalities to slacks is the caller's job.
    """

    A: IntMat
    b: IntVec
    C: IntMat
    bounds: IntVec | None = None
    slack_indices: frozenset[int] = field(default_factory=frozenset)

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0]) if self.A else 0

    @property
    def k(self) -> int:
        return len(self.C)

    def fingerprint(self) -> str:
        """Stable hash of the constraint matrix."""
        payload = json.dumps([[int(v) for v in row] for row in self.A]).encode()
        return hashlib.sha256(payload).hexdigest()[:16]

    def to_json(self) -> str:
        doc = {
            "A": [list(r) for r in self.A],
            "b": list(self.b),
            "C": [list(r) for r in self.C],
        }
        if self.bounds is not None:
            doc["bounds"] = list(self.bounds)
        if self.slack_indices:
            doc["slack_indices"] = sorted(self.slack_indices)
        return json.dumps(doc, indent=2)


def _coerce_int(v) -> int:
    # decimal strings are allowed for bit-exact large values
    if isinstance(v, bool):
        raise ValueError(f"not an integer: {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return int(v.strip(), 10)
    raise ValueError(f"not an integer: {v!r}")


def instance_from_dict(doc: dict) -> MoipInstance:
    """Build an instance from a parsed JSON document."""
    try:
        A = mat([[_coerce_int(v) for v in row] for row in doc["A"]])
        b = vec([_coerce_int(v) for v in doc["b"]])
        C = mat([[_coerce_int(v) for v in row] for row in doc["C"]])
    except KeyError as exc:
        raise ValueError(f"missing required field: {exc}") from exc
    bounds = None
    if doc.get("bounds") is not None:
        bounds = vec([_coerce_int(v) for v in doc["bounds"]])
    slack = frozenset(int(i) for i in doc.get("slack_indices", ()))
    return MoipInstance(A=A, b=b, C=C, bounds=bounds, slack_indices=slack)


def load_instance(path: str) -> MoipInstance:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError("instance file must contain a JSON object")
    return instance_from_dict(doc)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    """Result of validating an instance; lists every violated invariant."""

    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


def validate_instance(inst: MoipInstance) -> ValidationReport:
    """Report-style validation; succeeds iff all invariants hold."""
    problems: list[str] = []
    m, n = inst.m, inst.n
    if not inst.A:
        problems.append("constraint matrix is empty")
    if any(len(row) != n for row in inst.A):
        problems.append("constraint matrix is not rectangular")
    if len(inst.b) != m:
        problems.append(f"rhs length {len(inst.b)} does not match row count {m}")
    for i, bi in enumerate(inst.b):
        if bi < 0:
            problems.append(f"negative rhs: b[{i}] = {bi}")
    if not inst.C:
        problems.append("objective matrix is empty")
    for i, row in enumerate(inst.C):
        if len(row) != n:
            problems.append(f"objective row {i} has length {len(row)}, expected {n}")
        for j, cij in enumerate(row):
            if cij < 0:
                problems.append(f"negative objective entry: C[{i}][{j}] = {cij}")
    if inst.bounds is not None:
        if len(inst.bounds) != n:
            problems.append(f"bounds length {len(inst.bounds)} does not match column count {n}")
        for j, uj in enumerate(inst.bounds):
            if uj < 0:
                problems.append(f"negative bound: bounds[{j}] = {uj}")
    for j in inst.slack_indices:
        if not (0 <= j < n):
            problems.append(f"slack index out of range: {j}")
    return ValidationReport(tuple(problems))

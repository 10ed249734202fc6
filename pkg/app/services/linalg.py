"""Exact linear algebra over QQ on sparse keyed vectors, backed by sympy's DomainMatrix."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, Hashable, List, Mapping, Sequence, Tuple, TypeVar

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger("polywitt.linalg")

K = TypeVar("K", bound=Hashable)
Vector = Dict[K, Fraction]


def to_qq(x: Fraction):
    return QQ(x.numerator, x.denominator)


def from_qq(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _matrix(vectors: Sequence[Mapping[K, Fraction]], columns: Sequence[K]) -> DomainMatrix:
    index = {c: j for j, c in enumerate(columns)}
    dok = {}
    for i, v in enumerate(vectors):
        for key, value in v.items():
            if value:
                dok[(i, index[key])] = to_qq(Fraction(value))
    return DomainMatrix.from_dok(dok, (len(vectors), len(columns)), QQ)


def rref(vectors: Sequence[Mapping[K, Fraction]], columns: Sequence[K]) -> Tuple[List[Vector], List[K]]:
    """Reduced row echelon form of the rows `vectors` in the given column order.

    Returns the non-zero rows and the pivot column of each.
    """
    if not vectors or not columns:
        return [], []
    reduced, pivots = _matrix(vectors, columns).rref()
    rows: List[Vector] = [{} for _ in pivots]
    for (i, j), value in reduced.to_dok().items():
        if i < len(rows) and value:
            rows[i][columns[j]] = from_qq(value)
    logger.debug(f"rref of {len(vectors)}x{len(columns)} -> rank {len(pivots)}")
    return rows, [columns[j] for j in pivots]


def rank(vectors: Sequence[Mapping[K, Fraction]], columns: Sequence[K]) -> int:
    if not vectors or not columns:
        return 0
    return _matrix(vectors, columns).rank()


def nullspace(vectors: Sequence[Mapping[K, Fraction]], columns: Sequence[K]) -> List[Vector]:
    """Basis of {x : Σ_c v[c]·x[c] = 0 for every v}, one vector per free column."""
    rows, pivots = rref(vectors, columns)
    pivot_set = set(pivots)
    basis: List[Vector] = []
    for free in columns:
        if free in pivot_set:
            continue
        x: Vector = {free: Fraction(1)}
        for row, p in zip(rows, pivots):
            value = row.get(free)
            if value:
                x[p] = -value
        basis.append(x)
    return basis


def reduce(v: Mapping[K, Fraction], rows: Sequence[Mapping[K, Fraction]], pivots: Sequence[K]) -> Vector:
    """Remainder of v modulo the span of fully reduced echelon rows."""
    out: Vector = {key: Fraction(value) for key, value in v.items() if value}
    for row, p in zip(rows, pivots):
        c = out.get(p)
        if not c:
            continue
        for key, value in row.items():
            nv = out.get(key, Fraction(0)) - c * value
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)
    return out


def in_span(v: Mapping[K, Fraction], rows: Sequence[Mapping[K, Fraction]], pivots: Sequence[K]) -> bool:
    return not reduce(v, rows, pivots)


def sorted_columns(vectors: Sequence[Mapping[K, Fraction]]) -> List[K]:
    keys = set()
    for v in vectors:
        keys.update(v)
    return sorted(keys)


def _dense(rows: Sequence[Sequence[Fraction]]) -> DomainMatrix:
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    dok = {(i, j): to_qq(Fraction(x)) for i, row in enumerate(rows) for j, x in enumerate(row) if x}
    return DomainMatrix.from_dok(dok, (n_rows, n_cols), QQ)


def _listed(m: DomainMatrix) -> List[List[Fraction]]:
    n_rows, n_cols = m.shape
    out = [[Fraction(0)] * n_cols for _ in range(n_rows)]
    for (i, j), value in m.to_dok().items():
        out[i][j] = from_qq(value)
    return out


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    if not a or not b:
        return [[] for _ in a]
    return _listed(_dense(a).matmul(_dense(b)))


def inverse(a: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    if not a:
        return []
    return _listed(_dense(a).inv())


def identity(n: int) -> List[List[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction]:
    """Solve a·x = b for square invertible a."""
    inv = inverse(a)
    return [sum((inv[i][j] * b[j] for j in range(len(b))), Fraction(0)) for i in range(len(inv))]


def trace(a: Sequence[Sequence[Fraction]]) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


class EchelonSpan:
    """Incrementally grown span kept in fully reduced echelon form.

    Each row's pivot is its smallest key, with coefficient 1, and no other row
    has an entry in that column.
    """

    def __init__(self):
        self.rows: List[Vector] = []
        self.pivots: List = []

    def __len__(self) -> int:
        return len(self.rows)

    def contains(self, v: Mapping[K, Fraction]) -> bool:
        return in_span(v, self.rows, self.pivots)

    def add(self, v: Mapping[K, Fraction]) -> bool:
        """Insert v; returns False when it was already in the span."""
        residue = reduce(v, self.rows, self.pivots)
        if not residue:
            return False
        pivot = min(residue)
        lead = residue[pivot]
        residue = {key: value / lead for key, value in residue.items()}
        for row in self.rows:
            c = row.get(pivot)
            if not c:
                continue
            for key, value in residue.items():
                nv = row.get(key, Fraction(0)) - c * value
                if nv:
                    row[key] = nv
                else:
                    row.pop(key, None)
        self.rows.append(residue)
        self.pivots.append(pivot)
        return True

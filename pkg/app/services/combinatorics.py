"""Partitions, maps between finite sets and the small enumerations built on them."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation

from app.core.config import settings
from app.core.errors import CapExceededError, DomainError


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive parts. The empty partition is allowed."""

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise DomainError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise DomainError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def multiplicity(self, i: int) -> int:
        return self.parts.count(i)

    def multiplicities(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for p in self.parts:
            counts[p] = counts.get(p, 0) + 1
        return counts

    def factorial(self) -> int:
        """λ! = ∏ m_i(λ)!"""
        return math.prod(math.factorial(m) for m in self.multiplicities().values())

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def union(self, other: "Partition") -> "Partition":
        return Partition(tuple(sorted(self.parts + other.parts, reverse=True)))

    def scaled(self, factor: int) -> "Partition":
        return Partition(tuple(p * factor for p in self.parts))

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __str__(self) -> str:
        if not self.parts:
            return "∅"
        return "(" + ",".join(str(p) for p in self.parts) + ")"


EMPTY = Partition()


def canonical_key(lam: Partition) -> Tuple[int, Tuple[int, ...]]:
    """Sort key: by size, then lexicographically descending within a size."""
    return (lam.size, tuple(-p for p in lam.parts))


def _descending(n: int, largest: int, rows: Optional[int]) -> Iterator[Tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    if rows == 0:
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _descending(n - first, first, None if rows is None else rows - 1):
            yield (first,) + rest


def partitions_of(n: int, max_rows: Optional[int] = None, max_part: Optional[int] = None) -> List[Partition]:
    """All partitions of n in lexicographically descending order."""
    if n < 0:
        raise DomainError(f"cannot partition a negative integer: {n}")
    largest = n if max_part is None else max_part
    return [Partition(parts) for parts in _descending(n, largest, max_rows)]


def partitions_up_to(D: int, max_rows: Optional[int] = None) -> List[Partition]:
    return [lam for d in range(D + 1) for lam in partitions_of(d, max_rows)]


def z_lambda(lam: Partition) -> Fraction:
    """z_λ = λ! · ∏ i^{m_i(λ)}, the size of the centralizer of a permutation of cycle type λ."""
    return Fraction(lam.factorial() * math.prod(lam.parts))


def part_rk(r: int, k: int) -> List[Partition]:
    """Non-empty partitions with at most k columns and fewer than r rows, canonically ordered."""
    if r < 0 or k < 0:
        raise DomainError(f"part_rk needs r, k >= 0 (got r={r}, k={k})")
    rows = r - 1
    if rows <= 0 or k == 0:
        return []
    out: List[Partition] = []
    for size in range(1, rows * k + 1):
        out.extend(partitions_of(size, max_rows=rows, max_part=k))
    return out


def hook_lengths(lam: Partition) -> List[int]:
    conj = lam.conjugate().parts
    return [lam.parts[i] - j - 1 + conj[j] - i for i in range(lam.length) for j in range(lam.parts[i])]


def specht_dimension(lam: Partition) -> int:
    """Dimension of the Specht module S^λ by the hook length formula."""
    return math.factorial(lam.size) // math.prod(hook_lengths(lam))


@dataclass(frozen=True, order=True)
class FiniteMap:
    """A function [source] → [target], stored as its list of values (1-based)."""

    source: int
    target: int
    values: Tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if len(values) != self.source:
            raise DomainError(f"map from [{self.source}] needs {self.source} values, got {len(values)}")
        if any(v < 1 or v > self.target for v in values):
            raise DomainError(f"map values {values} not inside [1..{self.target}]")
        object.__setattr__(self, "values", values)

    def __call__(self, a: int) -> int:
        return self.values[a - 1]

    @property
    def fibers(self) -> Tuple[Tuple[int, ...], ...]:
        """fibers[i-1] = sorted preimage of i."""
        buckets: List[List[int]] = [[] for _ in range(self.target)]
        for a, v in enumerate(self.values, start=1):
            buckets[v - 1].append(a)
        return tuple(tuple(b) for b in buckets)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.target

    @property
    def is_bijective(self) -> bool:
        return self.source == self.target and self.is_surjective

    def after(self, inner: "FiniteMap") -> "FiniteMap":
        """self ∘ inner."""
        if inner.target != self.source:
            raise DomainError(f"cannot compose [{inner.source}]→[{inner.target}] with [{self.source}]→[{self.target}]")
        return FiniteMap(inner.source, self.target, tuple(self(v) for v in inner.values))

    @classmethod
    def identity(cls, n: int) -> "FiniteMap":
        return cls(n, n, tuple(range(1, n + 1)))


def check_cap(what: str, size: int, cap: Optional[int] = None) -> None:
    limit = settings.enumeration_cap if cap is None else cap
    if size > limit:
        raise CapExceededError(what, size, limit)


def maps(n: int, m: int, surjective_only: bool = False, cap: Optional[int] = None) -> List[FiniteMap]:
    """Every function [n] → [m] (or every surjection), in lexicographic order of values."""
    if n < 0 or m < 0:
        raise DomainError(f"set sizes must be non-negative (got {n}, {m})")
    check_cap("source size", n, cap)
    check_cap("target size", m, cap)
    out = [FiniteMap(n, m, values) for values in itertools.product(range(1, m + 1), repeat=n)]
    if surjective_only:
        out = [f for f in out if f.is_surjective]
    return out


def permutations_of(n: int) -> List[Tuple[int, ...]]:
    """All permutations of [1..n] as value tuples, lexicographically."""
    return list(itertools.permutations(range(1, n + 1)))


def cycle_type(perm: Sequence[int]) -> Partition:
    if not perm:
        return EMPTY
    structure = Permutation([v - 1 for v in perm]).cycle_structure
    parts = [length for length, count in structure.items() for _ in range(count)]
    return Partition.of(*parts)


def sign(perm: Sequence[int]) -> int:
    if not perm:
        return 1
    return Permutation([v - 1 for v in perm]).signature()


def class_representative(mu: Partition) -> List[int]:
    """Adjacent transpositions s_k (as k) whose product has cycle type μ.

    Returned as a list of k values; consecutive blocks of μ become cycles.
    """
    word: List[int] = []
    start = 1
    for part in mu.parts:
        word.extend(range(start, start + part - 1))
        start += part
    return word

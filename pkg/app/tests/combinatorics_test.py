"""Partitions, finite maps and the enumerations built on them."""

import math
from functools import lru_cache

import pytest

from app.core.errors import CapExceededError, DomainError
from app.services.combinatorics import (
    EMPTY,
    FiniteMap,
    Partition,
    class_representative,
    cycle_type,
    maps,
    part_rk,
    partitions_of,
    permutations_of,
    sign,
    specht_dimension,
    z_lambda,
)


def P(*parts):
    return Partition(tuple(parts))


@lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def _partition_numbers(limit: int):
    # coin-change recurrence over part sizes
    counts = [1] + [0] * limit
    for part in range(1, limit + 1):
        for total in range(part, limit + 1):
            counts[total] += counts[total - part]
    return counts


# ---------- Partitions ----------

def test_partition_rejects_bad_parts():
    with pytest.raises(DomainError):
        Partition((1, 2))
    with pytest.raises(DomainError):
        Partition((2, 0))


def test_partition_basics():
    lam = P(3, 1, 1)
    assert lam.size == 5
    assert lam.length == 3
    assert lam.multiplicity(1) == 2
    assert lam.factorial() == 2
    assert lam.conjugate() == P(3, 1, 1)
    assert P(3, 1).conjugate() == P(2, 1, 1)
    assert EMPTY.size == 0 and EMPTY.length == 0
    assert Partition.of(1, 3, 2) == P(3, 2, 1)
    assert P(2, 1).union(P(3, 1)) == P(3, 2, 1, 1)


def test_partitions_of_with_row_bound():
    assert partitions_of(3, max_rows=2) == [P(3), P(2, 1)]
    assert partitions_of(0) == [EMPTY]
    with pytest.raises(DomainError):
        partitions_of(-1)


def test_partition_counts_match_recurrence():
    expected = _partition_numbers(20)
    for n in range(21):
        assert len(partitions_of(n)) == expected[n]


def test_part_rk():
    assert part_rk(1, 3) == []
    assert part_rk(2, 2) == [P(1), P(2)]
    assert part_rk(3, 1) == [P(1), P(1, 1)]
    assert part_rk(3, 0) == []


def test_z_lambda_and_specht_dimension():
    assert z_lambda(P(2, 1)) == 2
    assert z_lambda(P(1, 1)) == 2
    assert z_lambda(P(3)) == 3
    assert z_lambda(EMPTY) == 1
    assert specht_dimension(P(2, 1)) == 2
    assert specht_dimension(P(3, 2)) == 5
    # class sizes n!/z_λ add up to n!
    for n in range(1, 7):
        assert sum(math.factorial(n) / z_lambda(mu) for mu in partitions_of(n)) == math.factorial(n)
    # Σ (f^λ)² = n!
    for n in range(1, 7):
        assert sum(specht_dimension(lam) ** 2 for lam in partitions_of(n)) == math.factorial(n)


# ---------- Finite maps ----------

def test_map_counts():
    assert len(maps(2, 1)) == 1
    assert len(maps(3, 2, surjective_only=True)) == 6
    assert maps(1, 2, surjective_only=True) == []
    assert len(maps(0, 3)) == 1


def test_surjection_counts_match_stirling_numbers():
    for n in range(6):
        for m in range(6):
            count = len(maps(n, m, surjective_only=True))
            assert count == math.factorial(m) * _stirling2(n, m), (n, m)


def test_finite_map_fibers_and_composition():
    f = FiniteMap(3, 2, (1, 1, 2))
    g = FiniteMap(2, 2, (2, 1))
    assert f.fibers == ((1, 2), (3,))
    assert f.is_surjective and not f.is_bijective
    assert g.after(f).values == (2, 2, 1)
    assert FiniteMap.identity(2).after(f) == f
    with pytest.raises(DomainError):
        f.after(g)
    with pytest.raises(DomainError):
        FiniteMap(2, 1, (1, 2))


def test_enumeration_cap():
    with pytest.raises(CapExceededError) as err:
        maps(4, 2, cap=3)
    assert err.value.exit_code == 3


# ---------- Permutations ----------

def test_cycle_type_and_sign():
    assert cycle_type((2, 1, 3)) == P(2, 1)
    assert cycle_type((2, 3, 1)) == P(3)
    assert cycle_type(()) == EMPTY
    assert sign((2, 1, 3)) == -1
    assert sign((2, 3, 1)) == 1
    assert len(permutations_of(4)) == 24


def test_class_representative_has_the_requested_cycle_type():
    for n in range(1, 6):
        for mu in partitions_of(n):
            perm = list(range(1, n + 1))
            for k in class_representative(mu):
                perm[k - 1], perm[k] = perm[k], perm[k - 1]
            assert cycle_type(perm) == mu

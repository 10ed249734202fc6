import itertools
import random

import pytest

from app.core.config import settings
from app.core.errors import DomainError
from app.services.operad import (
    OperadElement,
    OperadTag,
    as_sequence,
    basis,
    block_permutation,
    compose,
    identity,
    relabel,
)

AS = OperadTag.AS


def test_tag_parsing():
    assert OperadTag.parse("comnu") is OperadTag.COMNU
    assert OperadTag.parse(" As ") is AS
    with pytest.raises(DomainError):
        OperadTag.parse("lie")
    assert OperadTag.COM.unital and not OperadTag.COMNU.unital


def test_basis_sizes():
    assert basis(OperadTag.TRIVIAL, 1) == [OperadElement(OperadTag.TRIVIAL, 1)]
    assert basis(OperadTag.TRIVIAL, 2) == []
    assert len(basis(OperadTag.COM, 0)) == 1
    assert basis(OperadTag.COMNU, 0) == []
    assert len(basis(AS, 3)) == 6


def test_invalid_elements():
    with pytest.raises(DomainError):
        OperadElement(OperadTag.TRIVIAL, 2)
    with pytest.raises(DomainError):
        OperadElement(OperadTag.COMNU, 0)
    with pytest.raises(DomainError):
        OperadElement(AS, 2, (1, 1))
    with pytest.raises(DomainError):
        OperadElement(OperadTag.COM, 2, (1, 2))


def test_as_composition_substitutes_words():
    # x2·x1 with x1 := y1·y2 and x2 := y3 reads y3·y1·y2
    p = OperadElement(AS, 2, (2, 1))
    composite = compose(p, [OperadElement(AS, 2, (1, 2)), OperadElement(AS, 1, (1,))])
    assert composite.order == (2, 3, 1)
    assert as_sequence(composite) == (3, 1, 2)


def _substitute(p, blocks):
    offsets = list(itertools.accumulate([0] + [b.arity for b in blocks]))
    return tuple(offsets[k - 1] + i for k in as_sequence(p) for i in as_sequence(blocks[k - 1]))


def test_as_composition_matches_word_substitution():
    rng = random.Random(settings.default_seed)
    for _ in range(200):
        p = rng.choice(basis(AS, rng.randint(1, 3)))
        blocks = [rng.choice(basis(AS, rng.randint(0, 3))) for _ in range(p.arity)]
        assert as_sequence(compose(p, blocks)) == _substitute(p, blocks)


def test_as_composition_is_associative():
    rng = random.Random(settings.default_seed)
    for _ in range(100):
        p = rng.choice(basis(AS, rng.randint(1, 3)))
        qs = [rng.choice(basis(AS, rng.randint(1, 2))) for _ in range(p.arity)]
        rs = [rng.choice(basis(AS, rng.randint(0, 2))) for _ in range(sum(q.arity for q in qs))]
        grouped, start = [], 0
        for q in qs:
            grouped.append(compose(q, rs[start:start + q.arity]))
            start += q.arity
        assert compose(compose(p, qs), rs) == compose(p, grouped)


def test_identity_is_a_unit():
    for arity in range(4):
        for e in basis(AS, arity):
            assert compose(identity(AS), [e]) == e
            assert compose(e, [identity(AS)] * arity) == e


def test_relabel_and_block_permutation():
    e = OperadElement(AS, 2, (1, 2))
    assert as_sequence(relabel(e, [2, 1])) == (2, 1)
    assert relabel(OperadElement(OperadTag.COM, 3), [3, 1, 2]) == OperadElement(OperadTag.COM, 3)
    assert block_permutation([2, 1], [1, 2]) == [3, 1, 2]
    with pytest.raises(DomainError):
        relabel(e, [1, 1])


def test_compose_checks_arity():
    with pytest.raises(DomainError):
        compose(OperadElement(OperadTag.COM, 2), [OperadElement(OperadTag.COM, 1)])


def _blocks(sizes):
    return itertools.product(*(basis(AS, s) for s in sizes))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_as_composition_is_equivariant_in_the_outer_element(r):
    for p in basis(AS, r):
        for sigma in itertools.permutations(range(1, r + 1)):
            for sizes in itertools.product(range(3), repeat=r):
                for blocks in _blocks(sizes):
                    moved = [None] * r
                    for i, b in enumerate(blocks):
                        moved[sigma[i] - 1] = b
                    expected = relabel(compose(p, blocks), block_permutation(sigma, sizes))
                    assert compose(relabel(p, sigma), moved) == expected, (p, sigma, blocks)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_as_composition_is_equivariant_in_each_block(r):
    rng = random.Random(settings.default_seed + r)
    for p in basis(AS, r):
        for _ in range(40):
            blocks = [rng.choice(basis(AS, rng.randint(0, 3))) for _ in range(r)]
            k = rng.randrange(r)
            tau = list(rng.choice(list(itertools.permutations(range(1, blocks[k].arity + 1)))))
            offset = sum(b.arity for b in blocks[:k])
            total = sum(b.arity for b in blocks)
            extended = list(range(1, total + 1))
            for t, image in enumerate(tau, start=1):
                extended[offset + t - 1] = offset + image
            renamed = list(blocks)
            renamed[k] = relabel(blocks[k], tau)
            assert compose(p, renamed) == relabel(compose(p, blocks), extended)


@pytest.mark.parametrize("tag", [OperadTag.TRIVIAL, OperadTag.COM, OperadTag.COMNU, AS])
def test_unit_and_associativity_for_every_operad(tag):
    rng = random.Random(settings.default_seed)
    low = 1 if tag is OperadTag.COMNU else 0
    for _ in range(100):
        outer = basis(tag, rng.randint(1, 3))
        if not outer:
            continue
        p = rng.choice(outer)
        assert compose(identity(tag), [p]) == p
        assert compose(p, [identity(tag)] * p.arity) == p
        qs = [rng.choice(basis(tag, rng.randint(1, 2)) or [identity(tag)]) for _ in range(p.arity)]
        rs = [rng.choice(basis(tag, rng.randint(low, 2)) or [identity(tag)]) for _ in range(sum(q.arity for q in qs))]
        grouped, start = [], 0
        for q in qs:
            grouped.append(compose(q, rs[start:start + q.arity]))
            start += q.arity
        assert compose(compose(p, qs), rs) == compose(p, grouped)

"""The four set-operads: Trivial, Com, ComNu and As, with composition and relabeling."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from app.core.errors import DomainError


class OperadTag(str, Enum):
    TRIVIAL = "Trivial"
    COM = "Com"
    COMNU = "ComNu"
    AS = "As"

    @classmethod
    def parse(cls, value) -> "OperadTag":
        if isinstance(value, OperadTag):
            return value
        lookup = {tag.value.lower(): tag for tag in cls}
        try:
            return lookup[str(value).strip().lower()]
        except KeyError:
            raise DomainError(f"unknown operad {value!r}; expected one of trivial, com, comnu, as") from None

    @property
    def unital(self) -> bool:
        """Whether the free algebra has a degree-0 part."""
        return self in (OperadTag.COM, OperadTag.AS)


@dataclass(frozen=True, order=True)
class OperadElement:
    """A basis element of P([arity]).

    For As, `order` is a rank list: order[i] is the position of input i+1 in the
    total order. The other operads carry no payload.
    """

    operad: OperadTag
    arity: int
    order: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        tag = OperadTag.parse(self.operad)
        object.__setattr__(self, "operad", tag)
        if self.arity < 0:
            raise DomainError(f"negative arity {self.arity}")
        if tag is OperadTag.TRIVIAL and self.arity != 1:
            raise DomainError("the trivial operad only has arity 1")
        if tag is OperadTag.COMNU and self.arity == 0:
            raise DomainError("ComNu has no arity-0 operation")
        if tag is OperadTag.AS:
            order = tuple(range(1, self.arity + 1)) if self.order is None else tuple(int(o) for o in self.order)
            if sorted(order) != list(range(1, self.arity + 1)):
                raise DomainError(f"As order {order} is not a permutation of [1..{self.arity}]")
            object.__setattr__(self, "order", order)
        elif self.order is not None:
            raise DomainError(f"{tag.value} elements carry no order payload")

    def __str__(self) -> str:
        if self.operad is OperadTag.AS:
            return f"As{list(self.order)}"
        return f"{self.operad.value}({self.arity})"


def basis(P: OperadTag, r: int) -> List[OperadElement]:
    P = OperadTag.parse(P)
    if r < 0:
        raise DomainError(f"negative arity {r}")
    if P is OperadTag.TRIVIAL:
        return [OperadElement(P, 1)] if r == 1 else []
    if P is OperadTag.COMNU and r == 0:
        return []
    if P is OperadTag.AS:
        return [OperadElement(P, r, perm) for perm in itertools.permutations(range(1, r + 1))]
    return [OperadElement(P, r)]


def identity(P: OperadTag) -> OperadElement:
    return OperadElement(OperadTag.parse(P), 1, (1,) if OperadTag.parse(P) is OperadTag.AS else None)


def compose(p: OperadElement, blocks: Sequence[OperadElement]) -> OperadElement:
    """Operadic composite p ∘ (b_1, …, b_r) under the canonical block labeling."""
    if len(blocks) != p.arity:
        raise DomainError(f"arity {p.arity} element composed with {len(blocks)} blocks")
    for b in blocks:
        if b.operad is not p.operad:
            raise DomainError(f"cannot compose {p.operad.value} with {b.operad.value}")
    total = sum(b.arity for b in blocks)
    if p.operad is not OperadTag.AS:
        return OperadElement(p.operad, total)
    offsets = []
    for k in range(p.arity):
        offsets.append(sum(blocks[j].arity for j in range(p.arity) if p.order[j] < p.order[k]))
    ranks = [offsets[k] + local for k, b in enumerate(blocks) for local in b.order]
    return OperadElement(OperadTag.AS, total, tuple(ranks))


def relabel(e: OperadElement, sigma: Sequence[int]) -> OperadElement:
    """Rename input i as sigma[i-1]."""
    if sorted(sigma) != list(range(1, e.arity + 1)):
        raise DomainError(f"{list(sigma)} is not a permutation of [1..{e.arity}]")
    if e.operad is not OperadTag.AS:
        return e
    ranks = [0] * e.arity
    for old, new in enumerate(sigma, start=1):
        ranks[new - 1] = e.order[old - 1]
    return OperadElement(OperadTag.AS, e.arity, tuple(ranks))


def block_permutation(sigma: Sequence[int], sizes: Sequence[int]) -> List[int]:
    """Relabeling of composite inputs induced by moving block i to position sigma[i-1].

    The result maps each canonical label under `sizes` to its canonical label
    once the blocks are reordered.
    """
    r = len(sizes)
    new_sizes = [0] * r
    for i, s in enumerate(sizes):
        new_sizes[sigma[i] - 1] = s
    new_offsets = [sum(new_sizes[:j]) for j in range(r)]
    out: List[int] = []
    for i, s in enumerate(sizes):
        out.extend(new_offsets[sigma[i] - 1] + t for t in range(1, s + 1))
    return out


def as_sequence(e: OperadElement) -> Tuple[int, ...]:
    """Inputs listed in their total order (As), or in label order otherwise."""
    if e.operad is not OperadTag.AS:
        return tuple(range(1, e.arity + 1))
    return tuple(sorted(range(1, e.arity + 1), key=lambda i: e.order[i - 1]))

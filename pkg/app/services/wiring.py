"""Wiring categories W_P: decorated functions between finite sets.

A basis morphism [n] → [m] is a function f together with one operad element
per target point, of arity |f⁻¹(i)|, whose inputs are labeled by the sorted
elements of that fiber.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.core.errors import DomainError, PreconditionError
from app.services import linalg
from app.services.combinatorics import FiniteMap, check_cap, maps, permutations_of
from app.services.freealg import (
    Derivation,
    Key,
    Monomial,
    TensorElement,
    apply_derivation,
    from_letters,
    multiply,
    tensor_basis,
    unit,
)
from app.services.operad import OperadElement, OperadTag, basis, compose, identity, relabel

logger = logging.getLogger("polywitt.wiring")


@dataclass(frozen=True, order=True)
class WiringTerm:
    map: FiniteMap
    decorations: Tuple[OperadElement, ...]

    def __post_init__(self):
        decorations = tuple(self.decorations)
        object.__setattr__(self, "decorations", decorations)
        fibers = self.map.fibers
        if len(decorations) != self.map.target:
            raise DomainError(f"{len(decorations)} decorations for a map into [{self.map.target}]")
        for i, (dec, fiber) in enumerate(zip(decorations, fibers), start=1):
            if dec.arity != len(fiber):
                raise DomainError(f"decoration of arity {dec.arity} on fiber {i} of size {len(fiber)}")

    @property
    def operad(self) -> Optional[OperadTag]:
        return self.decorations[0].operad if self.decorations else None

    def __str__(self) -> str:
        decs = ",".join(str(d) for d in self.decorations)
        return f"{list(self.map.values)}[{decs}]"


@dataclass(frozen=True)
class WiringMorphism:
    """A rational combination of basis morphisms [source] → [target] in W_P."""

    operad: OperadTag
    source: int
    target: int
    terms: Mapping[WiringTerm, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        tag = OperadTag.parse(self.operad)
        object.__setattr__(self, "operad", tag)
        clean: Dict[WiringTerm, Fraction] = {}
        for term, c in self.terms.items():
            if term.map.source != self.source or term.map.target != self.target:
                raise DomainError(
                    f"term over [{term.map.source}]→[{term.map.target}] in a morphism [{self.source}]→[{self.target}]")
            if any(d.operad is not tag for d in term.decorations):
                raise DomainError(f"decorations of a {tag.value} morphism must come from {tag.value}")
            c = Fraction(c)
            if c:
                clean[term] = clean.get(term, Fraction(0)) + c
        object.__setattr__(self, "terms", dict(sorted((t, c) for t, c in clean.items() if c)))

    @classmethod
    def pure(cls, P: OperadTag, f: FiniteMap, decorations: Sequence[OperadElement], coefficient=1) -> "WiringMorphism":
        return cls(P, f.source, f.target, {WiringTerm(f, tuple(decorations)): Fraction(coefficient)})

    @classmethod
    def zero(cls, P: OperadTag, source: int, target: int) -> "WiringMorphism":
        return cls(P, source, target, {})

    def is_zero(self) -> bool:
        return not self.terms

    def _check_same_hom(self, other: "WiringMorphism") -> None:
        if (self.operad, self.source, self.target) != (other.operad, other.source, other.target):
            raise DomainError("morphisms live in different hom-spaces")

    def __add__(self, other: "WiringMorphism") -> "WiringMorphism":
        self._check_same_hom(other)
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, Fraction(0)) + c
        return WiringMorphism(self.operad, self.source, self.target, out)

    def scale(self, c) -> "WiringMorphism":
        c = Fraction(c)
        return WiringMorphism(self.operad, self.source, self.target, {t: c * v for t, v in self.terms.items()})

    def __sub__(self, other: "WiringMorphism") -> "WiringMorphism":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WiringMorphism):
            return NotImplemented
        return (self.operad, self.source, self.target) == (other.operad, other.source, other.target) \
            and dict(self.terms) == dict(other.terms)

    __hash__ = None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{t}" for t, c in self.terms.items())


def identity_w(P: OperadTag, n: int) -> WiringMorphism:
    P = OperadTag.parse(P)
    return WiringMorphism.pure(P, FiniteMap.identity(n), [identity(P)] * n)


def bijection_w(P: OperadTag, sigma: Sequence[int]) -> WiringMorphism:
    """The permutation morphism sending input j to output sigma[j-1]."""
    P = OperadTag.parse(P)
    f = FiniteMap(len(sigma), len(sigma), tuple(sigma))
    if not f.is_bijective:
        raise DomainError(f"{list(sigma)} is not a bijection")
    return WiringMorphism.pure(P, f, [identity(P)] * len(sigma))


def _compose_terms(outer: WiringTerm, inner: WiringTerm) -> WiringTerm:
    f, g = outer.map, inner.map
    h = f.after(g)
    f_fibers, g_fibers, h_fibers = f.fibers, g.fibers, h.fibers
    decorations: List[OperadElement] = []
    for i, o in enumerate(outer.decorations):
        fiber = f_fibers[i]
        composite = compose(o, [inner.decorations[j - 1] for j in fiber])
        position = {a: p for p, a in enumerate(h_fibers[i], start=1)}
        sigma = [position[a] for j in fiber for a in g_fibers[j - 1]]
        decorations.append(relabel(composite, sigma))
    return WiringTerm(h, tuple(decorations))


def compose_w(psi: WiringMorphism, phi: WiringMorphism) -> WiringMorphism:
    """psi ∘ phi for phi: [n] → [m] and psi: [m] → [ℓ]."""
    if psi.operad is not phi.operad:
        raise DomainError(f"cannot compose {psi.operad.value} with {phi.operad.value} morphisms")
    if phi.target != psi.source:
        raise DomainError(f"cannot compose [{psi.source}]→[{psi.target}] after [{phi.source}]→[{phi.target}]")
    out: Dict[WiringTerm, Fraction] = {}
    for outer, a in psi.terms.items():
        for inner, b in phi.terms.items():
            term = _compose_terms(outer, inner)
            out[term] = out.get(term, Fraction(0)) + a * b
    return WiringMorphism(psi.operad, phi.source, psi.target, out)


def _act_on_key(term: WiringTerm, key: Key, P: OperadTag, n_vars: int) -> Key:
    out: List[Monomial] = []
    for dec, fiber in zip(term.decorations, term.map.fibers):
        if not fiber:
            out.append(unit(P, n_vars))
        else:
            out.append(multiply(dec, [key[j - 1] for j in fiber]))
    return tuple(out)


def act(phi: WiringMorphism, t: TensorElement, n_vars: Optional[int] = None) -> TensorElement:
    """φ_* : V_n^{⊗source} → V_n^{⊗target}.

    n_vars is only needed when the input is the empty tensor power.
    """
    if t.power != phi.source:
        raise DomainError(f"morphism from [{phi.source}] applied to a tensor of power {t.power}")
    out: Dict[Key, Fraction] = {}
    for key, c in t.coeffs.items():
        if any(m.operad is not phi.operad for m in key):
            raise DomainError(f"tensor factors are not {phi.operad.value} monomials")
        n = key[0].n if key else n_vars
        if n is None:
            raise DomainError("acting on the empty tensor power needs the generator count")
        for term, a in phi.terms.items():
            new_key = _act_on_key(term, key, phi.operad, n)
            out[new_key] = out.get(new_key, Fraction(0)) + a * c
    return TensorElement(phi.target, t.D, out)


def hom_basis(P: OperadTag, n: int, m: int, cap: Optional[int] = None) -> List[WiringMorphism]:
    """All (function, decoration) basis morphisms [n] → [m]."""
    P = OperadTag.parse(P)
    check_cap("hom source", n, cap)
    check_cap("hom target", m, cap)
    out: List[WiringMorphism] = []
    for f in maps(n, m, cap=cap):
        choices = [basis(P, len(fiber)) for fiber in f.fibers]
        for decorations in itertools.product(*choices):
            out.append(WiringMorphism.pure(P, f, decorations))
    return out


# ---------- Schur–Weyl oracle ----------

@dataclass
class OracleResult:
    operad: OperadTag
    n: int
    m: int
    N: int
    D: int
    dimension: int
    hom_count: int
    matched: bool
    images: List[Tuple[str, str]]
    spot_check: Optional[bool]

    @property
    def agrees(self) -> bool:
        return self.matched and self.dimension == self.hom_count and self.spot_check is not False


def _permuted(key: Key, sigma: Sequence[int]) -> Key:
    return tuple(m.relabeled(sigma) for m in key)


def _swap(N: int, k: int) -> List[int]:
    sigma = list(range(1, N + 1))
    sigma[k - 1], sigma[k] = sigma[k], sigma[k - 1]
    return sigma


def schur_weyl_oracle(P: OperadTag, n: int, m: int, D: Optional[int] = None, N: Optional[int] = None) -> OracleResult:
    """Equivariant maps from the 1ⁿ-weight space of W_N^{⊗n} into V_N^{⊗m}, solved from scratch.

    The unknowns are the coordinates A[σ][y] of the image of x_{σ(1)}⊗…⊗x_{σ(n)};
    S_n-equivariance is imposed for adjacent transpositions only.
    """
    P = OperadTag.parse(P)
    D = n if D is None else D
    N = max(n, 1) if N is None else N
    if N < n or N < 1:
        raise PreconditionError(f"need N >= n variables for a faithful 1^n weight space (N={N}, n={n})")
    if D < n:
        raise PreconditionError(f"truncation D={D} is below the tensor power n={n}")

    ones = tuple([1] * n + [0] * (N - n))
    targets = list(tensor_basis(P, N, m, n).get(ones, ()))
    perms = permutations_of(n)
    columns = [(sigma, y) for sigma in perms for y in targets]
    equations: List[Dict] = []
    for sigma in perms:
        for k in range(1, n):
            tau = _swap(N, k)
            moved = tuple(tau[s - 1] for s in sigma)
            for y in targets:
                equations.append({(moved, _permuted(y, tau)): Fraction(1), (sigma, y): Fraction(-1)})
    solutions = linalg.nullspace(equations, columns) if columns else []
    dimension = len(solutions)
    logger.debug(f"oracle {P.value} n={n} m={m} N={N}: {len(columns)} unknowns, dimension {dimension}")

    morphisms = hom_basis(P, n, m)
    sources = {sigma: TensorElement.pure([from_letters(P, N, [s]) for s in sigma], D) for sigma in perms}
    images: List[Tuple[str, str]] = []
    assignments: List[Dict] = []
    for phi in morphisms:
        vector: Dict = {}
        for sigma, source in sources.items():
            for y, c in act(phi, source, n_vars=N).coeffs.items():
                vector[(sigma, y)] = c
        assignments.append(vector)
        images.append((str(phi), str(act(phi, sources[tuple(range(1, n + 1))], n_vars=N))))

    matched = len(assignments) == dimension
    if matched and assignments:
        rows, pivots = linalg.rref(solutions, columns)
        matched = all(linalg.in_span(v, rows, pivots) for v in assignments) \
            and linalg.rank(assignments, columns) == dimension

    return OracleResult(P, n, m, N, D, dimension, len(morphisms), matched, images,
                        _spot_check(P, n, N, D, morphisms))


def _spot_check(P: OperadTag, n: int, N: int, D: int, morphisms: Sequence[WiringMorphism]) -> Optional[bool]:
    """Commutation with x_1∂_{x_2} on the weight (n-1, 1) part of W_N^{⊗n}."""
    if N < 2 or n < 1:
        return None
    delta = Derivation.single(from_letters(P, N, [1]), 2)
    for position in range(n):
        letters = [1] * n
        letters[position] = 2
        t = TensorElement.pure([from_letters(P, N, [l]) for l in letters], D)
        for phi in morphisms:
            lhs = act(phi, apply_derivation(delta, t), n_vars=N)
            rhs = apply_derivation(delta, act(phi, t, n_vars=N))
            if lhs != rhs:
                return False
    return True

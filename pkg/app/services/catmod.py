"""Finitely presented modules over W_P^op, their evaluations and characters.

Convention: a generator "at [d]" is the principal projective P_d = W([−],[d]),
so evaluating it at [n] gives the span of hom_basis(P, n, d). A relation of
degree e has one entry ρ_i ∈ W([e],[d_i]) per generator; at [n] it contributes
the vectors (ρ_i ∘ θ)_i for every basis morphism θ: [n] → [e]. The module is
the cokernel.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.errors import DomainError, InvariantViolation
from app.services import linalg
from app.services.combinatorics import (
    Partition,
    check_cap,
    class_representative,
    partitions_of,
    z_lambda,
)
from app.services.freealg import TensorElement, tensor_basis
from app.services.operad import OperadTag
from app.services.symfunc import Basis, PolySeries, SymFunc, pi_n
from app.services.wiring import (
    WiringMorphism,
    WiringTerm,
    act,
    bijection_w,
    compose_w,
    hom_basis,
    identity_w,
)

logger = logging.getLogger("polywitt.catmod")

Matrix = List[List[Fraction]]


@dataclass(frozen=True)
class Relation:
    degree: int
    entries: Tuple[WiringMorphism, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.degree < 0:
            raise DomainError(f"relation degree must be non-negative, got {self.degree}")


@dataclass(frozen=True)
class ModulePresentation:
    operad: OperadTag
    generators: Tuple[int, ...] = ()
    relations: Tuple[Relation, ...] = ()

    def __post_init__(self):
        tag = OperadTag.parse(self.operad)
        object.__setattr__(self, "operad", tag)
        object.__setattr__(self, "generators", tuple(int(d) for d in self.generators))
        object.__setattr__(self, "relations", tuple(self.relations))
        if any(d < 0 for d in self.generators):
            raise DomainError(f"generator degrees must be non-negative: {self.generators}")
        for r, rel in enumerate(self.relations, start=1):
            if len(rel.entries) != len(self.generators):
                raise DomainError(f"relation {r} has {len(rel.entries)} entries for {len(self.generators)} generators")
            for d, entry in zip(self.generators, rel.entries):
                if entry.operad is not tag:
                    raise DomainError(f"relation {r} mixes {entry.operad.value} into a {tag.value} presentation")
                if entry.source != rel.degree or entry.target != d:
                    raise DomainError(
                        f"relation {r} entry [{entry.source}]→[{entry.target}] should be [{rel.degree}]→[{d}]")

    @property
    def is_zero(self) -> bool:
        return not self.generators


def principal_projective(P: OperadTag, d: int) -> ModulePresentation:
    return ModulePresentation(P, (d,), ())


def wedge_square_presentation(P: OperadTag) -> ModulePresentation:
    """Λ² as the cokernel of 1 + τ on P_2."""
    P = OperadTag.parse(P)
    symmetrizer = identity_w(P, 2) + bijection_w(P, [2, 1])
    return ModulePresentation(P, (2,), (Relation(2, (symmetrizer,)),))


# ---------- Evaluation ----------

@dataclass
class EvaluatedModule:
    """M([n]) with the matrices of the adjacent transpositions s_1..s_{n-1}.

    Matrix columns are images of basis vectors.
    """

    n: int
    labels: List[Tuple[int, WiringTerm]]
    action: Dict[int, Matrix] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def word_matrix(self, word: Sequence[int]) -> Matrix:
        result = linalg.identity(self.dimension)
        for k in word:
            result = linalg.matmul(result, self.action[k])
        return result

    def satisfies_coxeter(self) -> bool:
        one = linalg.identity(self.dimension)
        for k, s in self.action.items():
            if linalg.matmul(s, s) != one:
                return False
            t = self.action.get(k + 1)
            if t is not None and linalg.matmul(linalg.matmul(s, t), s) != linalg.matmul(linalg.matmul(t, s), t):
                return False
            for j, u in self.action.items():
                if abs(j - k) > 1 and linalg.matmul(s, u) != linalg.matmul(u, s):
                    return False
        return True


def _swap(n: int, k: int) -> List[int]:
    sigma = list(range(1, n + 1))
    sigma[k - 1], sigma[k] = sigma[k], sigma[k - 1]
    return sigma


def evaluate(M: ModulePresentation, n: int, cap: Optional[int] = None) -> EvaluatedModule:
    check_cap("evaluation size", n, cap)
    P = M.operad
    columns: List[Tuple[int, WiringTerm]] = []
    for i, d in enumerate(M.generators):
        for theta in hom_basis(P, n, d, cap):
            columns.extend((i, term) for term in theta.terms)

    images = []
    for rel in M.relations:
        for theta in hom_basis(P, n, rel.degree, cap):
            vector: Dict[Tuple[int, WiringTerm], Fraction] = {}
            for i, rho in enumerate(rel.entries):
                for term, c in compose_w(rho, theta).terms.items():
                    vector[(i, term)] = vector.get((i, term), Fraction(0)) + c
            if any(vector.values()):
                images.append(vector)
    rows, pivots = linalg.rref(images, columns)
    pivot_set = set(pivots)
    labels = [c for c in columns if c not in pivot_set]
    position = {label: j for j, label in enumerate(labels)}
    logger.debug(f"evaluate {P.value} {M.generators} at [{n}]: {len(columns)} columns, rank {len(pivots)}")

    action: Dict[int, Matrix] = {}
    for k in range(1, n):
        s = bijection_w(P, _swap(n, k))
        matrix = [[Fraction(0)] * len(labels) for _ in labels]
        for j, (i, term) in enumerate(labels):
            moved = compose_w(WiringMorphism(P, n, M.generators[i], {term: Fraction(1)}), s)
            residue = linalg.reduce({(i, t): c for t, c in moved.terms.items()}, rows, pivots)
            for label, c in residue.items():
                matrix[position[label]][j] = c
        action[k] = matrix
    return EvaluatedModule(n, labels, action)


# ---------- Symmetric group characters ----------

def _beta_set(lam: Tuple[int, ...]) -> List[int]:
    l = len(lam)
    return [p + (l - 1 - i) for i, p in enumerate(lam)]


def _from_beta(beta: Sequence[int]) -> Tuple[int, ...]:
    ordered = sorted(beta, reverse=True)
    l = len(ordered)
    return tuple(p for p in (b - (l - 1 - i) for i, b in enumerate(ordered)) if p > 0)


@lru_cache(maxsize=None)
def _mn(lam: Tuple[int, ...], mu: Tuple[int, ...]) -> int:
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    beta = _beta_set(lam)
    occupied = set(beta)
    total = 0
    for b in beta:
        if b - r < 0 or (b - r) in occupied:
            continue
        height = sum(1 for c in beta if b - r < c < b)
        smaller = _from_beta([c if c != b else b - r for c in beta])
        total += (-1) ** height * _mn(smaller, rest)
    return total


def sn_character(lam: Partition, mu: Partition) -> int:
    """χ^λ(μ) by the Murnaghan–Nakayama rule on beta-sets."""
    if lam.size != mu.size:
        raise DomainError(f"character of S_{lam.size} evaluated on a class of S_{mu.size}")
    return _mn(lam.parts, mu.parts)


def specht_multiplicities(E: EvaluatedModule) -> Dict[Partition, int]:
    if E.dimension == 0:
        return {}
    traces = {mu: linalg.trace(E.word_matrix(class_representative(mu))) for mu in partitions_of(E.n)}
    out: Dict[Partition, int] = {}
    for lam in partitions_of(E.n):
        m = sum((sn_character(lam, mu) * tr / z_lambda(mu) for mu, tr in traces.items()), Fraction(0))
        if m.denominator != 1 or m < 0:
            raise InvariantViolation(f"multiplicity of {lam} came out as {m}")
        if m:
            out[lam] = int(m)
    return out


def formal_character(M: ModulePresentation, D: int, cap: Optional[int] = None) -> SymFunc:
    """Σ_{n ≤ D} Σ_λ m_λ s_λ from the evaluations M([0]), …, M([D])."""
    check_cap("character degree", D, cap)
    coeffs: Dict[Partition, Fraction] = {}
    if not M.is_zero:
        for n in range(D + 1):
            for lam, m in specht_multiplicities(evaluate(M, n, cap)).items():
                coeffs[lam] = Fraction(m)
    return SymFunc(D, Basis.S, coeffs)


# ---------- Specialization at V_n ----------

def specialized_character(M: ModulePresentation, n: int, D: int) -> PolySeries:
    """Weight-space dimensions of M evaluated on V_n, up to total degree D.

    Each generator at [d] becomes V_n^{⊗d}; each relation entry acts through φ_*.
    """
    if n < 1:
        raise DomainError(f"specialization needs n >= 1, got {n}")
    P = M.operad
    targets = [tensor_basis(P, n, d, D) for d in M.generators]
    sources = [tensor_basis(P, n, rel.degree, D) for rel in M.relations]
    weights = set()
    for group in targets:
        weights.update(group)
    coeffs: Dict[Tuple[int, ...], Fraction] = {}
    for w in sorted(weights):
        columns = [(i, key) for i, group in enumerate(targets) for key in group.get(w, ())]
        if not columns:
            continue
        images = []
        for rel, group in zip(M.relations, sources):
            for key in group.get(w, ()):
                source = TensorElement.pure(key, D)
                vector: Dict = {}
                for i, rho in enumerate(rel.entries):
                    for image_key, c in act(rho, source, n_vars=n).coeffs.items():
                        vector[(i, image_key)] = vector.get((i, image_key), Fraction(0)) + c
                if any(vector.values()):
                    images.append(vector)
        dim = len(columns) - linalg.rank(images, columns)
        if dim:
            coeffs[w] = Fraction(dim)
    return PolySeries(n, D, coeffs)


def hilbert_specialized(M: ModulePresentation, n: int, D: int, method: str = "specialize") -> PolySeries:
    """One-variable Hilbert series Σ dim Γ_n(M)_d t^d.

    "specialize" evaluates on V_n directly; "character" collapses π_n of the
    formal character and is limited by the enumeration cap.
    """
    if method == "specialize":
        return specialized_character(M, n, D).collapse()
    if method == "character":
        return pi_n(formal_character(M, D), n).collapse()
    raise DomainError(f"unknown Hilbert series method {method!r}")

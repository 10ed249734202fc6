"""Schur functors on V_n, the specialization Γ_n and its left adjoint Δ_n on presentations,
and generation-degree closures under derivations."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy.utilities.iterables import multiset_permutations

from app.core.errors import DomainError, PreconditionError
from app.services import linalg
from app.services.catmod import ModulePresentation, Relation
from app.services.combinatorics import FiniteMap, Partition, hook_lengths, sign
from app.services.freealg import (
    Derivation,
    Key,
    TensorElement,
    apply_derivation,
    from_letters,
    key_degree,
    key_weight,
    tensor_basis,
    virasoro_generator,
    witt_terms,
)
from app.services.operad import OperadElement, OperadTag, identity
from app.services.symfunc import Basis, PolySeries, SymFunc, convert
from app.services.wiring import WiringMorphism, WiringTerm, act, compose_w, hom_basis, identity_w

logger = logging.getLogger("polywitt.specialize")

Weight = Tuple[int, ...]


# ---------- Young symmetrizers ----------

def _tableau_rows(lam: Partition) -> List[List[int]]:
    rows, start = [], 1
    for part in lam.parts:
        rows.append(list(range(start, start + part)))
        start += part
    return rows


def _group_of(blocks: Sequence[Sequence[int]], d: int) -> List[Tuple[int, ...]]:
    """Permutations of [1..d] preserving every block."""
    out: List[Tuple[int, ...]] = []
    for images in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perm = list(range(1, d + 1))
        for block, image in zip(blocks, images):
            for a, b in zip(block, image):
                perm[a - 1] = b
        out.append(tuple(perm))
    return out


def symmetrizer_terms(lam: Partition) -> Dict[Tuple[int, ...], int]:
    """c_λ = Σ_{r ∈ rows, c ∈ columns} sign(c)·(r∘c) for the row-filled tableau."""
    d = lam.size
    rows = _tableau_rows(lam)
    columns = [[row[j] for row in rows if j < len(row)] for j in range(lam.parts[0])] if d else []
    out: Dict[Tuple[int, ...], int] = {}
    for r in _group_of(rows, d):
        for c in _group_of(columns, d):
            rc = tuple(r[c[j] - 1] for j in range(d))
            out[rc] = out.get(rc, 0) + sign(c)
    return {perm: v for perm, v in out.items() if v}


def young_idempotent(P: OperadTag, lam: Partition) -> WiringMorphism:
    """e_λ = c_λ / ∏ hooks as an endomorphism of [|λ|] in W_P."""
    P = OperadTag.parse(P)
    d = lam.size
    scale = Fraction(1, math.prod(hook_lengths(lam)))
    unit = tuple([identity(P)] * d)
    terms = {WiringTerm(FiniteMap(d, d, perm), unit): c * scale for perm, c in symmetrizer_terms(lam).items()}
    return WiringMorphism(P, d, d, terms)


def _permute_key(key: Key, perm: Sequence[int]) -> Key:
    out: List = [None] * len(key)
    for j, m in enumerate(key):
        out[perm[j] - 1] = m
    return tuple(out)


def _symmetrize(terms: Dict[Tuple[int, ...], int], coeffs: Dict[Key, Fraction]) -> Dict[Key, Fraction]:
    out: Dict[Key, Fraction] = {}
    for key, c in coeffs.items():
        for perm, v in terms.items():
            moved = _permute_key(key, perm)
            out[moved] = out.get(moved, Fraction(0)) + c * v
    return {k: v for k, v in out.items() if v}


@dataclass
class TensorHost:
    operad: OperadTag
    n: int
    power: int

    def weight_dims(self, D: int) -> Dict[Weight, int]:
        return {w: len(keys) for w, keys in tensor_basis(self.operad, self.n, self.power, D).items()}


@dataclass
class SchurModuleBasis:
    """Basis of S_λ(V_n) up to degree D, one echelon block per weight."""

    partition: Partition
    operad: OperadTag
    n: int
    D: int
    bottom_only: bool = False
    by_weight: Dict[Weight, List[TensorElement]] = field(default_factory=dict)

    @property
    def power(self) -> int:
        return self.partition.size

    @property
    def vectors(self) -> List[TensorElement]:
        return [v for w in sorted(self.by_weight) for v in self.by_weight[w]]

    def weight_dims(self, D: Optional[int] = None) -> Dict[Weight, int]:
        limit = self.D if D is None else D
        return {w: len(vs) for w, vs in self.by_weight.items() if vs and sum(w) <= limit}

    def dimension_by_degree(self) -> Dict[int, int]:
        out = {d: 0 for d in range(self.D + 1)}
        for w, vs in self.by_weight.items():
            out[sum(w)] += len(vs)
        return out


def young_symmetrizer_image(lam: Partition, P: OperadTag, n: int, D: int,
                            bottom_only: bool = False) -> SchurModuleBasis:
    """S_λ(V_n) as c_λ·V_n^{⊗|λ|} up to degree D.

    With bottom_only, only tensors whose factors all have degree one are used,
    giving S_λ(W_n).
    """
    P = OperadTag.parse(P)
    if D < lam.size:
        raise PreconditionError(f"truncation D={D} is below |λ|={lam.size}")
    terms = symmetrizer_terms(lam)
    result = SchurModuleBasis(lam, P, n, D, bottom_only)
    for w, keys in tensor_basis(P, n, lam.size, D).items():
        if bottom_only:
            keys = tuple(k for k in keys if all(m.degree == 1 for m in k))
        if not keys:
            continue
        images = [_symmetrize(terms, {key: Fraction(1)}) for key in keys]
        rows, _ = linalg.rref([v for v in images if v], sorted(keys))
        if rows:
            result.by_weight[w] = [TensorElement(lam.size, D, row) for row in rows]
    logger.debug(f"S_{lam}({P.value}, n={n}) up to degree {D}: {result.dimension_by_degree()}")
    return result


def gamma_n_character(ch: SymFunc, n: int) -> SymFunc:
    """Character of Γ_n: Schur terms with more than n rows vanish."""
    if n < 1:
        raise DomainError(f"Γ_n needs n >= 1, got {n}")
    in_s = convert(ch, Basis.S)
    return SymFunc(ch.D, Basis.S, {lam: c for lam, c in in_s.coeffs.items() if lam.length <= n})


# ---------- Presentations at finite n ----------

@dataclass(frozen=True)
class HnRelation:
    """A map S_μ(V_n) → ⊕ S_{λ_i}(V_n) given by e_{λ_i} ∘ ρ_i on the image of e_μ."""

    source: Partition
    entries: Tuple[WiringMorphism, ...]


@dataclass(frozen=True)
class HnPresentation:
    operad: OperadTag
    n: int
    generators: Tuple[Partition, ...] = ()
    relations: Tuple[HnRelation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "operad", OperadTag.parse(self.operad))
        for r, rel in enumerate(self.relations, start=1):
            if len(rel.entries) != len(self.generators):
                raise DomainError(f"relation {r} has {len(rel.entries)} entries for {len(self.generators)} generators")
            for lam, entry in zip(self.generators, rel.entries):
                if entry.source != rel.source.size or entry.target != lam.size:
                    raise DomainError(f"relation {r} entry [{entry.source}]→[{entry.target}] "
                                      f"should be [{rel.source.size}]→[{lam.size}]")


def _act_vector(phi: WiringMorphism, coeffs: Dict[Key, Fraction], power: int, D: int, n: int) -> Dict[Key, Fraction]:
    return dict(act(phi, TensorElement(power, D, coeffs), n_vars=n).coeffs)


def _rearrangements(key: Key) -> List[Key]:
    return [tuple(p) for p in multiset_permutations(list(key))]


def apply_idempotent(lam: Partition, coeffs: Dict[Key, Fraction]) -> Dict[Key, Fraction]:
    """e_λ applied to a tensor by permuting its factors.

    For a single row this is the average over the distinct rearrangements.
    """
    if lam.length <= 1:
        out: Dict[Key, Fraction] = {}
        for key, c in coeffs.items():
            arrangements = _rearrangements(key)
            for moved in arrangements:
                out[moved] = out.get(moved, Fraction(0)) + c / len(arrangements)
        return {k: v for k, v in out.items() if v}
    scale = Fraction(1, math.prod(hook_lengths(lam)))
    return {k: v * scale for k, v in _symmetrize(symmetrizer_terms(lam), coeffs).items()}


def precompose_idempotent(rho: WiringMorphism, lam: Partition) -> WiringMorphism:
    """ρ ∘ e_λ."""
    if lam.length <= 1 and rho.operad in (OperadTag.COM, OperadTag.COMNU):
        # commutative decorations only see fiber sizes, so ρ∘π runs over the orbit of f
        out: Dict[WiringTerm, Fraction] = {}
        for term, c in rho.terms.items():
            orbit = [FiniteMap(term.map.source, term.map.target, tuple(v))
                     for v in multiset_permutations(list(term.map.values))]
            for g in orbit:
                moved = WiringTerm(g, term.decorations)
                out[moved] = out.get(moved, Fraction(0)) + c / len(orbit)
        return WiringMorphism(rho.operad, rho.source, rho.target, out)
    return compose_w(rho, young_idempotent(rho.operad, lam))


def hn_weight_dims(Mn: HnPresentation, D: int) -> PolySeries:
    """Weight-space dimensions of coker(⊕ S_μ(V_n) → ⊕ S_{λ_i}(V_n)) up to degree D."""
    P, n = Mn.operad, Mn.n
    targets = [young_symmetrizer_image(lam, P, n, max(D, lam.size)) for lam in Mn.generators]
    weights = set()
    for t in targets:
        weights.update(t.weight_dims(D))
    coeffs: Dict[Weight, Fraction] = {}
    for w in sorted(weights):
        target_dim = sum(len(t.by_weight.get(w, [])) for t in targets)
        images = []
        for rel in Mn.relations:
            for key in tensor_basis(P, n, rel.source.size, D).get(w, ()):
                source = apply_idempotent(rel.source, {key: Fraction(1)})
                if not source:
                    continue
                vector: Dict = {}
                for i, (rho, lam) in enumerate(zip(rel.entries, Mn.generators)):
                    image = _act_vector(rho, source, rel.source.size, D, n)
                    for k, c in apply_idempotent(lam, image).items():
                        vector[(i, k)] = vector.get((i, k), Fraction(0)) + c
                if vector:
                    images.append(vector)
        dim = target_dim - linalg.rank(images, linalg.sorted_columns(images))
        if dim:
            coeffs[w] = Fraction(dim)
    return PolySeries(n, D, coeffs)


def delta_n_presentation(Mn: HnPresentation) -> ModulePresentation:
    """Lift to 𝔥: S_λ(V_n) ↦ S_λ(V) realized as P_{|λ|} / (1 − e_λ)."""
    for lam in Mn.generators:
        if lam.length > Mn.n:
            raise PreconditionError(f"generator {lam} has more than n={Mn.n} rows")
    P = Mn.operad
    degrees = tuple(lam.size for lam in Mn.generators)
    relations: List[Relation] = []
    for i, lam in enumerate(Mn.generators):
        projector = identity_w(P, lam.size) - young_idempotent(P, lam)
        if projector.is_zero():
            continue
        entries = tuple(projector if j == i else WiringMorphism.zero(P, lam.size, d) for j, d in enumerate(degrees))
        relations.append(Relation(lam.size, entries))
    for rel in Mn.relations:
        entries = tuple(precompose_idempotent(rho, rel.source) for rho in rel.entries)
        if all(e.is_zero() for e in entries):
            continue
        relations.append(Relation(rel.source.size, entries))
    return ModulePresentation(P, degrees, tuple(relations))


# ---------- Generation closures ----------

@dataclass
class DegreeReach:
    degree: int
    reached: int
    host: int

    @property
    def spanned(self) -> bool:
        return self.reached == self.host


@dataclass
class ClosureReport:
    D: int
    mode: str
    degrees: List[DegreeReach]

    def spanned(self, degree: int) -> bool:
        return self.degrees[degree].spanned

    @property
    def all_spanned(self) -> bool:
        return all(r.spanned for r in self.degrees)


class _WeightSpans:
    def __init__(self, n: int):
        self.n = n
        self.spans: Dict[Weight, linalg.EchelonSpan] = {}

    def add(self, t: TensorElement) -> List[TensorElement]:
        """Add every weight component of t; returns the components that were new."""
        parts: Dict[Weight, Dict[Key, Fraction]] = {}
        for key, c in t.coeffs.items():
            parts.setdefault(key_weight(key, self.n), {})[key] = c
        fresh = []
        for w, coeffs in parts.items():
            if self.spans.setdefault(w, linalg.EchelonSpan()).add(coeffs):
                fresh.append(TensorElement(t.power, t.D, coeffs))
        return fresh

    def vectors(self, power: int, D: int) -> List[TensorElement]:
        return [TensorElement(power, D, row) for w in sorted(self.spans) for row in self.spans[w].rows]

    def dims(self) -> Dict[Weight, int]:
        return {w: len(s) for w, s in self.spans.items()}


def _degree_of(t: TensorElement) -> int:
    return max(key_degree(k) for k in t.coeffs)


def _apply_within(delta: Derivation, t: TensorElement, D: int) -> Optional[TensorElement]:
    if _degree_of(t) + delta.max_degree > D:
        return None
    return apply_derivation(delta, t, D)


def _fixpoint(spans: _WeightSpans, queue: List[TensorElement], derivations: Sequence[Derivation], D: int) -> None:
    while queue:
        v = queue.pop()
        for delta in derivations:
            image = _apply_within(delta, v, D)
            if image is not None and not image.is_zero():
                queue.extend(spans.add(image))


def _reach(spans: _WeightSpans, host: Dict[Weight, int], D: int) -> List[DegreeReach]:
    reached = spans.dims()
    out = []
    for d in range(D + 1):
        out.append(DegreeReach(d, sum(c for w, c in reached.items() if sum(w) == d),
                               sum(c for w, c in host.items() if sum(w) == d)))
    return out


def generation_closure(seed: Sequence[TensorElement], derivations: Sequence[Derivation], D: int,
                       host: Union[TensorHost, SchurModuleBasis]) -> ClosureReport:
    """Span of the seed under the derivations, inside the degree-≤D window of host.

    Admissible (PBW-ordered) words are tried first: the span is closed under the
    last derivation, then the one before, and so on. If some degree is still
    short of the host, an unrestricted fixpoint over all derivations follows.
    Applications that would leave the window are skipped, so a missing degree
    may be a truncation artifact while a spanned one is certain.
    """
    n = host.n
    power = host.power
    host_dims = host.weight_dims(D)
    spans = _WeightSpans(n)
    for t in seed:
        if t.power != power:
            raise DomainError(f"seed of tensor power {t.power} in a host of power {power}")
        spans.add(t.widened(D))

    for delta in reversed(list(derivations)):
        _fixpoint(spans, spans.vectors(power, D), [delta], D)
    report = ClosureReport(D, "admissible", _reach(spans, host_dims, D))
    if report.all_spanned:
        return report
    _fixpoint(spans, spans.vectors(power, D), derivations, D)
    logger.debug("admissible closure fell short; ran the unrestricted fixpoint")
    return ClosureReport(D, "fixpoint", _reach(spans, host_dims, D))


# ---------- Cyclic windows at n = 1 ----------

def tensor_to_morphism(P: OperadTag, key: Key) -> WiringMorphism:
    """The decorated map f with f_*(x^{⊗d}) = x^{a_1}⊗…⊗x^{a_k} in V_1^{⊗k}.

    Fibers are consecutive blocks of sizes a_1, …, a_k.
    """
    P = OperadTag.parse(P)
    sizes = [m.degree for m in key]
    values = [i for i, a in enumerate(sizes, start=1) for _ in range(a)]
    f = FiniteMap(len(values), len(sizes), tuple(values))
    return WiringMorphism.pure(P, f, [OperadElement(P, a) for a in sizes])


def _homogeneous_degree(t: TensorElement) -> int:
    degrees = {key_degree(key) for key in t.coeffs}
    if len(degrees) != 1:
        raise DomainError("expected a non-zero homogeneous tensor")
    return degrees.pop()


def cyclic_window_presentation(P: OperadTag, generator_degree: int, image: TensorElement, D: int) -> HnPresentation:
    """Present, up to degree D, the 𝔥₁-submodule generated by one vector of weight (k).

    The free module is S_(k)(V₁), generated by x^{⊗k}. The graph of
    x^{⊗k} ↦ image is closed under 𝔥₁; graph vectors with vanishing image
    component form the kernel, and each kernel vector u of degree d is lifted to
    a relation from S_(d)(V₁) whose entry sends x^{⊗d} to u.
    """
    P = OperadTag.parse(P)
    k = generator_degree
    if _homogeneous_degree(image) != k:
        raise DomainError(f"image vector must have degree {k}")
    x = from_letters(P, 1, [1])
    derivations = witt_terms(P, 1, D)
    graph: Dict[int, linalg.EchelonSpan] = {}

    def record(source: TensorElement, target: TensorElement, degree: int) -> bool:
        vec = {(0, key): c for key, c in target.coeffs.items()}
        vec.update({(1, key): c for key, c in source.coeffs.items()})
        return graph.setdefault(degree, linalg.EchelonSpan()).add(vec)

    start = (TensorElement(k, D, {tuple([x] * k): Fraction(1)}), image.widened(D), k)
    record(*start)
    queue = [start]
    while queue:
        source, target, d = queue.pop()
        for delta in derivations:
            degree = d + delta.max_degree
            if degree > D or degree < 0:
                continue
            s = apply_derivation(delta, source, D)
            t = apply_derivation(delta, target, D)
            if s.is_zero() and t.is_zero():
                continue
            if record(s, t, degree):
                queue.append((s, t, degree))

    relations: List[HnRelation] = []
    for d in sorted(graph):
        span = graph[d]
        for row, pivot in zip(span.rows, span.pivots):
            if pivot[0] != 1:
                continue
            entry = WiringMorphism.zero(P, d, k)
            for (block, key), c in sorted(row.items()):
                entry = entry + tensor_to_morphism(P, key).scale(c)
            relations.append(HnRelation(Partition((d,)) if d else Partition(), (entry,)))
    logger.debug(f"cyclic window of degree {k} up to {D}: {len(relations)} relations")
    return HnPresentation(P, 1, (Partition((k,)),), tuple(relations))


# ---------- Endomorphisms and ideal chains ----------

def end_ring_dimension(lam: Partition, P: OperadTag) -> int:
    """dim e_λ·W_P([d],[d])·e_λ."""
    P = OperadTag.parse(P)
    d = lam.size
    e = young_idempotent(P, lam)
    vectors = [dict(compose_w(e, compose_w(phi, e)).terms) for phi in hom_basis(P, d, d)]
    columns = linalg.sorted_columns(vectors)
    return linalg.rank(vectors, columns)


@dataclass
class IdealChainReport:
    n_max: int
    D: int
    dims: Dict[Tuple[int, int], int]
    closed: Dict[int, bool]

    def dim(self, n: int, d: int) -> int:
        return self.dims[(n, d)]

    @property
    def strictly_descending(self) -> bool:
        return all(self.dims[(j, d)] > self.dims[(j + 1, d)]
                   for d in range(self.D + 1) for j in range(0, min(self.n_max, d)))


def _ideal_vectors(n: int, d: int) -> List[Dict[Key, Fraction]]:
    """(x−y)^n·x^a·y^b with a + b = d − n, as tensors in V₁^{⊗2} = k[x] ⊗ k[y]."""
    if d < n:
        return []
    P = OperadTag.COM
    out = []
    for a in range(d - n + 1):
        b = d - n - a
        vec: Dict[Key, Fraction] = {}
        for j in range(n + 1):
            c = Fraction(math.comb(n, j) * (-1) ** (n - j))
            key = (from_letters(P, 1, [1] * (j + a)), from_letters(P, 1, [1] * (n - j + b)))
            vec[key] = vec.get(key, Fraction(0)) + c
        out.append(vec)
    return out


def ideal_chain_dims(n_max: int, D: int) -> IdealChainReport:
    """Graded dimensions of 𝔞_n = ((x−y)^n) ⊂ k[x,y] ≅ V₁^{⊗2} for Com, n ≤ n_max, d ≤ D,
    with closure of each 𝔞_n under x^{k+1}∂ for k ≥ −1."""
    if n_max < 0 or D < 0:
        raise DomainError(f"ideal chain needs n_max, D >= 0 (got {n_max}, {D})")
    dims: Dict[Tuple[int, int], int] = {}
    closed: Dict[int, bool] = {}
    generators = [virasoro_generator(k) for k in range(-1, D)]
    for n in range(0, n_max + 1):
        spans: Dict[int, Tuple[List, List]] = {}
        for d in range(D + 1):
            vectors = _ideal_vectors(n, d)
            columns = linalg.sorted_columns(vectors)
            spans[d] = linalg.rref(vectors, columns)
            dims[(n, d)] = len(spans[d][0])
        ok = True
        for d in range(D + 1):
            for row in spans[d][0]:
                element = TensorElement(2, D, row)
                for delta in generators:
                    target = d + delta.max_degree
                    if target > D or target < 0:
                        continue
                    image = apply_derivation(delta, element, D)
                    rows, pivots = spans[target]
                    if not image.is_zero() and not linalg.in_span(image.coeffs, rows, pivots):
                        ok = False
        closed[n] = ok
    return IdealChainReport(n_max, D, dims, closed)

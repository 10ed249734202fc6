"""Free P-algebras on n generators, their tensor powers, and derivations f∂_{x_i}.

Com gives polynomial rings (Witt algebra 𝔚_n), ComNu the non-unital part
(𝔚_n⁺), As the tensor algebra, and Trivial only the generators themselves.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from app.core.errors import DomainError, TruncationOverflowError
from app.services.operad import OperadElement, OperadTag, as_sequence

logger = logging.getLogger("polywitt.freealg")


@dataclass(frozen=True, order=True)
class Monomial:
    """A basis element of P{kⁿ}.

    payload is an exponent vector for Com/ComNu and a word of generator
    indices for As/Trivial.
    """

    operad: OperadTag
    n: int
    payload: Tuple[int, ...]

    def __post_init__(self):
        tag = OperadTag.parse(self.operad)
        object.__setattr__(self, "operad", tag)
        payload = tuple(int(p) for p in self.payload)
        object.__setattr__(self, "payload", payload)
        if self.n < 1:
            raise DomainError(f"need at least one generator, got n={self.n}")
        if tag in (OperadTag.COM, OperadTag.COMNU):
            if len(payload) != self.n or any(e < 0 for e in payload):
                raise DomainError(f"bad exponent vector {payload} for n={self.n}")
        elif any(i < 1 or i > self.n for i in payload):
            raise DomainError(f"word {payload} uses letters outside [1..{self.n}]")
        if tag is OperadTag.COMNU and self.degree == 0:
            raise DomainError("ComNu has no degree-0 monomial")
        if tag is OperadTag.TRIVIAL and len(payload) != 1:
            raise DomainError("Trivial-operad monomials are single generators")

    @property
    def degree(self) -> int:
        if self.operad in (OperadTag.COM, OperadTag.COMNU):
            return sum(self.payload)
        return len(self.payload)

    def letters(self) -> Tuple[int, ...]:
        """Generator indices in product order (sorted for commutative monomials)."""
        if self.operad in (OperadTag.COM, OperadTag.COMNU):
            return tuple(i for i, e in enumerate(self.payload, start=1) for _ in range(e))
        return self.payload

    def relabeled(self, sigma: Sequence[int]) -> "Monomial":
        """Apply the variable substitution x_i ↦ x_{sigma[i-1]}."""
        return from_letters(self.operad, self.n, [sigma[i - 1] for i in self.letters()])

    def __str__(self) -> str:
        if self.operad in (OperadTag.COM, OperadTag.COMNU):
            parts = [f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(self.payload, start=1) if e]
            return "*".join(parts) or "1"
        return "".join(f"x{i}" for i in self.payload) or "1"


Key = Tuple[Monomial, ...]


def generator(P: OperadTag, n: int, i: int) -> Monomial:
    return from_letters(P, n, [i])


def unit(P: OperadTag, n: int) -> Monomial:
    P = OperadTag.parse(P)
    if not P.unital:
        raise DomainError(f"{P.value} has no unit monomial")
    return from_letters(P, n, [])


def from_letters(P: OperadTag, n: int, letters: Sequence[int]) -> Monomial:
    P = OperadTag.parse(P)
    if P in (OperadTag.COM, OperadTag.COMNU):
        exps = [0] * n
        for i in letters:
            if i < 1 or i > n:
                raise DomainError(f"letter {i} outside [1..{n}]")
            exps[i - 1] += 1
        return Monomial(P, n, tuple(exps))
    return Monomial(P, n, tuple(letters))


def weight(m: Monomial) -> Tuple[int, ...]:
    """Exponent profile of the generators."""
    counts = [0] * m.n
    for i in m.letters():
        counts[i - 1] += 1
    return tuple(counts)


def key_weight(key: Key, n: int) -> Tuple[int, ...]:
    total = [0] * n
    for m in key:
        for i, w in enumerate(weight(m)):
            total[i] += w
    return tuple(total)


def key_degree(key: Key) -> int:
    return sum(m.degree for m in key)


def _exponent_vectors(n: int, d: int) -> Iterable[Tuple[int, ...]]:
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _exponent_vectors(n - 1, d - first):
            yield (first,) + rest


def free_basis(P: OperadTag, n: int, d: int) -> List[Monomial]:
    """Basis of the degree-d part of P{kⁿ}."""
    P = OperadTag.parse(P)
    if n < 1 or d < 0:
        raise DomainError(f"free_basis needs n >= 1 and d >= 0 (got n={n}, d={d})")
    if P is OperadTag.TRIVIAL:
        return [Monomial(P, n, (i,)) for i in range(1, n + 1)] if d == 1 else []
    if P is OperadTag.COMNU and d == 0:
        return []
    if P is OperadTag.AS:
        return [Monomial(P, n, word) for word in itertools.product(range(1, n + 1), repeat=d)]
    return [Monomial(P, n, exps) for exps in _exponent_vectors(n, d)]


def multiply(element: OperadElement, factors: Sequence[Monomial]) -> Monomial:
    """The operadic product element_*(factors)."""
    if len(factors) != element.arity:
        raise DomainError(f"arity {element.arity} operation applied to {len(factors)} factors")
    P = element.operad
    if any(f.operad is not P for f in factors):
        raise DomainError("factor operads differ from the operation's operad")
    if P is OperadTag.TRIVIAL:
        return factors[0]
    if not factors:
        raise DomainError("empty product needs the generator count; use unit()")
    n = factors[0].n
    if P is OperadTag.AS:
        word: List[int] = []
        for position in as_sequence(element):
            word.extend(factors[position - 1].payload)
        return Monomial(P, n, tuple(word))
    exps = [sum(col) for col in zip(*(f.payload for f in factors))]
    return Monomial(P, n, tuple(exps))


def _compositions(total: int, parts: int, minimum: int, maximum: Optional[int]) -> Iterable[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    high = total - minimum * (parts - 1)
    if maximum is not None:
        high = min(high, maximum)
    for first in range(minimum, high + 1):
        for rest in _compositions(total - first, parts - 1, minimum, maximum):
            yield (first,) + rest


@lru_cache(maxsize=64)
def _tensor_basis(P: OperadTag, n: int, power: int, D: int) -> Tuple[Tuple[Tuple[int, ...], Tuple[Key, ...]], ...]:
    minimum = 0 if P.unital else 1
    maximum = 1 if P is OperadTag.TRIVIAL else None
    groups: Dict[Tuple[int, ...], List[Key]] = {}
    for k in range(D + 1):
        for degrees in _compositions(k, power, minimum, maximum):
            for key in itertools.product(*(free_basis(P, n, d) for d in degrees)):
                groups.setdefault(key_weight(key, n), []).append(key)
    return tuple((w, tuple(keys)) for w, keys in sorted(groups.items()))


def tensor_basis(P: OperadTag, n: int, power: int, D: int) -> Dict[Tuple[int, ...], Tuple[Key, ...]]:
    """Basis tuples of V_n^{⊗power} up to degree D, grouped by weight."""
    return dict(_tensor_basis(OperadTag.parse(P), n, power, D))


# ---------- Tensor elements ----------

@dataclass(frozen=True)
class TensorElement:
    """Element of the degree-≤D part of P{kⁿ}^{⊗power}."""

    power: int
    D: int
    coeffs: Mapping[Key, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean: Dict[Key, Fraction] = {}
        for key, c in self.coeffs.items():
            key = tuple(key)
            if len(key) != self.power:
                raise DomainError(f"tuple of length {len(key)} in tensor power {self.power}")
            degree = key_degree(key)
            if degree > self.D:
                raise TruncationOverflowError(degree, self.D)
            c = Fraction(c)
            if c:
                clean[key] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def pure(cls, factors: Sequence[Monomial], D: Optional[int] = None, coefficient=1) -> "TensorElement":
        key = tuple(factors)
        return cls(len(key), key_degree(key) if D is None else D, {key: Fraction(coefficient)})

    @classmethod
    def zero(cls, power: int, D: int) -> "TensorElement":
        return cls(power, D, {})

    def is_zero(self) -> bool:
        return not self.coeffs

    def widened(self, D: int) -> "TensorElement":
        return TensorElement(self.power, D, self.coeffs)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if other.power != self.power:
            raise DomainError(f"tensor powers differ: {self.power} vs {other.power}")
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, Fraction(0)) + c
        return TensorElement(self.power, max(self.D, other.D), out)

    def scale(self, c) -> "TensorElement":
        c = Fraction(c)
        return TensorElement(self.power, self.D, {k: c * v for k, v in self.coeffs.items()})

    def __neg__(self) -> "TensorElement":
        return self.scale(-1)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.power == other.power and dict(self.coeffs) == dict(other.coeffs)

    __hash__ = None

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*" + "⊗".join(str(m) for m in key) for key, c in self.coeffs.items())


# ---------- Derivations ----------

@dataclass(frozen=True, order=True)
class DerivationTerm:
    """coefficient · f∂_{x_i}"""

    i: int
    f: Monomial
    coefficient: Fraction = Fraction(1)

    @property
    def degree(self) -> int:
        return self.f.degree - 1


@dataclass(frozen=True)
class Derivation:
    operad: OperadTag
    n: int
    terms: Tuple[DerivationTerm, ...] = ()

    def __post_init__(self):
        tag = OperadTag.parse(self.operad)
        object.__setattr__(self, "operad", tag)
        combined: Dict[Tuple[int, Monomial], Fraction] = {}
        for t in self.terms:
            if t.i < 1 or t.i > self.n:
                raise DomainError(f"derivation index {t.i} outside [1..{self.n}]")
            if t.f.operad is not tag or t.f.n != self.n:
                raise DomainError(f"monomial {t.f} does not belong to {tag.value} on {self.n} generators")
            combined[(t.i, t.f)] = combined.get((t.i, t.f), Fraction(0)) + Fraction(t.coefficient)
        object.__setattr__(self, "terms", tuple(
            DerivationTerm(i, f, c) for (i, f), c in sorted(combined.items()) if c))

    @classmethod
    def single(cls, f: Monomial, i: int, coefficient=1) -> "Derivation":
        return cls(f.operad, f.n, (DerivationTerm(i, f, Fraction(coefficient)),))

    @classmethod
    def zero(cls, P: OperadTag, n: int) -> "Derivation":
        return cls(P, n, ())

    @property
    def max_degree(self) -> int:
        return max((t.degree for t in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.operad, self.n, self.terms + other.terms)

    def scale(self, c) -> "Derivation":
        c = Fraction(c)
        return Derivation(self.operad, self.n, tuple(DerivationTerm(t.i, t.f, c * t.coefficient) for t in self.terms))

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.operad is other.operad and self.n == other.n and self.terms == other.terms

    __hash__ = None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{t.coefficient}*{t.f}∂{t.i}" for t in self.terms)


def derive_monomial(f: Monomial, i: int, m: Monomial) -> Dict[Monomial, Fraction]:
    """f∂_{x_i} applied to m by substituting f for each occurrence of x_i."""
    letters = m.letters()
    out: Dict[Monomial, Fraction] = {}
    if not any(l == i for l in letters):
        return out
    P = m.operad
    gens = [generator(P, m.n, l) for l in letters]
    product = OperadElement(P, len(letters), tuple(range(1, len(letters) + 1)) if P is OperadTag.AS else None)
    for k, l in enumerate(letters):
        if l != i:
            continue
        factors = gens[:k] + [f] + gens[k + 1:]
        result = f if P is OperadTag.TRIVIAL else multiply(product, factors)
        out[result] = out.get(result, Fraction(0)) + 1
    return out


def apply_term_to_key(term: DerivationTerm, key: Key) -> Dict[Key, Fraction]:
    """Leibniz action of one term on a pure tensor, coefficients included."""
    out: Dict[Key, Fraction] = {}
    for pos, m in enumerate(key):
        for result, c in derive_monomial(term.f, term.i, m).items():
            new_key = key[:pos] + (result,) + key[pos + 1:]
            out[new_key] = out.get(new_key, Fraction(0)) + c * term.coefficient
    return {k: v for k, v in out.items() if v}


def apply_derivation(delta: Derivation, t: TensorElement, D: Optional[int] = None) -> TensorElement:
    """Leibniz action on a tensor element; output truncation defaults to t.D."""
    limit = t.D if D is None else D
    out: Dict[Key, Fraction] = {}
    for key, c in t.coeffs.items():
        for m in key:
            if m.operad is not delta.operad or m.n != delta.n:
                raise DomainError(f"monomial {m} incompatible with a {delta.operad.value} derivation on {delta.n} generators")
        for term in delta.terms:
            for new_key, v in apply_term_to_key(term, key).items():
                out[new_key] = out.get(new_key, Fraction(0)) + c * v
    for new_key, v in out.items():
        degree = key_degree(new_key)
        if v and degree > limit:
            raise TruncationOverflowError(degree, limit)
    return TensorElement(t.power, limit, out)


def _apply_to_polynomial(delta: Derivation, poly: Mapping[Monomial, Fraction]) -> Dict[Monomial, Fraction]:
    out: Dict[Monomial, Fraction] = {}
    for m, c in poly.items():
        for term in delta.terms:
            for result, v in derive_monomial(term.f, term.i, m).items():
                out[result] = out.get(result, Fraction(0)) + c * v * term.coefficient
    return {m: c for m, c in out.items() if c}


def _image_of_generator(delta: Derivation, k: int) -> Dict[Monomial, Fraction]:
    out: Dict[Monomial, Fraction] = {}
    for term in delta.terms:
        if term.i == k:
            out[term.f] = out.get(term.f, Fraction(0)) + term.coefficient
    return out


def bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """[δ₁, δ₂], read off from its values on the generators."""
    if d1.operad is not d2.operad or d1.n != d2.n:
        raise DomainError("bracket of derivations on different algebras")
    terms: List[DerivationTerm] = []
    for k in range(1, d1.n + 1):
        forward = _apply_to_polynomial(d1, _image_of_generator(d2, k))
        backward = _apply_to_polynomial(d2, _image_of_generator(d1, k))
        for m in set(forward) | set(backward):
            c = forward.get(m, Fraction(0)) - backward.get(m, Fraction(0))
            if c:
                terms.append(DerivationTerm(k, m, c))
    return Derivation(d1.operad, d1.n, tuple(terms))


def witt_terms(P: OperadTag, n: int, max_degree: int) -> List[Derivation]:
    """Spanning derivations f∂_{x_i} of 𝔥_n with graded degree ≤ max_degree."""
    P = OperadTag.parse(P)
    out: List[Derivation] = []
    for d in range(0, max_degree + 2):
        for i in range(1, n + 1):
            out.extend(Derivation.single(f, i) for f in free_basis(P, n, d))
    return out


def virasoro_generator(k: int, P: OperadTag = OperadTag.COM) -> Derivation:
    """L_k = x^{k+1}∂_x on one generator."""
    if k < -1:
        raise DomainError(f"L_{k} is not a polynomial vector field")
    return Derivation.single(from_letters(P, 1, [1] * (k + 1)), 1)

"""Degree-truncated symmetric functions, power series in finitely many variables and rational forms.

Every element of the completed ring lives here only as a window of degrees ≤ D.
Transition matrices between the m, e, h, p and s bases are derived at runtime
from monomial expansions: assignment counts for p, integer matrices with
prescribed margins for h and e, Kostka numbers (horizontal-strip recursion)
for s.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy.utilities.iterables import multiset_permutations

from app.core.config import settings
from app.core.errors import DomainError, PreconditionError
from app.services import linalg
from app.services.combinatorics import EMPTY, Partition, canonical_key, partitions_of

logger = logging.getLogger("polywitt.symfunc")

Exponents = Tuple[int, ...]


class Basis(str, Enum):
    M = "m"
    E = "e"
    H = "h"
    P = "p"
    S = "s"

    @classmethod
    def parse(cls, value) -> "Basis":
        try:
            return cls(value)
        except ValueError:
            raise DomainError(f"unsupported basis tag: {value!r}") from None


MULTIPLICATIVE = (Basis.E, Basis.H, Basis.P)


# ---------- Monomial expansions ----------

def _count_fillings(rows: Tuple[int, ...], caps: Tuple[int, ...], basis: Basis) -> int:
    """Number of ways to distribute each row total over the columns so every column sum is met."""

    @lru_cache(maxsize=None)
    def count(i: int, remaining: Tuple[int, ...]) -> int:
        if i == len(rows):
            return int(all(c == 0 for c in remaining))
        total = 0
        for spread in _spreads(rows[i], remaining, basis):
            nxt = tuple(sorted((c - s for c, s in zip(remaining, spread)), reverse=True))
            total += count(i + 1, nxt)
        return total

    return count(0, tuple(sorted(caps, reverse=True)))


def _spreads(amount: int, caps: Tuple[int, ...], basis: Basis) -> Iterable[Tuple[int, ...]]:
    width = len(caps)
    if basis is Basis.P:
        for j, c in enumerate(caps):
            if c >= amount:
                yield tuple(amount if k == j else 0 for k in range(width))
    elif basis is Basis.E:
        for chosen in itertools.combinations(range(width), amount):
            if all(caps[j] >= 1 for j in chosen):
                yield tuple(int(k in chosen) for k in range(width))
    else:
        def rec(j: int, left: int) -> Iterable[Tuple[int, ...]]:
            if j == width - 1:
                if left <= caps[j]:
                    yield (left,)
                return
            for take in range(min(left, caps[j]), -1, -1):
                for rest in rec(j + 1, left - take):
                    yield (take,) + rest
        if width:
            yield from rec(0, amount)
        elif amount == 0:
            yield ()


@lru_cache(maxsize=None)
def _kostka(shape: Tuple[int, ...], content: Tuple[int, ...]) -> int:
    if not content:
        return int(not shape)
    last = content[-1]
    total = 0
    bounds = [(shape[i + 1] if i + 1 < len(shape) else 0, shape[i]) for i in range(len(shape))]

    def strips(i: int, removed: int) -> Iterable[Tuple[int, ...]]:
        if i == len(shape):
            if removed == last:
                yield ()
            return
        low, high = bounds[i]
        for keep in range(high, low - 1, -1):
            if removed + high - keep > last:
                break
            for rest in strips(i + 1, removed + high - keep):
                yield (keep,) + rest

    for inner in strips(0, 0):
        total += _kostka(tuple(p for p in inner if p > 0), content[:-1])
    return total


@lru_cache(maxsize=None)
def monomial_expansion(basis: Basis, lam: Partition) -> Dict[Partition, int]:
    """Coefficients of m_μ in the basis element b_λ (|μ| = |λ|)."""
    out: Dict[Partition, int] = {}
    for mu in partitions_of(lam.size):
        if basis is Basis.M:
            value = int(mu == lam)
        elif basis is Basis.S:
            value = _kostka(lam.parts, mu.parts)
        else:
            value = _count_fillings(lam.parts, mu.parts, basis)
        if value:
            out[mu] = value
    return out


@lru_cache(maxsize=None)
def _transition(basis: Basis, d: int):
    """(partitions of d, matrix basis→m, matrix m→basis), columns indexed like the partition list."""
    parts = partitions_of(d)
    to_m = [[Fraction(monomial_expansion(basis, lam).get(mu, 0)) for lam in parts] for mu in parts]
    from_m = linalg.inverse(to_m)
    logger.debug(f"transition matrices for basis {basis.value} in degree {d} ({len(parts)} partitions)")
    return parts, to_m, from_m


# ---------- SymFunc ----------

@dataclass(frozen=True)
class SymFunc:
    """Truncated symmetric function: coefficients on basis elements of degree ≤ D."""

    D: int
    basis: Basis
    coeffs: Mapping[Partition, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.D < 0:
            raise DomainError(f"truncation degree must be non-negative, got {self.D}")
        object.__setattr__(self, "basis", Basis.parse(self.basis))
        clean: Dict[Partition, Fraction] = {}
        for lam, c in self.coeffs.items():
            if lam.size > self.D:
                raise DomainError(f"coefficient on {lam} exceeds truncation degree {self.D}")
            c = Fraction(c)
            if c:
                clean[lam] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items(), key=lambda kv: canonical_key(kv[0]))))

    @classmethod
    def zero(cls, D: int, basis: Basis = Basis.S) -> "SymFunc":
        return cls(D, basis, {})

    @classmethod
    def one(cls, D: int, basis: Basis = Basis.P) -> "SymFunc":
        return cls(D, basis, {EMPTY: Fraction(1)})

    @classmethod
    def element(cls, basis: Basis, lam: Partition, D: int, coefficient=1) -> "SymFunc":
        return cls(D, basis, {lam: Fraction(coefficient)} if lam.size <= D else {})

    @classmethod
    def truncated(cls, D: int, basis: Basis, coeffs: Mapping[Partition, Fraction]) -> "SymFunc":
        return cls(D, basis, {lam: c for lam, c in coeffs.items() if lam.size <= D})

    def coefficient(self, lam: Partition) -> Fraction:
        return self.coeffs.get(lam, Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree_part(self, d: int) -> "SymFunc":
        return SymFunc(self.D, self.basis, {lam: c for lam, c in self.coeffs.items() if lam.size == d})

    def restrict(self, D: int) -> "SymFunc":
        return SymFunc.truncated(min(D, self.D), self.basis, self.coeffs)

    def _check(self, other: "SymFunc") -> "SymFunc":
        if other.D != self.D:
            raise PreconditionError(f"truncation degrees differ: {self.D} vs {other.D}")
        return other if other.basis is self.basis else convert(other, self.basis)

    def __add__(self, other: "SymFunc") -> "SymFunc":
        other = self._check(other)
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            out[lam] = out.get(lam, Fraction(0)) + c
        return SymFunc(self.D, self.basis, out)

    def __neg__(self) -> "SymFunc":
        return self.scale(-1)

    def __sub__(self, other: "SymFunc") -> "SymFunc":
        return self + (-other)

    def scale(self, c) -> "SymFunc":
        c = Fraction(c)
        return SymFunc(self.D, self.basis, {lam: c * v for lam, v in self.coeffs.items()})

    def __mul__(self, other) -> "SymFunc":
        if isinstance(other, SymFunc):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymFunc):
            return NotImplemented
        if other.D != self.D:
            return False
        return dict(convert(other, self.basis).coeffs) == dict(self.coeffs)

    __hash__ = None

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{self.basis.value}{lam}" for lam, c in self.coeffs.items())


def convert(f: SymFunc, target) -> SymFunc:
    """The same truncated element expressed in another basis."""
    target = Basis.parse(target)
    if target is f.basis:
        return f
    out: Dict[Partition, Fraction] = {}
    for d in range(f.D + 1):
        part = {lam: c for lam, c in f.coeffs.items() if lam.size == d}
        if not part:
            continue
        parts, to_m, _ = _transition(f.basis, d)
        index = {lam: j for j, lam in enumerate(parts)}
        in_m = [sum((to_m[i][index[lam]] * c for lam, c in part.items()), Fraction(0)) for i in range(len(parts))]
        if target is Basis.M:
            coords = in_m
        else:
            _, _, from_m = _transition(target, d)
            coords = [sum((from_m[i][j] * in_m[j] for j in range(len(parts))), Fraction(0)) for i in range(len(parts))]
        for lam, c in zip(parts, coords):
            if c:
                out[lam] = c
    return SymFunc(f.D, target, out)


def multiply(f: SymFunc, g: SymFunc) -> SymFunc:
    """Truncated product, computed in a multiplicative basis."""
    if f.D != g.D:
        raise PreconditionError(f"truncation degrees differ: {f.D} vs {g.D}")
    work = f.basis if f.basis in MULTIPLICATIVE else Basis.P
    a, b = convert(f, work), convert(g, work)
    out: Dict[Partition, Fraction] = {}
    for lam, c in a.coeffs.items():
        for mu, e in b.coeffs.items():
            if lam.size + mu.size > f.D:
                continue
            nu = lam.union(mu)
            out[nu] = out.get(nu, Fraction(0)) + c * e
    return convert(SymFunc(f.D, work, out), f.basis)


def power(f: SymFunc, k: int) -> SymFunc:
    result = SymFunc.one(f.D, f.basis if f.basis in MULTIPLICATIVE else Basis.P)
    for _ in range(k):
        result = multiply(result, f)
    return convert(result, f.basis)


def hall(f: SymFunc, g: SymFunc) -> Fraction:
    """Hall inner product, as the dot product of Schur coefficients."""
    if f.D != g.D:
        raise PreconditionError(f"truncation degrees differ: {f.D} vs {g.D}")
    a, b = convert(f, Basis.S), convert(g, Basis.S)
    return sum((c * b.coefficient(lam) for lam, c in a.coeffs.items()), Fraction(0))


# ---------- Power series in n variables ----------

@dataclass(frozen=True)
class PolySeries:
    """Power series in x_1..x_n truncated at total degree D."""

    n: int
    D: int
    coeffs: Mapping[Exponents, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean: Dict[Exponents, Fraction] = {}
        for exps, c in self.coeffs.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.n or any(e < 0 for e in exps):
                raise DomainError(f"bad exponent vector {exps} for {self.n} variables")
            if sum(exps) > self.D:
                raise DomainError(f"term {exps} exceeds truncation degree {self.D}")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        object.__setattr__(self, "coeffs", dict(sorted((k, v) for k, v in clean.items() if v)))

    @classmethod
    def truncated(cls, n: int, D: int, coeffs: Mapping[Exponents, Fraction]) -> "PolySeries":
        return cls(n, D, {e: c for e, c in coeffs.items() if sum(e) <= D})

    @classmethod
    def one(cls, n: int, D: int) -> "PolySeries":
        return cls(n, D, {(0,) * n: Fraction(1)})

    @classmethod
    def from_univariate(cls, coefficients: Sequence, D: Optional[int] = None) -> "PolySeries":
        D = len(coefficients) - 1 if D is None else D
        return cls(1, D, {(d,): Fraction(c) for d, c in enumerate(coefficients) if d <= D})

    def coefficient(self, exps: Exponents) -> Fraction:
        return self.coeffs.get(tuple(exps), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def restrict(self, D: int) -> "PolySeries":
        return PolySeries.truncated(self.n, min(D, self.D), self.coeffs)

    def __add__(self, other: "PolySeries") -> "PolySeries":
        D = min(self.D, other.D)
        out = {e: c for e, c in self.coeffs.items() if sum(e) <= D}
        for e, c in other.coeffs.items():
            if sum(e) <= D:
                out[e] = out.get(e, Fraction(0)) + c
        return PolySeries(self.n, D, out)

    def scale(self, c) -> "PolySeries":
        c = Fraction(c)
        return PolySeries(self.n, self.D, {e: c * v for e, v in self.coeffs.items()})

    def __neg__(self) -> "PolySeries":
        return self.scale(-1)

    def __sub__(self, other: "PolySeries") -> "PolySeries":
        return self + (-other)

    def __mul__(self, other) -> "PolySeries":
        if not isinstance(other, PolySeries):
            return self.scale(other)
        if other.n != self.n:
            raise DomainError(f"variable counts differ: {self.n} vs {other.n}")
        D = min(self.D, other.D)
        out: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) > D:
                    continue
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return PolySeries(self.n, D, out)

    __rmul__ = __mul__

    def collapse(self) -> "PolySeries":
        """Set every variable to a single variable t."""
        out: Dict[Exponents, Fraction] = {}
        for e, c in self.coeffs.items():
            key = (sum(e),)
            out[key] = out.get(key, Fraction(0)) + c
        return PolySeries(1, self.D, out)

    def univariate(self) -> List[Fraction]:
        """Coefficients of t^0..t^D of the collapsed series."""
        flat = self.collapse()
        return [flat.coefficient((d,)) for d in range(self.D + 1)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolySeries):
            return NotImplemented
        return self.n == other.n and self.D == other.D and dict(self.coeffs) == dict(other.coeffs)

    __hash__ = None

    def to_sympy(self):
        xs = variables(self.n)
        return sum((sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*(x ** e for x, e in zip(xs, exps)))
                    for exps, c in self.coeffs.items()), sympy.Integer(0))

    def __str__(self) -> str:
        return str(self.to_sympy()) if self.coeffs else "0"


def variables(n: int):
    if n == 1:
        return [sympy.Symbol("t")]
    return list(sympy.symbols(f"x1:{n + 1}"))


def pi_n(f: SymFunc, n: int) -> PolySeries:
    """Set x_i = 0 for i > n."""
    if n < 1:
        raise DomainError(f"pi_n needs n >= 1, got {n}")
    in_m = convert(f, Basis.M)
    out: Dict[Exponents, Fraction] = {}
    for mu, c in in_m.coeffs.items():
        if mu.length > n:
            continue
        padded = list(mu.parts) + [0] * (n - mu.length)
        for exps in multiset_permutations(padded):
            key = tuple(exps)
            out[key] = out.get(key, Fraction(0)) + c
    return PolySeries(n, f.D, out)


# ---------- Rational forms ----------

@dataclass(frozen=True, order=True)
class DenominatorFactor:
    """(1 − x_var^exponent)^power."""

    var: int
    exponent: int
    power: int

    def __post_init__(self):
        if self.var < 1 or self.exponent < 1 or self.power < 1:
            raise DomainError(f"invalid denominator factor {self}")


@dataclass(frozen=True)
class RationalForm:
    n: int
    numerator: Mapping[Exponents, Fraction] = field(default_factory=dict)
    denominator: Tuple[DenominatorFactor, ...] = ()

    def __post_init__(self):
        merged: Dict[Tuple[int, int], int] = {}
        for fac in self.denominator:
            if fac.var > self.n:
                raise DomainError(f"denominator variable {fac.var} exceeds {self.n}")
            merged[(fac.var, fac.exponent)] = merged.get((fac.var, fac.exponent), 0) + fac.power
        object.__setattr__(self, "denominator",
                           tuple(DenominatorFactor(v, m, e) for (v, m), e in sorted(merged.items())))
        object.__setattr__(self, "numerator",
                           dict(sorted((tuple(k), Fraction(c)) for k, c in self.numerator.items() if c)))

    @property
    def denominator_degree(self) -> int:
        return sum(f.exponent * f.power for f in self.denominator)

    @property
    def max_exponent(self) -> int:
        return max((f.exponent for f in self.denominator), default=0)

    def to_sympy(self):
        xs = variables(self.n)
        num = PolySeries(self.n, max((sum(e) for e in self.numerator), default=0), self.numerator).to_sympy()
        den = sympy.Mul(*((1 - xs[f.var - 1] ** f.exponent) ** f.power for f in self.denominator))
        return num / den

    def __str__(self) -> str:
        return str(self.to_sympy())


def _geometric(n: int, var: int, m: int, D: int) -> PolySeries:
    coeffs = {}
    for j in range(D // m + 1):
        exps = [0] * n
        exps[var - 1] = j * m
        coeffs[tuple(exps)] = Fraction(1)
    return PolySeries(n, D, coeffs)


def denominator_polynomial(n: int, factors: Sequence[DenominatorFactor], D: int) -> PolySeries:
    result = PolySeries.one(n, D)
    for fac in factors:
        exps = [0] * n
        exps[fac.var - 1] = fac.exponent
        base = PolySeries.truncated(n, D, {(0,) * n: Fraction(1), tuple(exps): Fraction(-1)})
        for _ in range(fac.power):
            result = result * base
    return result


def expand(rf: RationalForm, D: int) -> PolySeries:
    """Series expansion of numerator · ∏ (1 + x^m + x^{2m} + …)^e up to total degree D."""
    if D < 0:
        raise DomainError(f"expansion degree must be non-negative, got {D}")
    result = PolySeries.truncated(rf.n, D, rf.numerator)
    for fac in rf.denominator:
        geo = _geometric(rf.n, fac.var, fac.exponent, D)
        for _ in range(fac.power):
            result = result * geo
    return result


@dataclass(frozen=True)
class FitResult:
    """Outcome of a rational fit. Failure is a value, not an exception."""

    success: bool
    form: Optional[RationalForm]
    max_exponent: int
    denominator_budget: int
    numerator_budget: int
    fit_window: int
    holdout: int
    candidates_tried: int
    holdout_rejections: int
    message: str


def _candidate_denominators(n: int, d: int, B: int) -> Iterable[Tuple[DenominatorFactor, ...]]:
    slots = [(var, m) for var in range(1, n + 1) for m in range(1, d + 1)]
    for total in range(B + 1):
        found = set()
        for size in range(total + 1):
            for combo in itertools.combinations_with_replacement(slots, size):
                if sum(m for _, m in combo) != total:
                    continue
                counts: Dict[Tuple[int, int], int] = {}
                for slot in combo:
                    counts[slot] = counts.get(slot, 0) + 1
                found.add(tuple(DenominatorFactor(v, m, e) for (v, m), e in sorted(counts.items())))
        yield from sorted(found)


def fit_rational(series: PolySeries, d: int, B: int, numerator_degree: Optional[int] = None,
                 holdout: Optional[int] = None) -> FitResult:
    """Search rational forms N/∏(1−x_α^m)^e with m ≤ d and denominator degree ≤ B.

    With held-out window h, the numerator budget K defaults to D − h − B − 1 and
    must satisfy D > B + K + h. A candidate Q is accepted when S·Q has no terms
    of total degree K+1 .. D−h and N/Q reproduces S through degree D.
    """
    h = settings.holdout_window if holdout is None else holdout
    D = series.D
    K = D - h - B - 1 if numerator_degree is None else numerator_degree
    if d < 1 or B < 0 or h < 0:
        raise PreconditionError(f"fit_rational needs d >= 1, B >= 0, holdout >= 0 (got d={d}, B={B}, h={h})")
    if K < 0 or D <= B + K + h:
        raise PreconditionError(
            f"truncation degree {D} too small for denominator budget {B}, "
            f"numerator budget {K} and held-out window {h}")
    window = D - h
    tried = rejected = 0
    for factors in _candidate_denominators(series.n, d, B):
        tried += 1
        q = denominator_polynomial(series.n, factors, window)
        product = series.restrict(window) * q
        if any(sum(e) > K for e in product.coeffs):
            continue
        form = RationalForm(series.n, product.coeffs, factors)
        if expand(form, D) != series:
            rejected += 1
            logger.debug(f"candidate {factors} fits the window but fails the held-out check")
            continue
        logger.debug(f"fit found after {tried} candidates: {form}")
        return FitResult(True, form, d, B, K, window, h, tried, rejected, "fit validated on held-out window")
    return FitResult(False, None, d, B, K, window, h, tried, rejected,
                     f"no denominator with exponents <= {d} and degree <= {B} fits")

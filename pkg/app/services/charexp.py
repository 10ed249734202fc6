"""Character exponentials e^A, the shifted power sums u_λ and the expansion machinery around them.

For a partition A with multiplicities a_i, e^A = ∏_i ∏_α (1 − x_α^i)^{-a_i}.
Elements of the form Σ_λ c_λ p_λ e^A with ℓ(λ) < r are recovered from their
Hall pairings against u_λ/z_λ, and their specializations are rational with
denominators built from the parts of A.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple, Union

from app.core.errors import DomainError, InvariantViolation
from app.services.combinatorics import (
    EMPTY,
    Partition,
    canonical_key,
    part_rk,
    partitions_up_to,
    z_lambda,
)
from app.services.symfunc import (
    Basis,
    DenominatorFactor,
    PolySeries,
    RationalForm,
    SymFunc,
    convert,
    expand,
    multiply,
    pi_n,
)

logger = logging.getLogger("polywitt.charexp")

Coefficient = Union[SymFunc, PolySeries, Fraction]
Shape = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class CharExpParams:
    A: Partition
    r: int = 1
    k: int = 0

    def __post_init__(self):
        if not isinstance(self.A, Partition):
            object.__setattr__(self, "A", Partition(tuple(self.A)))
        if self.r < 1 or self.k < 0:
            raise DomainError(f"character exponential parameters need r >= 1 and k >= 0 (got r={self.r}, k={self.k})")

    @property
    def a(self) -> Dict[int, int]:
        return self.A.multiplicities()

    def shift(self, n: int, weighted: bool = True) -> int:
        """The constant subtracted from p_n in u_n."""
        return sum((i if weighted else 1) * a for i, a in self.a.items() if n % i == 0)

    def admits(self, c: Mapping[Partition, Fraction]) -> bool:
        """Whether Σ c_λ p_λ e^A is one of the finite combinations with ℓ(λ) < r."""
        return all(lam.length < self.r for lam, v in c.items() if v)

    def in_filtration(self, s: SymFunc) -> bool:
        return schur_length(s) <= self.k


def schur_length(s: SymFunc) -> int:
    """Largest ℓ(λ) carrying a nonzero Schur coefficient in the window."""
    return max((lam.length for lam in convert(s, Basis.S).coeffs), default=0)


# ---------- e^A ----------

def _exp_power_sums(params: CharExpParams, D: int) -> SymFunc:
    """exp(Σ_n c_n p_n / n) with c_n = Σ_{i|n} i·a_i, read off as Σ_λ (∏ c_{λ_j}) p_λ / z_λ."""
    coeffs = {}
    for lam in partitions_up_to(D):
        weight = math.prod(params.shift(p) for p in lam.parts)
        if weight:
            coeffs[lam] = Fraction(weight) / z_lambda(lam)
    return SymFunc(D, Basis.P, coeffs)


def _product_formula(params: CharExpParams, D: int) -> SymFunc:
    """∏_i H_i^{a_i}, where H_i = ∏_α (1 − x_α^i)^{-1} is the sum of m_{i·μ}."""
    result = SymFunc.one(D, Basis.P)
    for i, a in sorted(params.a.items()):
        h_i = SymFunc(D, Basis.M, {mu.scaled(i): Fraction(1) for mu in partitions_up_to(D // i)})
        for _ in range(a):
            result = multiply(result, h_i)
    return result


def _denominator(A: Partition, n: int) -> Tuple[DenominatorFactor, ...]:
    return tuple(DenominatorFactor(var, i, a) for var in range(1, n + 1) for i, a in sorted(A.multiplicities().items()))


def e_A(A: Partition, n: Optional[int], D: int) -> Union[SymFunc, PolySeries]:
    """The degree ≤ D window of e^A: a SymFunc when n is None, else its specialization to n variables.

    Both the exponential of power sums and the product formula are evaluated;
    they must agree.
    """
    if D < 0:
        raise DomainError(f"truncation degree must be non-negative, got {D}")
    params = CharExpParams(A)
    abstract = _exp_power_sums(params, D)
    if abstract != _product_formula(params, D):
        raise InvariantViolation(f"e^{params.A}: power-sum and product formulas disagree below degree {D}")
    if n is None:
        return abstract
    specialized = expand(RationalForm(n, {(0,) * n: Fraction(1)}, _denominator(params.A, n)), D)
    if specialized != pi_n(abstract, n):
        raise InvariantViolation(f"e^{params.A}: specialization to {n} variables disagrees with the product formula")
    return specialized


# ---------- u_λ ----------

def u_lambda(A: Partition, lam: Partition, D: int, weighted: bool = True) -> SymFunc:
    """∏_i u_i^{m_i(λ)} with u_n = p_n − c_n, expanded in the power-sum basis.

    weighted=True uses c_n = Σ_{i|n} i·a_i, the shift for which the Hall-kernel
    identity reproduces s exactly; weighted=False uses c_n = Σ_{i|n} a_i, the
    unweighted shift, which for A = (2, 1) and λ = (2) gives p₂ − 2 (weighted
    gives p₂ − 3).
    """
    params = CharExpParams(A)
    # each part either contributes p_j or the constant −c_j
    out: Dict[Partition, Fraction] = {}
    for mask in itertools.product((True, False), repeat=lam.length):
        kept = Partition(tuple(p for p, keep in zip(lam.parts, mask) if keep))
        if kept.size > D:
            continue
        c = Fraction(1)
        for p, keep in zip(lam.parts, mask):
            if not keep:
                c *= -params.shift(p, weighted)
        out[kept] = out.get(kept, Fraction(0)) + c
    return SymFunc(D, Basis.P, out)


def _pair_in_p(f: SymFunc, g_p: SymFunc) -> Fraction:
    """Hall pairing when both sides are in the power-sum basis: ⟨p_λ, p_μ⟩ = z_λ δ_λμ."""
    return sum((c * z_lambda(lam) * g_p.coefficient(lam) for lam, c in f.coeffs.items()), Fraction(0))


@dataclass
class Reconstruction:
    result: SymFunc
    residual: SymFunc
    coefficients: Dict[Partition, Fraction] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.residual.is_zero()


def combination(c: Mapping[Partition, Fraction], A: Partition, D: int) -> SymFunc:
    """Σ c_λ p_λ e^A, truncated at degree D."""
    base = SymFunc(D, Basis.P, {lam: Fraction(v) for lam, v in c.items() if lam.size <= D})
    return multiply(base, e_A(A, None, D))


def reconstruct(s: SymFunc, params: CharExpParams, D: int) -> Reconstruction:
    """Σ_λ ⟨u_λ/z_λ, s⟩ p_λ e^A over |λ| ≤ D, with the residual against s.

    u_λ has degree |λ|, so every pairing only reads the window of s.
    """
    if s.D < D:
        raise DomainError(f"input window stops at degree {s.D}, below the requested {D}")
    s_p = convert(s.restrict(D), Basis.P)
    coefficients: Dict[Partition, Fraction] = {}
    for lam in partitions_up_to(D):
        value = _pair_in_p(u_lambda(params.A, lam, D), s_p) / z_lambda(lam)
        if value:
            coefficients[lam] = value
    result = combination(coefficients, params.A, D)
    residual = convert(result - s_p, Basis.S)
    logger.debug(f"reconstruct e^{params.A}: {len(coefficients)} coefficients, residual {residual}")
    return Reconstruction(convert(result, s.basis), residual, coefficients)


# ---------- Nilpotent expansion ----------

@dataclass(frozen=True)
class NilpotentPoly:
    """Coefficients on E-monomials E_ν = ∏ E_i^{m_i(ν)} modulo (E_1, …, E_k)^r.

    The E-degree of E_ν is ℓ(ν); ν = ∅ is the constant term. shapes records,
    per monomial, the factor shapes (m_j, r_j) that produced it.
    """

    r: int
    k: int
    terms: Mapping[Partition, Coefficient] = field(default_factory=dict)
    shapes: Mapping[Partition, Tuple[Shape, ...]] = field(default_factory=dict)

    def __post_init__(self):
        for nu in self.terms:
            if nu.length >= self.r:
                raise InvariantViolation(f"E-monomial {nu} has E-degree {nu.length} >= {self.r}")
            if nu.parts and nu.parts[0] > self.k:
                raise InvariantViolation(f"E-monomial {nu} uses an index above {self.k}")
        ordered = sorted(self.terms.items(), key=lambda kv: canonical_key(kv[0]))
        object.__setattr__(self, "terms", dict(ordered))

    def coefficient(self, nu: Partition) -> Optional[Coefficient]:
        return self.terms.get(nu)

    def shapes_respect_bounds(self) -> bool:
        """Σ r_j < r and Σ m_j ≤ r·k for every recorded product."""
        return all(sum(rj for _, rj in shape) < self.r and sum(mj for mj, _ in shape) <= self.r * self.k
                   for shapes in self.shapes.values() for shape in shapes)


@dataclass
class IdentityExpansion:
    """One-variable right-hand side and the exponential of its power-sum image."""

    params: CharExpParams
    D: int
    rhs: NilpotentPoly
    exponential: NilpotentPoly


def _kernel_series(A: Partition, nu: Partition, D: int) -> PolySeries:
    """t^{|ν|} / ∏_i (1 − t^i)^{a_i ℓ(ν)} to degree D."""
    factors = tuple(DenominatorFactor(1, i, a * nu.length) for i, a in sorted(A.multiplicities().items()))
    if nu.size > D:
        return PolySeries(1, D, {})
    return expand(RationalForm(1, {(nu.size,): Fraction(1)}, factors), D)


def _weight(nu: Partition) -> Fraction:
    return Fraction(math.factorial(nu.length - 1), nu.factorial())


def expand_identity(params: CharExpParams, D: int) -> IdentityExpansion:
    """Σ_ν E_ν t^{|ν|}(ℓ(ν)−1)!/(ν!·∏(1−t^i)^{a_i ℓ(ν)}) and its exponential after t^n ↦ p_n.

    A one-variable series g(t) = Σ g_j t^j maps to Σ_α g(x_α) = Σ_j g_j p_j.
    The exponential is a finite sum because every E-monomial of degree ≥ r vanishes.
    """
    if D < 0:
        raise DomainError(f"expansion degree must be non-negative, got {D}")
    index = part_rk(params.r, params.k)
    rhs_terms: Dict[Partition, Coefficient] = {}
    images: Dict[Partition, SymFunc] = {}
    for nu in index:
        series = _kernel_series(params.A, nu, D).scale(_weight(nu))
        if not series.is_zero():
            rhs_terms[nu] = series
        images[nu] = SymFunc(D, Basis.P, {Partition((d,)): c for (d,), c in series.coeffs.items() if d > 0})

    exp_terms: Dict[Partition, SymFunc] = {EMPTY: SymFunc.one(D, Basis.P)}
    exp_shapes: Dict[Partition, set] = {EMPTY: {()}}
    # X^m / m! summed over multisets of indices, with the multinomial correction 1/∏ mult!
    for m in range(1, params.r):
        for combo in itertools.combinations_with_replacement(index, m):
            key = EMPTY
            for nu in combo:
                key = key.union(nu)
            if key.length >= params.r:
                continue
            value = SymFunc.one(D, Basis.P)
            for nu in combo:
                value = multiply(value, images[nu])
            repeats = math.prod(math.factorial(combo.count(nu)) for nu in set(combo))
            value = value.scale(Fraction(1, repeats))
            shape = tuple(sorted((nu.size, nu.length) for nu in combo))
            exp_shapes.setdefault(key, set()).add(shape)
            exp_terms[key] = exp_terms[key] + value if key in exp_terms else value
    exp_terms = {nu: v for nu, v in exp_terms.items() if not v.is_zero()}

    rhs = NilpotentPoly(params.r, params.k, rhs_terms, {nu: (((nu.size, nu.length),),) for nu in rhs_terms})
    exponential = NilpotentPoly(params.r, params.k, exp_terms,
                                {nu: tuple(sorted(exp_shapes[nu])) for nu in exp_terms})
    if not exponential.shapes_respect_bounds():
        raise InvariantViolation(f"expansion for A={params.A}, r={params.r}, k={params.k} breaks the shape bounds")
    logger.debug(f"expand_identity: {len(rhs_terms)} kernel terms, {len(exp_terms)} exponential terms")
    return IdentityExpansion(params, D, rhs, exponential)


# ---------- Rational forms ----------

def rational_form(c: Mapping[Partition, Fraction], params: CharExpParams, n: int, D: int = 10) -> RationalForm:
    """π_n(Σ c_λ p_λ e^A) as numerator π_n(Σ c_λ p_λ) over ∏_α ∏_i (1 − x_α^i)^{a_i}.

    The form is expanded to degree D and compared against the direct series.
    """
    if n < 1:
        raise DomainError(f"rational_form needs n >= 1, got {n}")
    c = {lam: Fraction(v) for lam, v in c.items() if v}
    if not params.admits(c):
        raise DomainError(f"coefficients need ℓ(λ) < {params.r}: {sorted(str(lam) for lam in c)}")
    top = max((lam.size for lam in c), default=0)
    numerator = pi_n(SymFunc(top, Basis.P, c), n)
    form = RationalForm(n, numerator.coeffs, _denominator(params.A, n))
    if form.max_exponent > params.A.size:
        raise InvariantViolation(f"denominator exponent {form.max_exponent} exceeds |A| = {params.A.size}")
    direct = pi_n(combination(c, params.A, D), n)
    if expand(form, D) != direct:
        raise InvariantViolation(f"rational form {form} does not reproduce the series through degree {D}")
    return form

from fractions import Fraction

import pytest

from app.core.errors import DomainError, PreconditionError
from app.services.combinatorics import EMPTY, Partition, partitions_of, partitions_up_to, z_lambda
from app.services.symfunc import (
    Basis,
    DenominatorFactor,
    PolySeries,
    RationalForm,
    SymFunc,
    convert,
    expand,
    fit_rational,
    hall,
    multiply,
    pi_n,
    power,
)


def P(*parts):
    return Partition(tuple(parts))


def single(basis, lam, D):
    return SymFunc.element(Basis(basis), lam, D)


# ---------- Basis changes ----------

def test_small_transitions_into_schur():
    assert convert(single("h", P(2), 2), "s").coeffs == {P(2): 1}
    assert convert(single("e", P(2), 2), "s").coeffs == {P(1, 1): 1}
    assert convert(single("p", P(2), 2), "s").coeffs == {P(2): 1, P(1, 1): -1}
    assert convert(single("s", P(2, 1), 3), "m").coeffs == {P(2, 1): 1, P(1, 1, 1): 2}


def test_conversion_through_every_basis_returns_home():
    f = SymFunc(4, Basis.S, {P(2, 1): Fraction(3), P(4): Fraction(-1, 2), P(1, 1): Fraction(1)})
    g = f
    for b in ("m", "e", "h", "p", "s"):
        g = convert(g, b)
    assert g.basis is Basis.S
    assert g.coeffs == f.coeffs


def test_equality_is_basis_independent():
    assert single("h", P(1), 3) == single("s", P(1), 3)
    assert single("p", P(1, 1), 2) == SymFunc(2, Basis.S, {P(2): 1, P(1, 1): 1})


def test_products():
    s1 = single("s", P(1), 2)
    assert convert(multiply(s1, s1), "s").coeffs == {P(2): 1, P(1, 1): 1}
    assert power(single("p", P(1), 3), 3) == single("p", P(1, 1, 1), 3)
    # the window drops degree 4
    assert multiply(single("h", P(2), 3), single("h", P(2), 3)).is_zero()


def test_hall_inner_product():
    assert hall(single("p", P(2, 1), 3), single("p", P(2, 1), 3)) == 2
    for lam in partitions_of(4):
        assert hall(single("p", lam, 4), single("p", lam, 4)) == z_lambda(lam)
        assert hall(single("h", lam, 4), single("m", lam, 4)) == 1
    assert hall(single("s", P(2), 2), single("s", P(1, 1), 2)) == 0


def test_window_and_basis_errors():
    with pytest.raises(DomainError):
        SymFunc(2, Basis.S, {P(3): Fraction(1)})
    with pytest.raises(DomainError):
        Basis.parse("q")
    with pytest.raises(PreconditionError):
        single("s", P(1), 2) + single("s", P(1), 3)


@pytest.mark.parametrize("d", range(7))
def test_schur_functions_are_orthonormal(d):
    for lam in partitions_of(d):
        for mu in partitions_up_to(6):
            assert hall(single("s", lam, 6), single("s", mu, 6)) == (1 if lam == mu else 0), (lam, mu)


@pytest.mark.parametrize("d", range(7))
def test_power_sums_are_orthogonal(d):
    for lam in partitions_of(d):
        for mu in partitions_up_to(6):
            expected = z_lambda(lam) if lam == mu else 0
            assert hall(single("p", lam, 6), single("p", mu, 6)) == expected, (lam, mu)


@pytest.mark.parametrize("source", ["m", "e", "h", "p", "s"])
@pytest.mark.parametrize("target", ["m", "e", "h", "p", "s"])
def test_conversion_round_trip(source, target):
    D = 8
    f = SymFunc(D, Basis(source), {lam: Fraction(j + 1, (j % 3) + 1) for j, lam in enumerate(partitions_up_to(D))})
    there = convert(f, target)
    assert there.basis is Basis(target)
    back = convert(there, source)
    assert back.basis is Basis(source)
    assert back.coeffs == f.coeffs


# ---------- Specialization ----------

def test_pi_n_of_complete_sums():
    f = SymFunc(5, Basis.H, {P(d): Fraction(1) for d in range(1, 6)})
    assert pi_n(f, 1).univariate() == [0, 1, 1, 1, 1, 1]


def test_pi_n_drops_long_schur_terms():
    assert pi_n(single("s", P(1, 1), 2), 1).is_zero()
    two = pi_n(single("s", P(1, 1), 2), 2)
    assert two.coeffs == {(1, 1): 1}
    assert pi_n(single("p", P(2), 2), 2).coeffs == {(0, 2): 1, (2, 0): 1}
    with pytest.raises(DomainError):
        pi_n(single("s", P(1), 1), 0)


# ---------- Rational forms ----------

def test_expand_geometric_series():
    rf = RationalForm(1, {(0,): Fraction(1)}, (DenominatorFactor(1, 1, 1),))
    assert expand(rf, 3) == PolySeries.from_univariate([1, 1, 1, 1])


def test_expand_two_factor_denominator():
    rf = RationalForm(1, {(3,): Fraction(1)}, (DenominatorFactor(1, 1, 1), DenominatorFactor(1, 2, 1)))
    assert expand(rf, 7).univariate() == [0, 0, 0, 1, 1, 2, 2, 3]
    assert rf.denominator_degree == 3
    assert rf.max_exponent == 2


def test_rational_form_merges_repeated_factors():
    rf = RationalForm(1, {}, (DenominatorFactor(1, 1, 1), DenominatorFactor(1, 1, 2)))
    assert rf.denominator == (DenominatorFactor(1, 1, 3),)
    with pytest.raises(DomainError):
        RationalForm(1, {}, (DenominatorFactor(2, 1, 1),))


def test_multivariate_product():
    x = PolySeries(2, 2, {(1, 0): 1})
    y = PolySeries(2, 2, {(0, 1): 1})
    assert (x + y) * (x + y) == PolySeries(2, 2, {(2, 0): 1, (1, 1): 2, (0, 2): 1})
    assert ((x + y) * (x + y)).collapse().univariate() == [0, 0, 4]


# ---------- Rational fitting ----------

def test_fit_recovers_squared_geometric_series():
    series = PolySeries.from_univariate([d + 1 for d in range(16)])
    fit = fit_rational(series, 1, 2)
    assert fit.success
    assert fit.form.numerator == {(0,): 1}
    assert fit.form.denominator == (DenominatorFactor(1, 1, 2),)
    assert fit.numerator_budget == 7
    assert fit.fit_window == 10


def test_fit_recovers_wedge_square_dimensions():
    coefficients = [0, 0, 0] + [(d - 1) // 2 for d in range(3, 13)]
    fit = fit_rational(PolySeries.from_univariate(coefficients), 2, 3)
    assert fit.success
    assert fit.form.numerator == {(3,): 1}
    assert fit.form.denominator == (DenominatorFactor(1, 1, 1), DenominatorFactor(1, 2, 1))
    assert expand(fit.form, 12).univariate() == coefficients


def test_fit_failure_is_a_result():
    cubic = PolySeries.from_univariate([(d + 1) * (d + 2) // 2 for d in range(16)])
    fit = fit_rational(cubic, 1, 2)
    assert not fit.success
    assert fit.form is None
    assert fit.candidates_tried > 0


def test_fit_needs_enough_degrees():
    with pytest.raises(PreconditionError):
        fit_rational(PolySeries.from_univariate([1] * 5), 1, 2)


def test_zero_series_fits_trivially():
    fit = fit_rational(PolySeries(1, 15, {}), 1, 2)
    assert fit.success
    assert fit.form.numerator == {}
    assert fit.form.denominator == ()
    assert SymFunc.one(3).coefficient(EMPTY) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("basis", ["s", "p"])
def test_pi_n_is_a_ring_homomorphism(n, basis):
    D = 5
    small = partitions_up_to(3)
    for lam in small:
        f = single(basis, lam, D)
        assert pi_n(f + SymFunc.one(D, Basis(basis)), n) == pi_n(f, n) + PolySeries.one(n, D)
        for mu in small:
            g = single(basis, mu, D)
            assert pi_n(multiply(f, g), n) == pi_n(f, n) * pi_n(g, n), (lam, mu)
    assert pi_n(SymFunc.one(D), n) == PolySeries.one(n, D)

import math
import warnings
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import mp_brace, mp_bracket, mp_factorial
from qdeform.exceptions import QDivergenceError, QDomainError, QParameterError, QPrecisionError
from qdeform.laurent import QFraction
from qdeform.qcore import (
    canonical_q,
    check_q,
    half_integer,
    q_binomial,
    q_binomial_poly,
    q_brace,
    q_brace_poly,
    q_bracket,
    q_bracket_poly,
    q_deformed_binom,
    q_deformed_binom_coeffs,
    q_deformed_binom_poly,
    q_exp_E,
    q_exp_E_product,
    q_exp_e,
    q_exp_e_neg_lattice,
    q_factorial,
    q_factorial_poly,
    q_log_factorial,
    q_power_poly,
    recessive_anchor,
)

qs = st.floats(0.2, 5.0).filter(lambda v: abs(v - 1) > 1e-3)
xs = st.floats(-8, 8)


@pytest.mark.parametrize("bad", [0, -0.5, 1, 1.0, float("inf"), float("nan"), "abc"])
def test_check_q_rejects(bad):
    with pytest.raises(QParameterError):
        check_q(bad)


def test_canonical_q():
    assert canonical_q(2.0) == 0.5
    assert canonical_q(0.25) == 0.25


@pytest.mark.parametrize("x, expect", [(1, Fraction(1)), ("3/2", Fraction(3, 2)), (2.5, Fraction(5, 2))])
def test_half_integer(x, expect):
    assert half_integer(x) == expect


@pytest.mark.parametrize("x", [0.75, "1/3", 0.1])
def test_half_integer_rejects(x):
    with pytest.raises(QParameterError):
        half_integer(x)


def test_bracket_small_values():
    assert q_bracket(0, 0.7) == 0
    assert q_bracket(1, 0.7) == pytest.approx(1)
    assert q_bracket(2, 0.5) == pytest.approx(2.5)
    assert q_brace(2, 0.5) == pytest.approx(1.25)


@pytest.mark.parametrize("x", [0.5, 1, 2.5, 7, 20, -3])
def test_bracket_and_brace_against_mpmath(q, x, mp50):
    assert q_bracket(x, q) == pytest.approx(float(mp_bracket(x, q)), rel=1e-13)
    assert q_brace(x, q) == pytest.approx(float(mp_brace(x, q)), rel=1e-13)


@given(xs, qs)
def test_bracket_invariant_under_inverse_q(x, q):
    assert q_bracket(x, q) == pytest.approx(q_bracket(x, 1 / q), rel=1e-12, abs=1e-12)


@given(xs, qs)
def test_brace_is_shifted_bracket(x, q):
    assert q_brace(x, q) == pytest.approx(q_bracket(x, q) * q ** (x - 1), rel=1e-10, abs=1e-12)


def test_bracket_is_accurate_near_one():
    # [x]_q = x + x (x^2 - 1) h^2 / 6 + O(h^4), h = ln q
    h = 1e-6
    q = math.exp(h)
    assert q_bracket(5, q) == pytest.approx(5 + 5 * 24 * h * h / 6, rel=1e-15)


def test_bracket_converges_quadratically_to_x():
    eps = np.array([1e-2, 1e-3, 1e-4])
    d = [abs(q_bracket(7.0, 1 + e) - 7.0) for e in eps]
    order = np.polyfit(np.log(eps), np.log(d), 1)[0]
    assert order == pytest.approx(2, abs=0.02)


def test_brace_converges_linearly_to_x():
    eps = np.array([1e-2, 1e-3, 1e-4])
    d = [abs(q_brace(7.0, 1 + e) - 7.0) for e in eps]
    order = np.polyfit(np.log(eps), np.log(d), 1)[0]
    assert order == pytest.approx(1, abs=0.02)


@pytest.mark.parametrize("n", [0, 1, 5, 12])
def test_factorials_against_mpmath(q, n, mp50):
    assert q_factorial(n, q) == pytest.approx(float(mp_factorial(n, q)), rel=1e-12)
    assert q_factorial(n, q, "brace") == pytest.approx(float(mp_factorial(n, q, mp_brace)), rel=1e-12)
    assert q_log_factorial(n, q) == pytest.approx(float(mpmath.log(mp_factorial(n, q))), abs=1e-12)


def test_factorial_domain():
    with pytest.raises(QDomainError):
        q_factorial(-1, 0.5)
    with pytest.raises(QDomainError):
        q_factorial(1.5, 0.5)
    with pytest.raises(QParameterError):
        q_factorial(3, 0.5, "weird")


@pytest.mark.parametrize("n", range(0, 21))
def test_exact_matches_numeric(q, n):
    assert float(q_bracket_poly(n).evaluate(q)) == pytest.approx(q_bracket(n, q), rel=1e-12, abs=1e-300)
    assert float(q_brace_poly(n).evaluate(q)) == pytest.approx(q_brace(n, q), rel=1e-12, abs=1e-300)
    assert float(q_factorial_poly(n).evaluate(q)) == pytest.approx(q_factorial(n, q), rel=1e-12)
    m = n // 3
    assert float(q_binomial_poly(n, m).evaluate(q)) == pytest.approx(q_binomial(n, m, q), rel=1e-12)


def test_exact_brackets_are_palindromic():
    for n in range(12):
        assert q_bracket_poly(n).is_palindromic()
        assert q_binomial_poly(n, n // 2).is_palindromic()


def test_exact_brace_identity():
    for n in range(21):
        assert q_brace_poly(n) == q_bracket_poly(n) * q_power_poly(n - 1)


def test_half_odd_bracket_is_a_fraction():
    b = q_bracket_poly(Fraction(5, 2))
    assert isinstance(b, QFraction)
    assert float(b.evaluate(0.6)) == pytest.approx(q_bracket(2.5, 0.6), rel=1e-13)


def test_bracket_in_base_q_squared():
    b = q_bracket_poly(3, base_power=2)
    assert float(b.evaluate(0.8)) == pytest.approx(q_bracket(3, 0.64), rel=1e-13)


def test_binomial_pascal_rule():
    # [n, m] = q^m [n-1, m] + q^(m-n) [n-1, m-1]
    for n in range(1, 10):
        for m in range(1, n):
            lhs = q_binomial_poly(n, m)
            rhs = q_power_poly(m) * q_binomial_poly(n - 1, m) + q_power_poly(m - n) * q_binomial_poly(n - 1, m - 1)
            assert lhs == rhs


@pytest.mark.parametrize("n", [0, 1, 2, 5])
@pytest.mark.parametrize("sign", ["minus", "plus"])
def test_deformed_binomial_product_equals_sum(q, n, sign):
    x = np.linspace(-2, 3, 11)
    c = q_deformed_binom_coeffs(n, q, sign)
    series = np.polynomial.polynomial.polyval(x, c)
    assert np.allclose(q_deformed_binom(x, n, q, sign), series, rtol=1e-11, atol=1e-11 * np.abs(c).sum())
    exact = q_deformed_binom_poly(n, sign)
    assert np.allclose([float(p.evaluate(q)) for p in exact], c, rtol=1e-12)


def test_deformed_binomial_zeros_are_exact_on_the_lattice():
    # (1-x)^3_q vanishes at q^-2, 1, q^2
    q = 0.5
    assert np.all(q_deformed_binom(np.array([4.0, 1.0, 0.25]), 3, q) == 0)


def test_deformed_binomial_reciprocal_pole():
    # (1-x)^2_q vanishes at x = q^-1
    with pytest.raises(QDomainError):
        q_deformed_binom(2.0, 2, 0.5, "minus", reciprocal=True)
    assert q_deformed_binom(0.0, 4, 0.5, "plus", reciprocal=True) == 1.0


# --------------------------------------------------------- exponentials

def _mp_exp(x, q, fn):
    term = mpmath.mpf(1)
    total = term
    for n in range(1, 600):
        term = term * x / fn(n, q)
        total += term
        if abs(term) < mpmath.mpf(10) ** -60 * abs(total):
            break
    return total


@pytest.mark.parametrize("x", [0.3, -0.8, 2.5, -4.0])
def test_q_exp_e_against_mpmath(q, x):
    with mpmath.workdps(60):
        ref = float(_mp_exp(mpmath.mpf(x), q, mp_bracket))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert q_exp_e(x, q) == pytest.approx(ref, rel=1e-11)


def test_q_exp_e_complex_argument():
    z = 0.4 + 0.3j
    with mpmath.workdps(40):
        ref = complex(_mp_exp(mpmath.mpc(z), 0.8, mp_bracket))
    assert q_exp_e(z, 0.8) == pytest.approx(ref, rel=1e-13)


def test_q_exp_e_is_eigenfunction_of_symmetric_derivative():
    q, z = 0.7, 0.9
    d = (q_exp_e(q * z, q) - q_exp_e(z / q, q)) / (z * (q - 1 / q))
    assert d == pytest.approx(q_exp_e(z, q), rel=1e-12)


def test_q_exp_E_is_eigenfunction_of_asymmetric_derivative():
    q, z = 0.7, 0.9
    d = (q_exp_E(q * q * z, q) - q_exp_E(z, q)) / (z * (q * q - 1))
    assert d == pytest.approx(q_exp_E(z, q), rel=1e-12)


def test_q_exp_E_diverges_outside_its_radius():
    q = 0.5
    with pytest.raises(QDivergenceError):
        q_exp_E(1.5 / (1 - q * q), q)


@pytest.mark.parametrize("q", [0.5, 0.9, 1.3])
@pytest.mark.parametrize("x", [-1.0, -0.3, 0.2])
def test_q_exp_E_product_matches_series(q, x):
    assert q_exp_E_product(x, q) == pytest.approx(q_exp_E(x, q), rel=1e-13)


def test_q_exp_E_product_pole():
    q = 0.5
    with pytest.raises(QDomainError):
        q_exp_E_product(1 / (1 - q * q), q)


def test_q_exp_e_warns_on_cancellation():
    with pytest.warns(RuntimeWarning):
        q_exp_e(-30.0, 0.95)


def test_full_output_reports_terms():
    val, info = q_exp_e(0.5, 0.5, full_output=True)
    assert info.terms > 3
    assert info.value == val
    assert info.cancellation <= 1.0


@pytest.mark.parametrize("q", [0.5, 0.7, 0.9, 1.25])
def test_recessive_lattice_values_against_mpmath(q):
    c = recessive_anchor(q)
    p = canonical_q(q)
    ks = np.array([-3, -6, -10, -15])
    x = c * p ** ks.astype(float)
    got = q_exp_e_neg_lattice(x, q)
    # the lattice must be built in high precision: off-lattice the function
    # is enormously sensitive to x
    with mpmath.workdps(150):
        pm = mpmath.mpf(p)
        cm = pm / (1 - pm**2)
        ref = [float(_mp_exp(-cm * pm ** int(k), pm, mp_bracket)) for k in ks]
    assert np.allclose(got, ref, rtol=1e-7, atol=1e-12)


def test_recessive_lattice_decays():
    q = 0.8
    c = recessive_anchor(q)
    vals = q_exp_e_neg_lattice(c * q ** -np.arange(5.0, 40.0), q)
    assert np.all(np.abs(vals) < 1) and abs(vals[-1]) < 1e-20


def test_off_lattice_large_argument_raises():
    with pytest.raises(QPrecisionError):
        q_exp_e_neg_lattice(30.3, 0.9)


def test_off_lattice_moderate_argument_is_accurate():
    # e_q^{-x} is entire and changes sign off the lattice; the series is still usable here
    with mpmath.workdps(60):
        ref = float(_mp_exp(mpmath.mpf("-37.3"), 0.5, mp_bracket))
    assert q_exp_e_neg_lattice(37.3, 0.5) == pytest.approx(ref, rel=1e-12)


def test_negative_argument_rejected():
    with pytest.raises(QDomainError):
        q_exp_e_neg_lattice(-1.0, 0.5)

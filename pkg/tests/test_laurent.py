from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdeform.laurent import LaurentPoly, QFraction, as_exact

coeffs = st.integers(-5, 5)
polys = st.dictionaries(st.integers(-6, 6), coeffs, max_size=5).map(LaurentPoly)
nonzero = polys.filter(lambda p: not p.is_zero())


def test_zero_coefficients_are_dropped():
    p = LaurentPoly({2: 1, 0: 0, -2: 0})
    assert p == LaurentPoly.q_power(1)
    assert LaurentPoly({3: 0}).is_zero()


@pytest.mark.parametrize(
    "poly, text",
    [
        (LaurentPoly({4: 1, 0: 1, -4: 1}), "q^2 + 1 + q^-2"),
        (LaurentPoly.q_power(Fraction(5, 2)), "q^{5/2}"),
        (LaurentPoly({2: 2}), "2·q"),
        (LaurentPoly(), "0"),
    ],
)
def test_str(poly, text):
    assert str(poly) == text


def test_q_power_is_in_half_units():
    # s = q^(1/2), so q^1 is the exponent 2
    assert LaurentPoly.q_power(1).coeffs == {2: 1}
    assert LaurentPoly.q_power(Fraction(-1, 2)).evaluate(4.0) == pytest.approx(0.5)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert a - a == LaurentPoly()


@given(polys, nonzero)
def test_divmod_reconstructs(a, b):
    quot, rem = a.divmod(b)
    assert quot * b + rem == a


@given(polys, nonzero)
def test_exact_division_of_a_product(a, b):
    assert (a * b).exact_div(b) == a
    assert as_exact((a * b) / b) == a


def test_inexact_division_raises():
    with pytest.raises(ValueError):
        LaurentPoly({2: 1, 0: 1}).exact_div(LaurentPoly({2: 1, 0: 2}))


def test_monomial_powers():
    s = LaurentPoly.q_power(Fraction(1, 2))
    assert s**-2 == LaurentPoly.q_power(-1)
    assert (LaurentPoly({2: 1, 0: 1}) ** 2).coeffs == {4: 1, 2: 2, 0: 1}


def test_negative_power_of_polynomial_is_fraction():
    f = LaurentPoly({2: 1, 0: 1}) ** -1
    assert isinstance(f, QFraction)
    assert f.evaluate(3.0) == pytest.approx(1 / 4)


@given(polys)
def test_reflect_is_q_to_inverse_q(p):
    assert p.reflect().evaluate(0.7) == pytest.approx(p.evaluate(1 / 0.7), rel=1e-9, abs=1e-9)
    assert p.reflect().reflect() == p


def test_fraction_equality_cross_multiplies():
    a = LaurentPoly({2: 1, -2: 1})
    b = LaurentPoly({2: 1, 0: 3})
    assert QFraction(a * b, b * b) == QFraction(a, b)
    assert QFraction(a, b) != QFraction(b, a)


def test_fraction_with_monomial_denominator_becomes_polynomial():
    f = QFraction(LaurentPoly({4: 1, 0: 1}), LaurentPoly.q_power(1))
    assert f.den == LaurentPoly.constant(1)
    assert as_exact(f) == LaurentPoly({2: 1, -2: 1})


@settings(max_examples=60)
@given(nonzero, nonzero, nonzero)
def test_reduced_cancels_common_factor(a, b, c):
    f = QFraction(a * c, b * c)
    r = f.reduced()
    assert r == QFraction(a, b)
    span = lambda p: p.max_exponent - p.min_exponent  # noqa: E731
    assert span(r.den) <= span(b)


def test_fraction_arithmetic_matches_floats():
    f = QFraction(LaurentPoly({2: 1}), LaurentPoly({2: 1, 0: 1}))
    g = QFraction(LaurentPoly.constant(3), LaurentPoly({4: 1, -4: 1}))
    for q in (0.3, 1.7):
        assert (f + g).evaluate(q) == pytest.approx(f.evaluate(q) + g.evaluate(q))
        assert (f * g).evaluate(q) == pytest.approx(f.evaluate(q) * g.evaluate(q))
        assert (f / g).evaluate(q) == pytest.approx(f.evaluate(q) / g.evaluate(q))
        assert (1 - f).evaluate(q) == pytest.approx(1 - f.evaluate(q))


def test_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        QFraction(LaurentPoly.constant(1), LaurentPoly())


def test_immutable():
    p = LaurentPoly({2: 1})
    with pytest.raises(AttributeError):
        p.foo = 1

import json
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from qdeform.algebra import SU11_REALIZATIONS
from qdeform.coherent import (
    CoherentFamily,
    MeasureSpec,
    adjudicate_glauber,
    adjudicate_k0_one,
    coherent_vector,
    coherent_vector_operator,
    finite_glauber2,
    glauber_e,
    glauber_EE,
    gram_accumulation,
    measure_eval,
    overlap,
    perelomov11,
    perelomov2,
    resolve_unity,
)
from qdeform.exceptions import ConfigError, QDomainError
from qdeform.qcore import q_bracket

Z = 0.3 - 0.2j


# ------------------------------------------------------------- measures

def test_g_at_origin():
    assert measure_eval(MeasureSpec("g", 0.7), 0.0) == pytest.approx(1 / math.pi)


@pytest.mark.parametrize("J", [1, 2, 5])
def test_H_at_origin(J):
    q = 0.9
    assert measure_eval(MeasureSpec("H", q, J=J), 0.0) == pytest.approx(q_bracket(J + 1, q) / math.pi)


def test_h_at_origin():
    assert measure_eval(MeasureSpec("h", 0.5), 0.0) == pytest.approx(1 / math.pi)


def test_G_at_k0_one_variants():
    x = np.array([0.1, 0.7])
    assert np.allclose(MeasureSpec("G", 0.6, k0=1)(x), 1 / math.pi)
    assert np.allclose(MeasureSpec("G", 0.6, k0=1, variant="printed")(x), x / math.pi)


def test_G_general_formula():
    q, x = 0.8, 0.3
    # 2k0 = 4: [3]/pi (1 - q x)(1 - x/q)
    expect = q_bracket(3, q) / math.pi * (1 - q * x) * (1 - x / q)
    assert MeasureSpec("G", q, k0=2)(x) == pytest.approx(expect, rel=1e-14)


@pytest.mark.parametrize("k0", [Fraction(3, 2), 2, Fraction(5, 2), 3])
def test_G_nonnegative_on_its_nodes(k0):
    m = MeasureSpec("G", 0.7, k0=k0)
    x = m.rule().nodes(np.arange(200))
    assert np.all(m(x) >= 0)


def test_G_domain():
    # nodes sit on the zeros of (1-x)^2_q: upper limit q^-2
    m = MeasureSpec("G", 0.5, k0=2)
    assert m.upper == 4.0
    with pytest.raises(QDomainError):
        m(5.0)


@pytest.mark.parametrize(
    "kw",
    [
        {"name": "G", "q": 0.5, "k0": 0.75},
        {"name": "G", "q": 0.5, "k0": 0.5},
        {"name": "G", "q": 0.5, "k0": 2, "variant": "printed"},
        {"name": "H", "q": 0.5, "J": 0},
        {"name": "h", "q": 1.5},
        {"name": "X", "q": 0.5},
    ],
)
def test_measure_validation(kw):
    with pytest.raises(ConfigError):
        MeasureSpec(**kw)


# --------------------------------------------------------------- states

FAMS = [
    perelomov11(Fraction(3, 2), 0.7),
    glauber_e(0.7),
    glauber_EE(0.7),
    perelomov2(4, 0.7),
    finite_glauber2(4, 0.7, "operator"),
]


@pytest.mark.parametrize("fam", FAMS, ids=lambda f: f.label)
def test_vacuum_component(fam):
    v = coherent_vector(fam, 0.0)
    expect = np.zeros(len(v))
    expect[0 if fam.powers(len(v) - 1)[0] == 0 else -1] = 1
    assert np.array_equal(np.abs(v), expect) or np.allclose(v, expect)


OPERATOR_FAMS = FAMS[:3] + [CoherentFamily("Perelomov2", 0.7, J=4, convention="operator"), FAMS[4]]


@pytest.mark.parametrize("fam", OPERATOR_FAMS, ids=lambda f: f.label)
def test_operator_route_matches_coefficients(fam):
    a = coherent_vector(fam, Z, 8 if not fam.finite else None)
    b = coherent_vector_operator(fam, Z, 8 if not fam.finite else None)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-15)


def test_perelomov2_operator_route_is_relabelled():
    fam = perelomov2(5, 0.8)
    a = coherent_vector(fam, Z)
    b = coherent_vector_operator(fam, Z)
    # e_q^{zbar Q_-}|J) carries zbar^(J-n) on |n): same amplitudes, reversed powers
    amps = fam.amplitudes(5)
    assert np.allclose(amps, amps[::-1])
    assert np.allclose(b, [amps[n] * np.conj(Z) ** (5 - n) for n in range(6)], rtol=1e-13)
    assert not np.allclose(a, b)


def test_perelomov2_spin_half_components():
    q = 0.9
    v = coherent_vector(perelomov2(1, q), Z)
    assert np.allclose(v, [1, np.conj(Z)])


def test_perelomov2_components_against_formula():
    q, J = 0.9, 4
    v = coherent_vector(perelomov2(J, q), Z)
    fact = lambda n: math.prod(q_bracket(k, q) for k in range(1, n + 1))  # noqa: E731
    for n in range(J + 1):
        assert v[n] == pytest.approx(np.conj(Z) ** n * math.sqrt(fact(J) / (fact(n) * fact(J - n))), rel=1e-13)


@pytest.mark.parametrize("J", [1, 3, 6])
def test_finite_glauber_printed_is_perelomov2(J):
    a = coherent_vector(finite_glauber2(J, 0.9), Z)
    b = coherent_vector(perelomov2(J, 0.9), Z)
    assert np.max(np.abs(a - b)) < 1e-12


@pytest.mark.parametrize("name", SU11_REALIZATIONS)
def test_perelomov11_is_realization_independent(name):
    fam = perelomov11(Fraction(3, 2), 0.8)
    a = coherent_vector(fam, Z, 12)
    b = coherent_vector_operator(fam, Z, 12, realization=name)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-15)


def test_vector_outside_disk_raises():
    with pytest.raises(QDomainError):
        coherent_vector(perelomov11(1, 0.7), 0.9)


def test_glauber_EE_radius():
    fam = glauber_EE(0.5)
    assert fam.radius_sq() == pytest.approx(1 / 0.75)
    with pytest.raises(QDomainError):
        coherent_vector(fam, 1.2)


# --------------------------------------------------------------- overlap

def test_overlap_basics():
    fam = perelomov11(1, 0.8)
    assert overlap(fam, 0, 0.4 + 0.1j, 30) == pytest.approx(1)
    o = overlap(fam, Z, Z, 40)
    assert abs(o.imag) < 1e-15 and o.real >= 1


def test_overlap_near_classical_limit():
    q = 1 + 1e-7
    z, w = 0.3 + 0.1j, -0.2 + 0.25j
    o = overlap(perelomov11(1, q), z, w, 80)
    assert o == pytest.approx((1 - np.conj(z) * w) ** -2, rel=1e-6)


def test_overlap_divergence():
    with pytest.raises(QDomainError):
        overlap(perelomov11(1, 0.8), 0.95, 0.95, 30)


# ---------------------------------------------------- resolution of unity

@pytest.mark.parametrize("q", [0.5, 0.9, 1.1, 2.0])
@pytest.mark.parametrize("k0", [1, Fraction(3, 2), 2, Fraction(5, 2), 3])
def test_perelomov11_unity(q, k0):
    assert resolve_unity(perelomov11(k0, q), 10).passed


@pytest.mark.parametrize("q", [0.5, 0.9, 1.1, 2.0])
def test_glauber_e_unity(q):
    rep = resolve_unity(glauber_e(q), 10)
    assert rep.passed
    assert rep.max_deviation < 1e-12


@pytest.mark.parametrize("fam", ["Perelomov2", "FiniteGlauber2"])
@pytest.mark.parametrize("J", range(1, 7))
def test_su2_unity(fam, J):
    assert resolve_unity(CoherentFamily(fam, 0.9, J=J, convention="printed")).passed


def test_su2_spin_half_against_brute_force():
    # independent sum over q^(2j+1), j in Z, of x^n [2]/((1+q^2 x)(1+x)(1+x/q^2))
    with mpmath.workdps(30):
        q = mpmath.mpf("0.9")
        br2 = q + 1 / q
        moments = []
        for n in (0, 1):
            terms = []
            for j in range(-700, 700):
                x = q ** (2 * j + 1)
                terms.append(x * x**n * br2 / ((1 + q * q * x) * (1 + x) * (1 + x / (q * q))))
            moments.append((1 / q - q) * mpmath.fsum(terms))
    rep = resolve_unity(perelomov2(1, 0.9))
    assert rep.moments[0] == pytest.approx(float(moments[0]), rel=1e-12)
    assert rep.moments[1] == pytest.approx(float(moments[1]), rel=1e-12)


def test_glauber_EE_moments_are_not_one():
    # operator convention with h gives M_n = q^-n(n+1), checked against an mpmath bilateral sum
    rep = resolve_unity(glauber_EE(0.5), 4)
    assert np.allclose(rep.moments, [0.5 ** (-n * (n + 1)) for n in range(5)], rtol=1e-12)
    assert not rep.passed


def test_operator_finite_glauber_fails():
    assert not resolve_unity(finite_glauber2(3, 0.9, "operator")).passed
    assert resolve_unity(finite_glauber2(1, 0.9, "operator")).passed


def test_k0_half_is_routed_to_glauber():
    with pytest.raises(ConfigError, match="GlauberE"):
        resolve_unity(perelomov11(Fraction(1, 2), 0.5))


def test_integration_errors_are_reported_not_raised():
    rep = resolve_unity(perelomov11(1, 0.8), 5, rule_kw={"max_nodes": 3, "tail_tol": 1e-300})
    assert rep.errors and not rep.passed


def test_margin_limits_the_check():
    rep = resolve_unity(glauber_EE(0.9), 6, margin=6)
    assert rep.n_checked == 0 and rep.passed


def test_report_serializes():
    d = resolve_unity(glauber_e(0.5), 4).to_dict()
    assert json.loads(json.dumps(d))["pass"] is True
    assert len(d["moments"]) == 5


@pytest.mark.parametrize(
    "fam", [perelomov11(Fraction(3, 2), 0.7), glauber_e(0.7), perelomov2(4, 0.7), perelomov11(2, 1.3)], ids=lambda f: f.label
)
def test_gram_accumulation_is_identity(fam):
    n = 8 if not fam.finite else fam.J
    G = gram_accumulation(fam, n)
    assert np.max(np.abs(G - np.eye(n + 1))) < 1e-10


def test_gram_accumulation_off_diagonals_vanish_for_failing_family():
    G = gram_accumulation(finite_glauber2(4, 0.7, "operator"))
    assert np.max(np.abs(G - np.diag(np.diag(G)))) < 1e-12


# ---------------------------------------------------------- adjudication

@pytest.mark.parametrize("q", [0.5, 0.9])
def test_glauber_adjudication(q):
    a = adjudicate_glauber("E", q)
    assert a.verdict == "operator"
    assert adjudicate_glauber("E", q).to_dict() == a.to_dict()
    assert adjudicate_glauber("EE", q).verdict == "none"


@pytest.mark.parametrize("q", [0.5, 0.9, 1.5])
def test_k0_one_adjudication(q):
    a = adjudicate_k0_one(q)
    assert a.verdict == "general"
    assert "verdict=general" in a.summary_line()


def test_family_validation():
    with pytest.raises(ConfigError):
        CoherentFamily("Nope", 0.5)
    with pytest.raises(ConfigError):
        CoherentFamily("Perelomov2", 0.5, J=0)
    with pytest.raises(ConfigError):
        CoherentFamily("GlauberE", 0.5, convention="other")
    with pytest.raises(ConfigError):
        glauber_EE(1.5)

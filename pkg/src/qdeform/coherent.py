"""q-coherent states, their measures and the resolution-of-unity test.

A family is described in the unit basis by component powers p_n and real
amplitudes a_n: the state is sum_n zbar^(p_n) a_n |n). With
d^2_q z = dtheta d_q x / 2 and x = |z|^2 the angular integral is exact, so
the resolution of unity reduces to one radial moment per n:

    M_n = pi * a_n^2 * int x^(p_n) W(x) d_q x  ==  1.

Measures and node sets::

    G  [2k0-1]/pi (1-x)^(2k0-2)_q   symmetric rule on [0, q^-(2k0-2)], q < 1 form
    g  e_q^{-x}/pi                  symmetric rule on the lattice q^k/(1/q - q)
    h  E_q^{-x}/pi                  base-q^2 rule on q^(2j), q < 1
    H  [J+1]/pi / (1+x)^(J+2)_q     symmetric rule on q^(2j+1)

The upper limit for G places the nodes on the zeros of (1-x)^(2k0-2)_q; the
unit disk only works for even 2k0. e_q^{-x} decays only on its own lattice,
so g needs that anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exceptions import ConfigError, QDeformError, QDomainError, QParameterError
from .fock import UNIT, factorial_norms, to_unit_basis
from .laurent import LaurentPoly
from .oscillators import _pair
from .qcalc import ASYMMETRIC, SYMMETRIC, JacksonRule, jackson_integral
from .qcore import (
    _brace,
    _bracket,
    canonical_q,
    check_q,
    half_integer,
    q_deformed_binom,
    q_exp_E_product,
    q_exp_e_neg_lattice,
    recessive_anchor,
)

__all__ = [
    "FAMILIES",
    "MeasureSpec",
    "CoherentFamily",
    "UnityReport",
    "Adjudication",
    "perelomov11",
    "glauber_e",
    "glauber_EE",
    "perelomov2",
    "finite_glauber2",
    "measure_eval",
    "coherent_vector",
    "coherent_vector_operator",
    "resolve_unity",
    "overlap",
    "gram_accumulation",
    "adjudicate_glauber",
    "adjudicate_k0_one",
]

FAMILIES = ("Perelomov11", "GlauberE", "GlauberEE", "Perelomov2", "FiniteGlauber2")
_MEASURES = ("G", "g", "h", "H")


# ---------------------------------------------------------------- measures

@dataclass(frozen=True)
class MeasureSpec:
    """Weight W(x) on x = |z|^2 together with its Jackson node set.

    ``variant`` only matters for G at k0 = 1: 'general' evaluates the
    general formula (1/pi), 'printed' uses the tabulated x/pi.
    """

    name: str
    q: float
    k0: Fraction | None = None
    J: int | None = None
    variant: str = "general"

    def __post_init__(self):
        if self.name not in _MEASURES:
            raise ConfigError(f"unknown measure {self.name!r}; choose from {_MEASURES}")
        object.__setattr__(self, "q", check_q(self.q))
        if self.variant not in ("general", "printed"):
            raise ConfigError(f"variant must be 'general' or 'printed', got {self.variant!r}")
        if self.name == "G":
            if self.k0 is None:
                raise ConfigError("measure G needs k0")
            try:
                k0 = half_integer(self.k0, "k0")
            except QParameterError as e:
                raise ConfigError(f"measure G needs 2k0 to be an integer: {e}") from None
            if 2 * k0 <= 1:
                raise ConfigError("measure G needs 2k0 > 1; for k0 = 1/2 use the GlauberE route")
            if self.variant == "printed" and k0 != 1:
                raise ConfigError("the printed variant exists only for k0 = 1")
            object.__setattr__(self, "k0", k0)
        if self.name == "H":
            if self.J is None or int(self.J) != self.J or self.J < 1:
                raise ConfigError(f"measure H needs an integer J >= 1, got {self.J!r}")
            object.__setattr__(self, "J", int(self.J))
        if self.name == "h" and self.q > 1:
            raise ConfigError("measure h uses the base-q^2 rule, which needs q < 1")

    @property
    def upper(self):
        if self.name == "G":
            return canonical_q(self.q) ** -(int(2 * self.k0) - 2)
        return math.inf

    def rule(self, **kw):
        if self.name == "G":
            return JacksonRule(SYMMETRIC, self.q, upper=self.upper, **kw)
        if self.name == "g":
            return JacksonRule(SYMMETRIC, self.q, upper=math.inf, anchor=recessive_anchor(self.q), **kw)
        if self.name == "h":
            return JacksonRule(ASYMMETRIC, self.q, upper=math.inf, anchor=1.0, **kw)
        return JacksonRule(SYMMETRIC, self.q, upper=math.inf, anchor=1.0, **kw)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0) or np.any(x > self.upper * (1 + 1e-12)):
            raise QDomainError(f"measure {self.name} evaluated outside [0, {self.upper}]")
        q = self.q
        if self.name == "G":
            m = int(2 * self.k0) - 2
            if self.variant == "printed":
                out = x / math.pi
            else:
                out = _bracket(m + 1, q) / math.pi * q_deformed_binom(x, m, q, "minus")
        elif self.name == "g":
            out = q_exp_e_neg_lattice(x, q) / math.pi
        elif self.name == "h":
            out = q_exp_E_product(-x, q) / math.pi
        else:
            out = _bracket(self.J + 1, q) / math.pi * q_deformed_binom(x, self.J + 2, q, "plus", reciprocal=True)
        return out[()] if np.ndim(out) == 0 else out

    def to_dict(self):
        d = {"measure": self.name, "q": self.q, "variant": self.variant}
        if self.k0 is not None:
            d["k0"] = str(self.k0)
        if self.J is not None:
            d["J"] = self.J
        return d


def measure_eval(spec, x):
    return spec(x)


# ---------------------------------------------------------------- families

def _log_fact(m_max, fn, q):
    vals = np.log(fn(np.arange(1, m_max + 1), q)) if m_max > 0 else np.zeros(0)
    return np.concatenate([[0.0], np.cumsum(vals)])


@dataclass(frozen=True)
class CoherentFamily:
    """State family sum_n zbar^(p_n) a_n |n) and the measure it is paired with.

    ``convention`` selects the coefficient rule where two are in circulation:
    'operator' (q-exponential of the ladder operator acting on the extremal
    state) or 'printed' (the tabulated expansion).
    """

    label: str
    q: float
    k0: Fraction | None = None
    J: int | None = None
    convention: str = "operator"
    measure_variant: str = "general"

    def __post_init__(self):
        if self.label not in FAMILIES:
            raise ConfigError(f"unknown family {self.label!r}; choose from {FAMILIES}")
        object.__setattr__(self, "q", check_q(self.q))
        if self.convention not in ("operator", "printed"):
            raise ConfigError(f"convention must be 'operator' or 'printed', got {self.convention!r}")
        if self.label == "Perelomov11":
            try:
                k0 = half_integer(self.k0, "k0")
            except QParameterError as e:
                raise ConfigError(str(e)) from None
            if k0 <= 0:
                raise ConfigError("k0 must be positive")
            object.__setattr__(self, "k0", k0)
        if self.label in ("Perelomov2", "FiniteGlauber2"):
            if self.J is None or int(self.J) != self.J or self.J < 1:
                raise ConfigError(f"{self.label} needs an integer J >= 1")
            object.__setattr__(self, "J", int(self.J))
        if self.label == "GlauberEE" and self.q > 1:
            raise ConfigError("GlauberEE is paired with the base-q^2 rule and needs q < 1")

    @property
    def finite(self):
        return self.label in ("Perelomov2", "FiniteGlauber2")

    def default_n_max(self):
        return self.J if self.finite else 10

    def powers(self, n_max):
        n = np.arange(n_max + 1)
        if self.finite and self.convention == "operator":
            return self.J - n
        return n

    def log_amplitudes(self, n_max):
        """log a_n for n = 0..n_max (-inf where the component vanishes)."""
        q = self.q
        n = np.arange(n_max + 1)
        if self.finite:
            if n_max > self.J:
                raise QDomainError(f"{self.label} lives on n = 0..{self.J}")
            lb = _log_fact(self.J, _bracket, q)
            binom = lb[self.J] - lb[n] - lb[self.J - n]
            if self.label == "FiniteGlauber2" and self.convention == "operator":
                # e_q^{zbar (a_q)_-}|J): sqrt([J]!/[n]!) / [J-n]! on |n)
                return 0.5 * (lb[self.J] - lb[n]) - lb[self.J - n]
            return 0.5 * binom
        if self.label == "Perelomov11":
            m = int(2 * self.k0) - 1
            lb = _log_fact(n_max + m, _bracket, q)
            return 0.5 * (lb[n + m] - lb[n] - lb[m])
        fn = _bracket if self.label == "GlauberE" else _brace
        lf = _log_fact(n_max, fn, q)
        return -0.5 * lf if self.convention == "operator" else -lf

    def amplitudes(self, n_max):
        return np.exp(self.log_amplitudes(n_max))

    def radius_sq(self):
        """Largest |z|^2 for which the state has finite norm."""
        q = self.q
        if self.finite or self.label == "GlauberE":
            return math.inf
        if self.label == "Perelomov11":
            return canonical_q(q) ** (int(2 * self.k0) - 1)
        # GlauberEE, q < 1: a_n^2 ratio tends to (1 - q^2) or its square
        r = 1.0 - q * q
        return 1.0 / r if self.convention == "operator" else 1.0 / (r * r)

    def measure(self):
        q = self.q
        if self.label == "Perelomov11":
            if self.k0 == Fraction(1, 2):
                raise ConfigError("k0 = 1/2 has no G measure; its resolution of unity is the GlauberE one")
            return MeasureSpec("G", q, k0=self.k0, variant=self.measure_variant)
        if self.label == "GlauberE":
            return MeasureSpec("g", q)
        if self.label == "GlauberEE":
            return MeasureSpec("h", q)
        return MeasureSpec("H", q, J=self.J)

    def params(self):
        d = {"family": self.label, "q": self.q, "convention": self.convention}
        if self.k0 is not None:
            d["k0"] = str(self.k0)
            if self.k0 == 1:
                d["measure_variant"] = self.measure_variant
        if self.J is not None:
            d["J"] = self.J
        return d


def perelomov11(k0, q, measure_variant="general"):
    """e_q^{zbar Q_+}|0): a_n = sqrt([n+2k0-1]!/([n]![2k0-1]!))."""
    return CoherentFamily("Perelomov11", q, k0=k0, measure_variant=measure_variant)


def glauber_e(q, convention="operator"):
    """e_q^{zbar (a_q)_+}|0): a_n = 1/sqrt([n]!) (printed variant 1/[n]!)."""
    return CoherentFamily("GlauberE", q, convention=convention)


def glauber_EE(q, convention="operator"):
    """E_q^{zbar (b_q)_+}|0): a_n = 1/sqrt({n}!) (printed variant 1/{n}!)."""
    return CoherentFamily("GlauberEE", q, convention=convention)


def perelomov2(J, q, convention="printed"):
    """su_q(2) state sum_n zbar^n sqrt([J]!/([n]![J-n]!)) |n).

    The 'operator' convention e_q^{zbar Q_-}|J) gives the same amplitudes
    with n -> J - n in the power of zbar.
    """
    return CoherentFamily("Perelomov2", q, J=J, convention=convention)


def finite_glauber2(J, q, convention="printed"):
    """Finite Glauber state; 'printed' coincides with :func:`perelomov2`.

    The 'operator' convention e_q^{zbar (a_q)_-}|J) has amplitudes
    sqrt([J]!/[n]!)/[J-n]! on zbar^(J-n) and is not the same family.
    """
    return CoherentFamily("FiniteGlauber2", q, J=J, convention=convention)


# ------------------------------------------------------------------ states

def coherent_vector(family, z, n_max=None):
    """Unit-basis components zbar^(p_n) a_n, n = 0..n_max."""
    n_max = family.default_n_max() if n_max is None else n_max
    if abs(z) ** 2 >= family.radius_sq():
        raise QDomainError(f"|z|^2 = {abs(z)**2:.6g} is outside the domain |z|^2 < {family.radius_sq():.6g}")
    zb = np.conj(complex(z))
    p = family.powers(n_max)
    a = family.amplitudes(n_max)
    with np.errstate(under="ignore"):
        return np.array([a_n * zb**int(k) if a_n else 0.0 for a_n, k in zip(a, p)], dtype=complex)


def _unit_ladder(n_max, q, fn):
    lo, hi = _pair(n_max, q, fn, "ladder")
    norms = factorial_norms(n_max)
    return to_unit_basis(lo, norms).matrix, to_unit_basis(hi, norms).matrix


def coherent_vector_operator(family, z, n_max=None, realization="D-B"):
    """The same state from its operator definition (q-exponential of a matrix).

    The generator is strictly triangular on the truncated space, so the
    series terminates after n_max + 1 terms. ``realization`` picks the
    su_q(1,1) realization whose unit-basis Q_+ drives Perelomov11.
    """
    from .algebra import RealizationSpec, build

    q = family.q
    n_max = family.default_n_max() if n_max is None else n_max
    zb = np.conj(complex(z))
    fn = _bracket
    if family.label == "Perelomov11":
        t = build(RealizationSpec.from_name(realization, q, k0=family.k0), max(n_max, 2)).to_unit()
        A, start = t.Qplus.matrix, 0
    elif family.label == "GlauberE":
        A, start = _unit_ladder(max(n_max, 2), q, _bracket)[1], 0
    elif family.label == "GlauberEE":
        A, start, fn = _unit_ladder(max(n_max, 2), q, _brace)[1], 0, _brace
    elif family.label == "Perelomov2":
        t = build(RealizationSpec.from_name("su2-HP", q, J=family.J)).to_unit()
        A, start = t.Qminus.matrix, family.J
    else:
        A, start = _unit_ladder(max(family.J, 1), q, _bracket)[0], family.J
        A = A[: family.J + 1, : family.J + 1]
    dim = A.shape[0]
    v = np.zeros(dim, dtype=complex)
    v[start] = 1.0
    out = v.copy()
    term = v
    for k in range(1, dim + 1):
        term = zb * (A @ term) / fn(k, q)
        out = out + term
    return out[: n_max + 1]


def overlap(family, z, w, n_max=None):
    """sum_n c_n(zbar) conj(c_n(wbar)), truncated at n_max."""
    n_max = family.default_n_max() if n_max is None else n_max
    if abs(np.conj(z) * w) >= family.radius_sq():
        raise QDomainError("overlap series diverges: |zbar w| is outside the domain")
    cz = coherent_vector(family, 0, n_max) if z == 0 else _components(family, z, n_max)
    cw = coherent_vector(family, 0, n_max) if w == 0 else _components(family, w, n_max)
    return complex(np.sum(cz * np.conj(cw)))


def _components(family, z, n_max):
    zb = np.conj(complex(z))
    p = family.powers(n_max)
    a = family.amplitudes(n_max)
    return np.array([a_n * zb**int(k) for a_n, k in zip(a, p)], dtype=complex)


# ------------------------------------------------------ resolution of unity

@dataclass(frozen=True)
class UnityReport:
    params: dict
    measure: dict
    moments: tuple
    tol: float
    n_checked: int
    errors: dict = field(default_factory=dict)

    @property
    def deviations(self):
        return tuple(abs(m - 1) if m is not None else math.inf for m in self.moments)

    @property
    def max_deviation(self):
        d = self.deviations[: self.n_checked + 1]
        return max(d) if d else 0.0

    @property
    def passed(self):
        return not self.errors and self.max_deviation < self.tol

    def to_dict(self):
        return {
            "params": self.params,
            "measure": self.measure,
            "moments": list(self.moments),
            "deviations": list(self.deviations),
            "max_deviation": self.max_deviation,
            "n_checked": self.n_checked,
            "tol": self.tol,
            "errors": {str(k): v for k, v in self.errors.items()},
            "pass": self.passed,
        }


def _moment(family, meas, rule, n, p, log_a):
    radial = jackson_integral(lambda x: x ** int(p) * meas(x), rule)
    return math.pi * math.exp(2 * log_a) * radial


def resolve_unity(family, n_max=None, tol=1e-6, margin=0, rule_kw=None):
    """Diagonal moments M_n and the pass/fail verdict for n <= n_max - margin."""
    n_max = family.default_n_max() if n_max is None else n_max
    meas = family.measure()
    rule = meas.rule(**(rule_kw or {}))
    p = family.powers(n_max)
    la = family.log_amplitudes(n_max)
    moments, errors = [], {}
    for n in range(n_max + 1):
        try:
            moments.append(_moment(family, meas, rule, n, p[n], la[n]))
        except QDeformError as e:  # integration trouble is a report entry
            moments.append(None)
            errors[n] = f"{type(e).__name__}: {e}"
    return UnityReport(family.params(), meas.to_dict(), tuple(moments), tol, n_max - margin, errors)


def gram_accumulation(family, n_max=None, n_angles=None):
    """sum over radial nodes and equispaced angles of W |z><z| (unit basis).

    The angular rule with n_angles > 2 max(p_n) equally spaced points is
    exact for the trigonometric polynomials involved, so this is an
    independent check of the diagonal-moment reduction.
    """
    n_max = family.default_n_max() if n_max is None else n_max
    meas = family.measure()
    rule = meas.rule()
    p = family.powers(n_max)
    a = family.amplitudes(n_max)
    n_angles = n_angles or 2 * int(p.max()) + 3
    inner = outer = 0
    for n in range(n_max + 1):
        res = jackson_integral(lambda x: x ** int(p[n]) * meas(x), rule, full_output=True)
        inner, outer = max(inner, res.inner_nodes), max(outer, res.outer_nodes)
    j = np.arange(-outer, inner)
    x = rule.nodes(j)
    w = rule.weight_factor * x * meas(x)
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    gram = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for xj, wj in zip(x, w):
        if wj == 0:
            continue
        z = math.sqrt(xj) * np.exp(1j * theta)
        c = a[:, None] * np.conj(z)[None, :] ** p[:, None]  # (n, angle)
        gram += wj * 0.5 * (2 * np.pi / n_angles) * (c @ np.conj(c).T)
    return gram


# -------------------------------------------------------------- adjudication

@dataclass(frozen=True)
class Adjudication:
    question: str
    reports: dict
    verdict: str

    def to_dict(self):
        return {
            "question": self.question,
            "verdict": self.verdict,
            "candidates": {k: v.to_dict() for k, v in self.reports.items()},
        }

    def summary_line(self):
        parts = [f"{k}: max|M_n-1|={v.max_deviation:.3g}" for k, v in self.reports.items()]
        return f"{self.question}: verdict={self.verdict} ({'; '.join(parts)})"


def _verdict(reports):
    ok = [k for k, r in reports.items() if r.passed]
    if not ok:
        return "none"
    return ok[0] if len(ok) == 1 else "both"


def adjudicate_glauber(kind, q, n_max=10, tol=1e-6):
    """Which Glauber coefficient rule resolves unity with its measure."""
    make = {"E": glauber_e, "EE": glauber_EE}.get(kind)
    if make is None:
        raise ConfigError(f"kind must be 'E' or 'EE', got {kind!r}")
    reports = {c: resolve_unity(make(q, convention=c), n_max, tol) for c in ("operator", "printed")}
    return Adjudication(f"Glauber{kind} coefficient convention at q={q}", reports, _verdict(reports))


def adjudicate_k0_one(q, n_max=10, tol=1e-6):
    """Which k0 = 1 entry of the G measure resolves unity."""
    reports = {v: resolve_unity(perelomov11(1, q, measure_variant=v), n_max, tol) for v in ("general", "printed")}
    return Adjudication(f"G measure at k0=1, q={q}", reports, _verdict(reports))

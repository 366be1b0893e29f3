"""su_q(1,1) and su_q(2) generator triples for every oscillator realization.

Each su_q(1,1) realization is built by composing ladder operators with
diagonal functions of N, following its operator form (not its ket table):

    name      Q_-                                   Q_+
    D-B       K_- sqrt([N]/N)                       sqrt([N]/N) [N+2k0-1]/(N+2k0-1) K_+
    HP-B      (a_q)_- sqrt([N+2k0-1])               sqrt([N+2k0-1]) (a_q)_+
    D-M       (b_q)_-                               q^-(N-1) [N+2k0-1] (b_q)_+
    HP-M      (b_q)_- sqrt(q^-(N-1) [N+2k0-1])      sqrt(q^-(N-1) [N+2k0-1]) (b_q)_+
    anyon-HP  (A_q)_- sqrt(A_+A_- + 2[k0-1/2])      sqrt(A_+A_- + 2[k0-1/2]) (A_q)_+
    FB-sym    K_- [N]/N                             [N+2k0-1]/(N+2k0-1) K_+
    FB-asym   K_- {N}/N                             q^-(N-1) [N+2k0-1]/(N+2k0-1) K_+

with K_-|n> = n|n-1>, K_+|n> = (n+2k0)|n+1>, Q_0 = N + k0. Every
realization carries its own norm table; in unit-normalized kets all of
them reduce to Q_-|n) = sqrt([n][n+2k0-1]) |n-1).

su_q(2) (spin J/2, dimension J+1) has D and HP types with
K_+|n> = (J-n)|n+1> and Q_3 = N - J/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exceptions import ConfigError, QDomainError, QParameterError
from .fock import (
    RAW,
    UNIT,
    FockOperator,
    NormTable,
    adjoint_wrt,
    apply_diag,
    commutator,
    raw_ladder,
    residual,
    to_unit_basis,
)
from .laurent import LaurentPoly, QFraction, as_exact
from .oscillators import _anyon_matrices, _pair
from .qcore import _brace, _bracket, check_q, half_integer, q_brace_poly, q_bracket_poly, q_factorial_poly, q_power_poly

__all__ = [
    "SU11_REALIZATIONS",
    "SU2_REALIZATIONS",
    "SYMMETRIC_REALIZATIONS",
    "RealizationSpec",
    "GeneratorTriple",
    "AlgebraReport",
    "LimitScan",
    "su11_classical",
    "su2_classical",
    "su11_deformed",
    "su2_deformed",
    "build",
    "verify_algebra",
    "fock_bargmann_apply",
    "fock_bargmann_apply_exact",
    "raw_action_exact",
    "classical_limit_scan",
    "useful_identity_exact",
    "casimir_identity_exact",
    "su11_commutator_exact",
    "su2_commutator_exact",
    "norm_exact",
]

SU11_REALIZATIONS = ("D-B", "HP-B", "D-M", "HP-M", "anyon-HP", "FB-sym", "FB-asym")
SU2_REALIZATIONS = ("su2-D", "su2-HP")
# raw matrices built from symmetric brackets only (second order at q -> 1 in any basis)
SYMMETRIC_REALIZATIONS = ("D-B", "HP-B", "HP-M", "anyon-HP", "FB-sym", "su2-D", "su2-HP")

_NAME_FIELDS = {
    "D-B": ("su11", "D", "B"),
    "HP-B": ("su11", "HP", "B"),
    "D-M": ("su11", "D", "M"),
    "HP-M": ("su11", "HP", "M"),
    "anyon-HP": ("su11", "anyonHP", "A"),
    "FB-sym": ("su11", "FBsym", None),
    "FB-asym": ("su11", "FBasym", None),
    "su2-D": ("su2", "D", "B"),
    "su2-HP": ("su2", "HP", "B"),
    "su11-classical": ("su11", "classical", None),
    "su2-classical": ("su2", "classical", None),
}
_FIELDS_NAME = {v: k for k, v in _NAME_FIELDS.items()}


@dataclass(frozen=True)
class RealizationSpec:
    """Realization selector: algebra, type, oscillator flavor and parameters."""

    algebra: str
    rtype: str
    oscillator: str | None = None
    q: float = 0.9
    k0: Fraction | None = None
    J: int | None = None

    def __post_init__(self):
        key = (self.algebra, self.rtype, self.oscillator)
        if key not in _FIELDS_NAME:
            raise ConfigError(f"no realization with algebra={self.algebra}, type={self.rtype}, oscillator={self.oscillator}")
        if self.rtype == "classical":
            if float(self.q) != 1.0:
                raise ConfigError("classical realizations have q = 1")
            object.__setattr__(self, "q", 1.0)
        else:
            object.__setattr__(self, "q", check_q(self.q))
        if self.algebra == "su11":
            if self.k0 is None or self.J is not None:
                raise ConfigError("su11 realizations take k0 and no J")
            k0 = half_integer(self.k0, "k0")
            if k0 <= 0:
                raise ConfigError("k0 must be positive")
            if self.rtype == "anyonHP" and k0 < Fraction(1, 2):
                raise ConfigError("anyon realization needs k0 >= 1/2")
            object.__setattr__(self, "k0", k0)
        else:
            if self.J is None or self.k0 is not None:
                raise ConfigError("su2 realizations take J and no k0")
            if isinstance(self.J, bool) or int(self.J) != self.J or self.J < 1:
                raise ConfigError(f"J must be a positive integer, got {self.J!r}")
            object.__setattr__(self, "J", int(self.J))

    @property
    def name(self):
        return _FIELDS_NAME[(self.algebra, self.rtype, self.oscillator)]

    @classmethod
    def from_name(cls, name, q, k0=None, J=None):
        try:
            algebra, rtype, osc = _NAME_FIELDS[name]
        except KeyError:
            raise ConfigError(f"unknown realization {name!r}; choose from {sorted(_NAME_FIELDS)}") from None
        return cls(algebra, rtype, osc, q, k0, J)

    def params(self):
        d = {"realization": self.name, "q": self.q}
        if self.k0 is not None:
            d["k0"] = str(self.k0)
        if self.J is not None:
            d["J"] = self.J
        return d


@dataclass(frozen=True)
class GeneratorTriple:
    Q0: FockOperator
    Qplus: FockOperator
    Qminus: FockOperator
    norms: NormTable
    spec: RealizationSpec
    basis: str = RAW

    @property
    def n_max(self):
        return self.Q0.n_max

    def to_unit(self):
        if self.basis == UNIT:
            return self
        f = lambda op: to_unit_basis(op, self.norms)  # noqa: E731
        return GeneratorTriple(f(self.Q0), f(self.Qplus), f(self.Qminus), NormTable.ones(self.n_max + 1), self.spec, UNIT)

    def matrices(self):
        return tuple(np.asarray(op.matrix) for op in (self.Q0, self.Qplus, self.Qminus))


# ------------------------------------------------------------ construction

def _diag(f, n_max, label=""):
    return apply_diag(f, n_max, at_zero=0.0, label=label)


def _log_fact_table(m_max, fn, q):
    """log of fn-factorials 0..m_max (fn = bracket or brace, q = 1 allowed)."""
    vals = np.log(fn(np.arange(1, m_max + 1), q)) if m_max > 0 else np.zeros(0)
    return np.concatenate([[0.0], np.cumsum(vals)])


def _su11_norms(name, n_max, k0, q):
    n = np.arange(n_max + 1)
    m = int(2 * k0) - 1  # 2k0 - 1 is a nonnegative integer
    lf = np.array([math.lgamma(k + 1) for k in n])
    if name in ("HP-B", "HP-M", "anyon-HP"):
        return NormTable(lf)
    if name == "su11-classical":
        return NormTable(lf + math.lgamma(2 * float(k0)) - np.array([math.lgamma(k + 2 * float(k0)) for k in n]))
    lb = _log_fact_table(n_max + m, _bracket, q)
    if name in ("D-B", "D-M"):
        out = lf + lb[m] - lb[n + m]
        if name == "D-M":
            out = out + n * (n - 1) / 2 * math.log(q)
        return NormTable(out)
    if name == "FB-sym":
        return NormTable(lb[n] + lb[m] - lb[n + m])
    if name == "FB-asym":
        lc = _log_fact_table(n_max + m, _brace, q)
        return NormTable(n * (n + m - 1) * math.log(q) + lc[n] + lc[m] - lc[n + m])
    raise ConfigError(f"no su11 norm table for {name!r}")


def _su11_matrices(name, n_max, k0, q):
    """Raw (Q0, Q+, Q-) for a named realization; q = 1 gives its classical form."""
    k = float(k0)
    m = 2 * k - 1
    br = lambda x: _bracket(x, q)  # noqa: E731
    am, ap, _ = raw_ladder(n_max)
    Km = am
    Kp = apply_diag(lambda n: n + m, n_max) @ ap
    Q0 = apply_diag(lambda n: n + k, n_max, label="N+k0")
    if name == "su11-classical":
        return Q0, Kp, Km
    if name == "D-B":
        r = lambda n: np.sqrt(br(n) / n)  # noqa: E731
        Qm = Km @ _diag(r, n_max, "sqrt([N]/N)")
        Qp = _diag(lambda n: r(n) * br(n + m) / (n + m), n_max, "D-B raising factor") @ Kp
    elif name in ("HP-B", "HP-M"):
        if name == "HP-B":
            lo, hi = _pair(n_max, q, _bracket, "sqrt([N]/N)")
            g = lambda n: np.sqrt(br(n + m))  # noqa: E731
        else:
            lo, hi = _pair(n_max, q, _brace, "sqrt({N}/N)")
            g = lambda n: np.sqrt(q ** -(n - 1.0) * br(n + m))  # noqa: E731
        G = _diag(g, n_max, "HP factor")
        Qm, Qp = lo @ G, G @ hi
    elif name == "D-M":
        lo, hi = _pair(n_max, q, _brace, "sqrt({N}/N)")
        Qm = lo
        Qp = _diag(lambda n: q ** -(n - 1.0) * br(n + m), n_max, "q^-(N-1)[N+2k0-1]") @ hi
    elif name == "anyon-HP":
        lo, hi = (FockOperator(x.matrix, RAW) for x in _anyon_matrices(n_max, q, k0))
        X = hi @ lo + 2 * _bracket(k - 0.5, q)
        d = np.diag(X.matrix).real
        if np.any(d < -1e-12 * np.max(np.abs(d))):
            raise QDomainError(f"anyon radicand negative at n={int(np.flatnonzero(d < 0)[0])}")
        S = FockOperator(np.diag(np.sqrt(np.clip(d, 0, None))), RAW)
        Qm, Qp = lo @ S, S @ hi
    elif name == "FB-sym":
        Qm = Km @ _diag(lambda n: br(n) / n, n_max, "[N]/N")
        Qp = _diag(lambda n: br(n + m) / (n + m), n_max, "[N+2k0-1]/(N+2k0-1)") @ Kp
    elif name == "FB-asym":
        Qm = Km @ _diag(lambda n: _brace(n, q) / n, n_max, "{N}/N")
        Qp = _diag(lambda n: q ** -(n - 1.0) * br(n + m) / (n + m), n_max, "FB-asym raising factor") @ Kp
    else:
        raise ConfigError(f"unknown su11 realization {name!r}")
    return Q0, Qp, Qm


def _su2_norms(name, J, q):
    n = np.arange(J + 1)
    lf = np.array([math.lgamma(k + 1) for k in n])
    if name == "su2-HP":
        return NormTable(lf)
    if name == "su2-classical":
        return NormTable(lf + lf[::-1] - lf[J])
    lb = _log_fact_table(J, _bracket, q)
    return NormTable(lf + lb[J - n] - lb[J])


def _su2_matrices(name, J, q, q3_sign=1):
    br = lambda x: _bracket(x, q)  # noqa: E731
    am, ap, _ = raw_ladder(J)
    Km = am
    Kp = apply_diag(lambda n: J + 1 - n, J) @ ap
    Q3 = apply_diag(lambda n: q3_sign * (n - J / 2), J, label="Q3")
    if name == "su2-classical":
        return Q3, Kp, Km
    if name == "su2-D":
        r = lambda n: np.sqrt(br(n) / n)  # noqa: E731
        Qm = Km @ _diag(r, J, "sqrt([N]/N)")
        Qp = _diag(lambda n: r(n) * br(J + 1 - n) / (J + 1 - n), J, "su2 D raising factor") @ Kp
    elif name == "su2-HP":
        lo, hi = _pair(J, q, _bracket, "sqrt([N]/N)")
        G = _diag(lambda n: np.sqrt(br(J + 1 - n)), J, "sqrt([J+1-N])")
        Qm, Qp = lo @ G, G @ hi
    else:
        raise ConfigError(f"unknown su2 realization {name!r}")
    return Q3, Qp, Qm


def build(spec, n_max=None):
    """Generator triple with its norm table for any spec (raw basis)."""
    if spec.algebra == "su11":
        if n_max is None or n_max < 2:
            raise QParameterError("su11 realizations need n_max >= 2")
        Q0, Qp, Qm = _su11_matrices(spec.name, n_max, spec.k0, spec.q)
        norms = _su11_norms(spec.name, n_max, spec.k0, spec.q)
    else:
        if n_max is not None and n_max != spec.J:
            raise QParameterError(f"su2 with J={spec.J} lives on n = 0..{spec.J}")
        Q0, Qp, Qm = _su2_matrices(spec.name, spec.J, spec.q)
        norms = _su2_norms(spec.name, spec.J, spec.q)
    return GeneratorTriple(Q0, Qp, Qm, norms, spec, RAW)


def su11_classical(n_max, k0):
    """Undeformed su(1,1): K_-|n> = n|n-1>, K_+|n> = (n+2k0)|n+1>."""
    return build(RealizationSpec("su11", "classical", None, 1.0, k0), n_max)


def su2_classical(J):
    return build(RealizationSpec("su2", "classical", None, 1.0, J=J))


def su11_deformed(spec, n_max):
    if spec.algebra != "su11" or spec.rtype == "classical":
        raise ConfigError(f"{spec.name} is not a deformed su11 realization")
    return build(spec, n_max)


def su2_deformed(spec):
    if spec.algebra != "su2" or spec.rtype == "classical":
        raise ConfigError(f"{spec.name} is not a deformed su2 realization")
    return build(spec)


# ----------------------------------------------------------- verification

@dataclass(frozen=True)
class AlgebraReport:
    params: dict
    residuals: dict
    tol: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(v < self.tol for v in self.residuals.values())

    def failures(self):
        return sorted(k for k, v in self.residuals.items() if not v < self.tol)

    def to_dict(self):
        return {
            "params": self.params,
            "residuals": self.residuals,
            "diagnostics": self.diagnostics,
            "tol": self.tol,
            "pass": self.passed,
        }


def _fn_diag(op, f):
    return FockOperator(np.diag(f(np.diag(op.matrix).real)), op.basis)


def verify_algebra(triple, tol=1e-11, su2_base_power=2):
    """Residuals of the defining relations, conjugation and Casimir.

    su_q(1,1), on the interior block:
        raise       [Q0, Q+] - Q+
        lower       [Q0, Q-] + Q-
        commutator  [Q+, Q-] + [2 Q0]_q
        conjugation Q+ - adjoint(Q-) under the realization's norm table
        casimir     [Q0][Q0 - 1] - Q+Q- - [k0][k0 - 1]
    su_q(2), on the whole (finite) space:
        raise, lower, conjugation as above
        commutator  [Q+, Q-] - [2 Q3]_b with b = q**su2_base_power
        boundary    largest entry of Q+|J> and Q-|0>
    Diagnostics (not pass/fail) record the su2 commutator in both bases and
    the ladder relations under the opposite Q3 sign.
    """
    spec = triple.spec
    q = spec.q
    Q0, Qp, Qm = triple.Q0, triple.Qplus, triple.Qminus
    res = {}
    diag = {}
    drop = 1 if spec.algebra == "su11" else 0
    c0p, c0m = commutator(Q0, Qp), commutator(Q0, Qm)
    res["raise"] = residual(c0p, Qp, Q0 @ Qp, Qp @ Q0, drop=drop)
    res["lower"] = residual(c0m, -Qm, Q0 @ Qm, Qm @ Q0, drop=drop)
    pm, mp = Qp @ Qm, Qm @ Qp
    adj = adjoint_wrt(Qm, triple.norms)
    res["conjugation"] = residual(Qp, adj, drop=0)
    if spec.algebra == "su11":
        two = _fn_diag(Q0, lambda d: _bracket(2 * d, q))
        res["commutator"] = residual(pm - mp, -two, pm, mp, two, drop=1)
        cas = _fn_diag(Q0, lambda d: _bracket(d, q) * _bracket(d - 1, q))
        k = float(spec.k0)
        target = _bracket(k, q) * _bracket(k - 1, q)
        res["casimir"] = residual(cas - pm, target * np.eye(triple.n_max + 1), cas, pm, drop=1)
    else:
        for p in (1, 2):
            two = _fn_diag(Q0, lambda d: _bracket(2 * d, q**p))
            diag[f"commutator_base_q{'' if p == 1 else p}"] = residual(pm - mp, two, pm, mp, two, drop=0)
        two = _fn_diag(Q0, lambda d: _bracket(2 * d, q**su2_base_power))
        res["commutator"] = residual(pm - mp, two, pm, mp, two, drop=0)
        J = spec.J
        res["boundary"] = float(max(np.abs(Qp.matrix[:, J]).max(), np.abs(Qm.matrix[:, 0]).max()))
        flipped = -1 * Q0
        diag["raise_opposite_Q3_sign"] = residual(commutator(flipped, Qp), Qp, drop=0)
        diag["lower_opposite_Q3_sign"] = residual(commutator(flipped, Qm), -Qm, drop=0)
    return AlgebraReport(spec.params() | {"n_max": triple.n_max, "basis": triple.basis}, res, tol, diag)


# ------------------------------------------------------ Fock-Bargmann forms

def _fb_generic(name, k0, coeffs, which, dilate, scale, q_power, div_const):
    """Difference-operator action on coefficient lists.

    ``dilate(c, a)`` realizes f(xi) -> f(q^a xi); ``q_power(a)`` is q^a;
    ``div_const(c, d)`` divides a coefficient by the constant d.
    """
    n = len(coeffs)
    zero = coeffs[0] * 0

    def shift_down(c):
        return list(c[1:]) + [zero]

    def shift_up(c):
        if c[-1] != 0:
            raise QDomainError("raising would exceed the truncation degree")
        return [zero] + list(c[:-1])

    def sub(a, b):
        return [x - y for x, y in zip(a, b)]

    k = Fraction(k0)
    if which == "zero":
        return [c * (j + k) if not isinstance(c, float) else c * (j + float(k)) for j, c in enumerate(coeffs)]
    if name == "su11-classical":
        if which == "minus":
            return shift_down([c * j for j, c in enumerate(coeffs)])
        return shift_up([c * (j + 2 * k) for j, c in enumerate(coeffs)])
    if name == "FB-sym":
        d0 = q_power(1) - q_power(-1)
        if which == "minus":
            return [div_const(c, d0) for c in shift_down(sub(dilate(coeffs, 1), dilate(coeffs, -1)))]
        num = sub(scale(dilate(coeffs, 1), q_power(2 * k)), scale(dilate(coeffs, -1), q_power(-2 * k)))
        return shift_up([div_const(c, d0) for c in num])
    if name == "FB-asym":
        d0 = q_power(2) - 1
        if which == "minus":
            return [div_const(c, d0) for c in shift_down(sub(dilate(coeffs, 2), coeffs))]
        num = sub(scale(coeffs, q_power(4 * k)), dilate(coeffs, -2))
        return shift_up([div_const(c, d0) for c in scale(num, q_power(1 - 2 * k))])
    raise ConfigError(f"no Fock-Bargmann form for {name!r}")


def fock_bargmann_apply(spec, coeffs, which="minus"):
    """Apply a Fock-Bargmann generator to polynomial coefficients (numeric).

    FB-sym:   Q_- = symmetric q-derivative,  Q_+ = xi [xi d/dxi + 2k0]_q,
    FB-asym:  Q_- = asymmetric q-derivative, Q_+ = xi q^-(2 xi d/dxi + 2k0 - 1) {xi d/dxi + 2k0}_q,
    classical: K_- = d/dxi, K_+ = xi^2 d/dxi + 2k0 xi;  Q_0 = xi d/dxi + k0.
    Functions of the Euler operator act through dilations q^(xi d/dxi) f(xi) = f(q xi).
    Coefficients are lowest degree first; raising needs a free top slot.
    """
    if which not in ("minus", "plus", "zero"):
        raise QParameterError(f"which must be 'minus', 'plus' or 'zero', got {which!r}")
    q = spec.q
    c = [complex(x) for x in coeffs]
    dilate = lambda cs, a: [x * q ** (a * j) for j, x in enumerate(cs)]  # noqa: E731
    scale = lambda cs, s: [x * s for x in cs]  # noqa: E731
    out = _fb_generic(spec.name, spec.k0, c, which, dilate, scale, lambda a: q ** float(a), lambda x, d: x / d)
    return np.array(out, dtype=complex)


def fock_bargmann_apply_exact(name, k0, coeffs, which="minus"):
    """Exact twin of :func:`fock_bargmann_apply` on LaurentPoly coefficients."""
    k0 = half_integer(k0, "k0")
    c = [as_exact(x) if isinstance(x, (LaurentPoly, QFraction)) else LaurentPoly.constant(x) for x in coeffs]

    def dilate(cs, a):
        return [x * q_power_poly(Fraction(a) * j) for j, x in enumerate(cs)]

    def scale(cs, s):
        return [x * s for x in cs]

    def div_const(x, d):
        return as_exact(QFraction._coerce(x) / d)

    out = _fb_generic(name, k0, c, which, dilate, scale, q_power_poly, div_const)
    return [as_exact(QFraction._coerce(x)) for x in out]


def raw_action_exact(name, k0, n, which):
    """Exact raw-basis coefficient of Q_which on |n> (band entry).

    Returned for realizations whose raw entries need no square roots:
    minus -> coefficient of |n-1>, plus -> coefficient of |n+1>.
    """
    k0 = half_integer(k0, "k0")
    if name == "su11-classical":
        return LaurentPoly.constant(n) if which == "minus" else LaurentPoly.constant(n + 2 * k0)
    if name == "FB-sym":
        return q_bracket_poly(n) if which == "minus" else q_bracket_poly(n + 2 * k0)
    if name == "FB-asym":
        if which == "minus":
            return q_brace_poly(n)
        return as_exact(q_power_poly(-n) * q_bracket_poly(n + 2 * k0))
    raise ConfigError(f"{name!r} has square-root entries; no exact raw action")


# ---------------------------------------------------------- classical limit

@dataclass(frozen=True)
class LimitScan:
    name: str
    basis: str
    q_grid: tuple
    distances: tuple
    order: float

    def to_dict(self):
        return {
            "realization": self.name,
            "basis": self.basis,
            "q_grid": list(self.q_grid),
            "distances": list(self.distances),
            "order": self.order,
        }


def _triple_at(name, n_max, k0, J, q):
    algebra = _NAME_FIELDS[name][0]
    if algebra == "su11":
        mats = _su11_matrices(name, n_max, k0, q)
        norms = _su11_norms(name, n_max, k0, q)
    else:
        mats = _su2_matrices(name, J, q)
        norms = _su2_norms(name, J, q)
    return mats, norms


def classical_limit_scan(name, q_grid, k0=None, J=None, n_max=20, basis=UNIT):
    """Max-norm distance to the q = 1 matrices and the fitted order in |q - 1|.

    ``basis='unit'`` compares unit-normalized generators with the classical
    ones; ``basis='raw'`` compares each realization with its own q = 1 form.
    """
    if name not in _NAME_FIELDS:
        raise ConfigError(f"unknown realization {name!r}")
    grid = tuple(float(q) for q in q_grid)
    if len(set(grid)) < 2:
        raise ConfigError("the classical-limit scan needs at least two distinct q values")
    if any(q <= 0 for q in grid):
        raise ConfigError("q values must be positive")
    if basis not in (RAW, UNIT):
        raise ConfigError(f"basis must be {RAW!r} or {UNIT!r}")
    k0 = half_integer(k0, "k0") if k0 is not None else None
    ref_name = name if basis == RAW else ("su11-classical" if _NAME_FIELDS[name][0] == "su11" else "su2-classical")
    ref_mats, ref_norms = _triple_at(ref_name, n_max, k0, J, 1.0)
    if basis == UNIT:
        ref_mats = [to_unit_basis(m, ref_norms) for m in ref_mats]
    dists = []
    for q in grid:
        mats, norms = _triple_at(name, n_max, k0, J, q)
        if basis == UNIT:
            mats = [to_unit_basis(m, norms) for m in mats]
        d = max(float(np.abs(a.matrix - b.matrix).max()) for a, b in zip(mats, ref_mats))
        dists.append(d)
    x = np.log(np.abs(np.array(grid) - 1.0))
    y = np.array(dists)
    ok = (y > 0) & np.isfinite(x)
    order = float(np.polyfit(x[ok], np.log(y[ok]), 1)[0]) if ok.sum() >= 2 else math.nan
    return LimitScan(name, basis, grid, tuple(dists), order)


# ------------------------------------------------------- exact identities

def useful_identity_exact(k0, n):
    """(-[2K0], g(K0) - g(K0+1)) at K0 = k0 + n, g(K) = [K-k0][K+k0-1]."""
    k0 = half_integer(k0, "k0")
    K = k0 + n
    g = lambda x: q_bracket_poly(x - k0) * q_bracket_poly(x + k0 - 1)  # noqa: E731
    return -q_bracket_poly(2 * K), g(K) - g(K + 1)


def casimir_identity_exact(k0, n):
    """([n+k0][n+k0-1] - [n][n+2k0-1], [k0][k0-1])."""
    k0 = half_integer(k0, "k0")
    lhs = q_bracket_poly(n + k0) * q_bracket_poly(n + k0 - 1) - q_bracket_poly(n) * q_bracket_poly(n + 2 * k0 - 1)
    return lhs, q_bracket_poly(k0) * q_bracket_poly(k0 - 1)


def su11_commutator_exact(k0, n):
    """Unit-basis diagonal of [Q+, Q-] on |n) and of -[2Q0]_q."""
    k0 = half_integer(k0, "k0")
    lhs = q_bracket_poly(n) * q_bracket_poly(n + 2 * k0 - 1) - q_bracket_poly(n + 1) * q_bracket_poly(n + 2 * k0)
    return lhs, -q_bracket_poly(2 * (n + k0))


def su2_commutator_exact(J, n, base_power=2, q3_sign=1):
    """Unit-basis diagonal of [Q+, Q-] on |n) and of [2Q3]_b, b = q**base_power."""
    lhs = q_bracket_poly(n) * q_bracket_poly(J + 1 - n) - q_bracket_poly(n + 1) * q_bracket_poly(J - n)
    q3 = q3_sign * (Fraction(n) - Fraction(J, 2))
    return lhs, q_bracket_poly(2 * q3, base_power=base_power)


def norm_exact(name, n, k0=None, J=None):
    """<n|n> for a named realization as a LaurentPoly or QFraction in q."""
    fact = LaurentPoly.constant(math.factorial(n))
    if name in ("HP-B", "HP-M", "anyon-HP", "su2-HP"):
        return fact
    if name == "su2-D":
        return as_exact(fact * q_factorial_poly(J - n) / q_factorial_poly(J))
    k0 = half_integer(k0, "k0")
    m = int(2 * k0) - 1
    ratio = q_factorial_poly(m) / q_factorial_poly(n + m)
    if name == "D-B":
        return as_exact(fact * ratio)
    if name == "D-M":
        return as_exact(fact * q_power_poly(Fraction(n * (n - 1), 2)) * ratio)
    if name == "FB-sym":
        return as_exact(q_factorial_poly(n) * ratio)
    if name == "FB-asym":
        braces = q_factorial_poly(n, "brace") * q_factorial_poly(m, "brace") / q_factorial_poly(n + m, "brace")
        return as_exact(q_power_poly(n * (n + m - 1)) * braces)
    raise ConfigError(f"no exact norm table for {name!r}")

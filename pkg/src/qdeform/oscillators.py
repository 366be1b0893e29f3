"""Deformed oscillators built from the raw ladder.

Flavors::

    B   (a_q)_- = a_- sqrt([N]/N)                      a_- a_+ - q a_+ a_- = q^-N
    M   (b_q)_- = a_- sqrt({N}/N)                      b_- b_+ - q^2 b_+ b_- = 1
    A   (A_q)_- = a_- sqrt(([N+k0-1/2] - [k0-1/2])/N)  anyonic, see anyon_pair
    Bq  only the quadratics B_-B_+ and B_+B_- (no branch for the roots)

Operators are returned in the raw basis together with the norm table
<n|n> = n!, under which each pair is adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import QDomainError, QParameterError
from .fock import (
    RAW,
    UNIT,
    FockOperator,
    NormTable,
    adjoint_wrt,
    apply_diag,
    factorial_norms,
    raw_ladder,
    residual,
    to_unit_basis,
)
from .laurent import LaurentPoly
from .qcore import _brace, _bracket, check_q, half_integer, q_brace_poly, q_bracket_poly, q_power_poly

__all__ = [
    "OscillatorPair",
    "biedenharn",
    "macfarlane",
    "anyon_pair",
    "anyon_B_quadratics",
    "relation_exact",
]


@dataclass(frozen=True)
class OscillatorPair:
    minus: FockOperator
    plus: FockOperator
    flavor: str
    q: float
    k0: Fraction | None = None
    norms: NormTable | None = None

    @property
    def n_max(self):
        return self.minus.n_max

    def unit(self):
        """The same pair expressed on unit-normalized kets."""
        return OscillatorPair(
            to_unit_basis(self.minus, self.norms),
            to_unit_basis(self.plus, self.norms),
            self.flavor,
            self.q,
            self.k0,
            NormTable.ones(self.n_max + 1),
        )

    def adjoint_residual(self):
        """Max deviation of plus from the adjoint of minus (whole matrix)."""
        adj = adjoint_wrt(self.minus, self.norms)
        return residual(self.plus, adj, drop=0)

    def relation_residual(self, form="corrected"):
        """Interior residual of the flavor's defining relation.

        For flavor A, ``form='printed'`` uses the right-hand side
        q^-(N+k0+1/2); the default uses q^-(N+k0-1/2), which is what the
        bracket identity [m+1] - q[m] = q^-m gives.
        """
        q = self.q
        mp = self.minus @ self.plus
        pm = self.plus @ self.minus
        n = np.arange(self.n_max + 1)
        if self.flavor == "B":
            lhs, rhs = mp - q * pm, np.diag(q ** (-n.astype(float)))
            terms = (mp, q * pm)
        elif self.flavor == "M":
            lhs, rhs = mp - q * q * pm, np.eye(self.n_max + 1)
            terms = (mp, q * q * pm)
        elif self.flavor == "A":
            c = _bracket(float(self.k0) - 0.5, q)
            shift = 0.5 if form == "printed" else -0.5
            if form not in ("printed", "corrected"):
                raise QParameterError(f"form must be 'printed' or 'corrected', got {form!r}")
            lhs = (mp + c) - q * (pm + c)
            rhs = np.diag(q ** -(n + float(self.k0) + shift))
            terms = (mp, q * pm, c * np.eye(self.n_max + 1))
        else:
            raise QParameterError(f"no relation for flavor {self.flavor!r}")
        return residual(lhs, rhs, *terms, rhs)


def _ratio_sqrt(fn, n_max, q, label):
    """diag(sqrt(fn(N) / N)); the n = 0 entry is never used and set to 0."""
    return apply_diag(lambda n: np.sqrt(fn(n, q) / n), n_max, at_zero=0.0, label=label)


def _pair(n_max, q, fn, label):
    am, ap, _ = raw_ladder(n_max)
    f = _ratio_sqrt(fn, n_max, q, label)
    return am @ f, f @ ap


def biedenharn(n_max, q):
    """(a_q)_-|n> = sqrt(n [n]) |n-1>,  (a_q)_+|n> = sqrt([n+1]/(n+1)) |n+1>."""
    q = check_q(q)
    if n_max < 2:
        raise QParameterError("n_max must be at least 2")
    m, p = _pair(n_max, q, _bracket, "sqrt([N]/N)")
    return OscillatorPair(m, p, "B", q, None, factorial_norms(n_max))


def macfarlane(n_max, q):
    """(b_q)_-|n> = sqrt(n {n}) |n-1>,  (b_q)_+|n> = sqrt({n+1}/(n+1)) |n+1>."""
    q = check_q(q)
    if n_max < 2:
        raise QParameterError("n_max must be at least 2")
    m, p = _pair(n_max, q, _brace, "sqrt({N}/N)")
    return OscillatorPair(m, p, "M", q, None, factorial_norms(n_max))


def _check_k0(k0):
    k0 = half_integer(k0, "k0")
    if k0 < Fraction(1, 2):
        raise QParameterError(f"k0 must be at least 1/2, got {k0}")
    return k0


def _anyon_matrices(n_max, q, k0):
    c = _bracket(float(k0) - 0.5, q)
    n = np.arange(n_max + 1)
    rad = _bracket(n + float(k0) - 0.5, q) - c
    neg = np.flatnonzero(rad < -1e-15 * np.maximum(1, np.abs(c)))
    if neg.size:
        raise QDomainError(f"anyon radicand negative at n={int(neg[0])}")
    am, ap, _ = raw_ladder(n_max)
    f = apply_diag(lambda m: np.sqrt(np.clip(rad, 0, None) / m), n_max, at_zero=0.0, label="anyon factor")
    return am @ f, f @ ap


def anyon_pair(n_max, q, k0):
    """(A_q)_- = a_- sqrt(([N+k0-1/2]_q - [k0-1/2]_q)/N) and its adjoint."""
    q = check_q(q)
    k0 = _check_k0(k0)
    if n_max < 2:
        raise QParameterError("n_max must be at least 2")
    m, p = _anyon_matrices(n_max, q, k0)
    return OscillatorPair(m, p, "A", q, k0, factorial_norms(n_max))


def anyon_B_quadratics(n_max, q, k0):
    """(B_+B_-, B_-B_+) as diagonal raw-basis operators.

    B_-B_+ = q^(N+k0-1/2) [N+k0+1/2],  B_+B_- = q^(N+k0-3/2) [N+k0-1/2].
    The vacuum is not annihilated: B_+B_-|0> = {k0-1/2}_q |0>.
    """
    q = check_q(q)
    k0 = _check_k0(k0)
    a = float(k0)
    n = np.arange(n_max + 1)
    pm = np.diag(q ** (n + a - 1.5) * _bracket(n + a - 0.5, q))
    mp = np.diag(q ** (n + a - 0.5) * _bracket(n + a + 0.5, q))
    return FockOperator(pm, RAW, "B+B-"), FockOperator(mp, RAW, "B-B+")


def relation_exact(flavor, n, k0=None, form="corrected"):
    """Exact (lhs, rhs) of a flavor's defining relation on the ket n.

    Flavors 'B', 'M', 'A' (diagonal form of the commutation relation) and
    'Bq' (M-form relation of the anyonic quadratics).
    """
    if flavor == "B":
        return q_bracket_poly(n + 1) - q_power_poly(1) * q_bracket_poly(n), q_power_poly(-n)
    if flavor == "M":
        return q_brace_poly(n + 1) - q_power_poly(2) * q_brace_poly(n), LaurentPoly.constant(1)
    k0 = _check_k0(k0)
    h = Fraction(1, 2)
    if flavor == "A":
        lhs = q_bracket_poly(n + k0 + h) - q_power_poly(1) * q_bracket_poly(n + k0 - h)
        shift = h if form == "printed" else -h
        return lhs, q_power_poly(-(n + k0 + shift))
    if flavor == "Bq":
        mp = q_power_poly(n + k0 - h) * q_bracket_poly(n + k0 + h)
        pm = q_power_poly(n + k0 - 3 * h) * q_bracket_poly(n + k0 - h)
        return mp - q_power_poly(2) * pm, LaurentPoly.constant(1)
    raise QParameterError(f"unknown flavor {flavor!r}")

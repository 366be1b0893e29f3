"""q-derivatives, Jackson integrals and the planar q-measure.

Two difference operators are supported::

    symmetric   D f(z) = (f(q z) - f(z/q)) / (z (q - 1/q))      D z^n = [n]_q z^(n-1)
    asymmetric  D f(z) = (f(q^2 z) - f(z)) / (z (q^2 - 1))       D z^n = {n}_q z^(n-1)

Their inverses are Jackson sums over geometric node sets:

    symmetric   int_0^a f d_q x   = (1/q - q)  sum_{j>=0} x_j f(x_j),  x_j = a q^(2j+1)
    asymmetric  int_0^a f d_q2 x  = (1 - q^2) sum_{j>=0} x_j f(x_j),  x_j = a q^(2j)

On [0, inf) the node set becomes bilateral, anchored at a chosen point c
(j runs over all integers). Which anchor is appropriate depends on the
integrand; see :func:`qdeform.qcore.recessive_anchor`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import QDivergenceError, QDomainError, QParameterError
from .laurent import LaurentPoly, QFraction, as_exact
from .qcore import canonical_q, check_q, q_brace, q_bracket

__all__ = [
    "SYMMETRIC",
    "ASYMMETRIC",
    "JacksonRule",
    "JacksonResult",
    "q_derivative",
    "jackson_integral",
    "jackson_indefinite",
    "planar_moment",
    "q_derivative_exact",
    "jackson_integral_exact",
]

SYMMETRIC = "symmetric"
ASYMMETRIC = "asymmetric"
_KINDS = (SYMMETRIC, ASYMMETRIC)


def _check_kind(kind):
    if kind not in _KINDS:
        raise QParameterError(f"kind must be one of {_KINDS}, got {kind!r}")
    return kind


@dataclass(frozen=True)
class JacksonRule:
    """Node set and truncation policy for a Jackson integral.

    ``upper`` may be ``math.inf``; then ``anchor`` fixes the bilateral
    lattice (nodes anchor*q^(2j+1) symmetric, anchor*q^(2j) asymmetric).
    ``K`` forces a fixed number of inner nodes; otherwise nodes are added
    until five consecutive terms fall below ``tail_tol`` times the partial sum.
    """

    kind: str = SYMMETRIC
    q: float = 0.5
    upper: float = 1.0
    anchor: float = 1.0
    K: int | None = None
    tail_tol: float = 1e-14
    max_nodes: int = 10_000

    def __post_init__(self):
        _check_kind(self.kind)
        q = check_q(self.q)
        if self.kind == ASYMMETRIC and q > 1:
            raise QParameterError("the base-q^2 Jackson rule needs q < 1")
        if not self.upper > 0:
            raise QDomainError(f"upper limit must be positive, got {self.upper}")
        if not (self.anchor > 0 and math.isfinite(self.anchor)):
            raise QDomainError(f"anchor must be positive and finite, got {self.anchor}")
        if self.K is not None and self.K < 1:
            raise QParameterError("K must be a positive integer")

    @property
    def base(self):
        """Node ratio parameter (q canonicalized below 1)."""
        return canonical_q(self.q)

    @property
    def weight_factor(self):
        p = self.base
        return (1 / p - p) if self.kind == SYMMETRIC else (1 - p * p)

    def nodes(self, j):
        """Node positions for integer indices ``j`` (array)."""
        p = self.base
        j = np.asarray(j)
        top = self.upper if math.isfinite(self.upper) else self.anchor
        off = 1 if self.kind == SYMMETRIC else 0
        with np.errstate(over="ignore"):  # overflowing nodes surface as divergence
            return top * p ** (2.0 * j + off)


@dataclass(frozen=True)
class JacksonResult:
    value: float
    inner_nodes: int
    outer_nodes: int
    last_term: float


def q_derivative(f, z, kind=SYMMETRIC, q=0.5):
    """Symmetric or asymmetric q-derivative of ``f`` at ``z``.

    ``f`` may be a callable or a ``numpy.polynomial.Polynomial``; for a
    polynomial the monomial rule is applied, which also covers ``z = 0``.
    """
    _check_kind(kind)
    q = check_q(q)
    if isinstance(f, np.polynomial.Polynomial):
        c = f.convert().coef
        n = np.arange(1, len(c))
        fac = q_bracket(n, q) if kind == SYMMETRIC else q_brace(n, q)
        return np.polynomial.Polynomial(c[1:] * fac)(z)
    z_arr = np.asarray(z)
    if np.any(z_arr == 0):
        raise QDomainError("q-derivative at z = 0 needs a polynomial input")
    if kind == SYMMETRIC:
        return (f(q * z) - f(z / q)) / (z * (q - 1 / q))
    return (f(q * q * z) - f(z)) / (z * (q * q - 1))


def _accumulate(f, rule, indices, start_sum=0.0, outward=False):
    """Sum weight*x*f(x) over nodes in chunks until the tail criterion holds.

    Outward (growing x) sums only count a term as small once the terms
    have started to decrease, so a slowly rising integrand is not cut off.
    """
    lam = rule.weight_factor
    total = start_sum
    count = 0
    small = 0
    last = 0.0
    chunk = 64
    it = iter(indices)
    while True:
        js = []
        for _ in range(chunk):
            try:
                js.append(next(it))
            except StopIteration:
                break
        if not js:
            return total, count, last, True
        x = rule.nodes(np.array(js))
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            fx = np.asarray(f(x))
            terms = lam * x * np.broadcast_to(fx, x.shape)
        for t in terms:
            if not np.isfinite(t):
                raise QDivergenceError(f"non-finite Jackson term after {count} nodes")
            total += t
            count += 1
            prev, last = last, abs(t)
            if rule.K is None:
                if last < rule.tail_tol * abs(total) and (not outward or last <= prev):
                    small += 1
                    if small >= 5:
                        return total, count, last, False
                else:
                    small = 0
            if count >= rule.max_nodes:
                if rule.K is not None:
                    return total, count, last, False
                raise QDivergenceError(
                    f"Jackson sum not converged after {rule.max_nodes} nodes (last term {last:.3g})"
                )


def jackson_integral(f, rule, full_output=False):
    """Jackson integral of a vectorized callable ``f`` under ``rule``."""
    if rule.K is not None:
        inner = range(rule.K)
    else:
        inner = _count()  # endless; stopped by the tail rule
    inner_sum, n_in, last_in, _ = _accumulate(f, rule, inner)
    n_out = 0
    last = last_in
    total = inner_sum
    if not math.isfinite(rule.upper):
        outer = range(-1, -rule.K - 1, -1) if rule.K is not None else _count(-1, -1)
        total, n_out, last, _ = _accumulate(f, rule, outer, start_sum=inner_sum, outward=True)
    value = float(np.real_if_close(total)) if np.isrealobj(total) else complex(total)
    if full_output:
        return JacksonResult(value, n_in, n_out, float(last))
    return value


def _count(start=0, step=1):
    k = start
    while True:
        yield k
        k += step


def jackson_indefinite(f, kind=SYMMETRIC, q=0.5, **rule_kw):
    """Indefinite Jackson integral F(x) = int_0^x f, returned as a callable."""

    def F(x):
        x = np.asarray(x, dtype=float)
        vals = [jackson_integral(f, JacksonRule(kind=kind, q=q, upper=float(v), **rule_kw)) if v > 0 else 0.0
                for v in x.ravel()]
        out = np.array(vals).reshape(x.shape)
        return out[()] if out.ndim == 0 else out

    return F


def planar_moment(n, weight, rule, m=None):
    """int d^2_q z  zbar^n z^m W(|z|^2) with d^2_q z = dtheta d_q x / 2.

    The angular integral is done analytically: it vanishes unless m == n and
    contributes pi otherwise, leaving pi * int x^n W(x) d_q x.
    """
    m = n if m is None else m
    if m != n:
        return 0.0
    return math.pi * jackson_integral(lambda x: x**n * weight(x), rule)


# ------------------------------------------------------------- exact twins

def _dilate(coeffs, power):
    """f(q^power xi) for an exact coefficient list: c_n -> c_n q^(power n)."""
    return [c * LaurentPoly.q_power(Fraction(power) * n) for n, c in enumerate(coeffs)]


def q_derivative_exact(coeffs, kind=SYMMETRIC):
    """q-derivative of an exact polynomial (coefficients lowest degree first).

    Evaluated through the difference quotient itself (dilations and exact
    division), not through the monomial rule.
    """
    _check_kind(kind)
    if kind == SYMMETRIC:
        diff = [a - b for a, b in zip(_dilate(coeffs, 1), _dilate(coeffs, -1))]
        den = LaurentPoly({2: 1, -2: -1})
    else:
        diff = [a - b for a, b in zip(_dilate(coeffs, 2), coeffs)]
        den = LaurentPoly({4: 1}) - 1
    # constant term of the difference vanishes; divide by z by shifting down
    if not as_exact(QFraction._coerce(diff[0]) if diff else 0) == 0:
        raise AssertionError("difference of a polynomial must vanish at z = 0")
    return [as_exact(QFraction._coerce(c) / den) for c in diff[1:]]


def jackson_integral_exact(coeffs, kind=SYMMETRIC, indefinite=True):
    """Exact Jackson integral of a polynomial over [0, x] (or [0, 1]).

    The node sum for x^n is a geometric series summed in closed form:
    symmetric  x^(n+1) (1/q - q) q^(n+1) / (1 - q^(2n+2)),
    asymmetric x^(n+1) (1 - q^2) / (1 - q^(2n+2)).
    With ``indefinite`` the result is the coefficient list of F(x),
    otherwise the number F(1).
    """
    _check_kind(kind)
    out = [LaurentPoly()]
    for n, c in enumerate(coeffs):
        geo_den = 1 - LaurentPoly.q_power(2 * n + 2)
        if kind == SYMMETRIC:
            num = (LaurentPoly.q_power(-1) - LaurentPoly.q_power(1)) * LaurentPoly.q_power(n + 1)
        else:
            num = 1 - LaurentPoly.q_power(2)
        out.append(as_exact(QFraction._coerce(c) * QFraction(num, geo_den)))
    if indefinite:
        return out
    total = QFraction(LaurentPoly())
    for c in out:
        total = total + c
    return as_exact(total)

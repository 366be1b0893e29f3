"""q-number arithmetic in floating point and in exact Laurent form.

Conventions::

    [x]_q = (q**x - q**-x) / (q - 1/q)          symmetric bracket
    {x}_q = (q**(2x) - 1) / (q**2 - 1)          brace, equals [x]_q q**(x-1)

The base of a bracket is simply its ``q`` argument: ``q_bracket(x, q**2)``
is [x]_{q^2}. Floating-point brackets are evaluated as ratios of ``sinh``
and ``expm1`` in ln q so that they stay accurate close to q = 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import QDivergenceError, QDomainError, QParameterError, QPrecisionError
from .laurent import LaurentPoly, QFraction, as_exact

__all__ = [
    "check_q",
    "canonical_q",
    "half_integer",
    "q_bracket",
    "q_brace",
    "q_factorial",
    "q_log_factorial",
    "q_binomial",
    "q_deformed_binom",
    "q_deformed_binom_coeffs",
    "SeriesResult",
    "q_exp_e",
    "q_exp_E",
    "q_exp_E_product",
    "q_exp_e_neg_lattice",
    "recessive_anchor",
    "q_bracket_poly",
    "q_brace_poly",
    "q_power_poly",
    "q_factorial_poly",
    "q_binomial_poly",
    "q_deformed_binom_poly",
]


# ---------------------------------------------------------------- parameters

def check_q(q):
    """Validate a numeric deformation parameter and return it as float."""
    try:
        qf = float(q)
    except (TypeError, ValueError):
        raise QParameterError(f"q must be a real number, got {q!r}") from None
    if not math.isfinite(qf) or qf <= 0:
        raise QParameterError(f"q must be finite and positive, got {q!r}")
    if qf == 1.0:
        raise QParameterError("q = 1 is the classical point; use the classical-limit operations")
    return qf


def canonical_q(q):
    """min(q, 1/q): symmetric structures are invariant under q -> 1/q."""
    q = check_q(q)
    return q if q < 1 else 1.0 / q


def half_integer(x, name="value"):
    """Return x as a Fraction, requiring 2x to be an integer."""
    try:
        f = Fraction(x) if not isinstance(x, float) else Fraction(x).limit_denominator(2)
    except (TypeError, ValueError):
        raise QParameterError(f"{name} must be an integer or half-integer, got {x!r}") from None
    if (2 * f).denominator != 1 or (isinstance(x, float) and float(f) != x):
        raise QParameterError(f"{name} must be an integer or half-integer, got {x!r}")
    return f


def _bracket(x, q):
    # q == 1 is allowed here; classical-limit code relies on it.
    x = np.asarray(x, dtype=float)
    if q == 1.0:
        return x[()] if x.ndim == 0 else x
    h = math.log(q)
    out = np.sinh(x * h) / math.sinh(h)
    return out[()] if out.ndim == 0 else out


def _brace(x, q):
    x = np.asarray(x, dtype=float)
    if q == 1.0:
        return x[()] if x.ndim == 0 else x
    h = math.log(q)
    out = np.expm1(2 * x * h) / math.expm1(2 * h)
    return out[()] if out.ndim == 0 else out


# ------------------------------------------------------------- float numbers

def q_bracket(x, q):
    """Symmetric q-number [x]_q, vectorized over ``x``.

    >>> round(q_bracket(2, 0.5), 12)
    2.5
    """
    return _bracket(x, check_q(q))


def q_brace(x, q):
    """Asymmetric q-number {x}_q = (q^(2x) - 1)/(q^2 - 1)."""
    return _brace(x, check_q(q))


def _check_n(n, name="n"):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise QDomainError(f"{name} must be a nonnegative integer, got {n!r}")
    return int(n)


def q_factorial(n, q, flavor="bracket"):
    """[n]_q! (``flavor='bracket'``) or {n}_q! (``flavor='brace'``)."""
    n = _check_n(n)
    q = check_q(q)
    f = _flavor_fn(flavor)
    return float(np.prod(f(np.arange(1, n + 1), q))) if n else 1.0


def q_log_factorial(n, q, flavor="bracket"):
    """log of [n]_q! or {n}_q!, for norms that overflow in linear scale."""
    n = _check_n(n)
    f = _flavor_fn(flavor)
    q = float(q)
    if q <= 0:
        raise QParameterError(f"q must be positive, got {q}")
    return float(np.sum(np.log(f(np.arange(1, n + 1), q)))) if n else 0.0


def _flavor_fn(flavor):
    if flavor == "bracket":
        return _bracket
    if flavor == "brace":
        return _brace
    raise QParameterError(f"flavor must be 'bracket' or 'brace', got {flavor!r}")


def q_binomial(n, m, q):
    """[n]_q! / ([m]_q! [n-m]_q!)."""
    n = _check_n(n)
    if isinstance(m, bool) or int(m) != m or not 0 <= m <= n:
        raise QDomainError(f"need 0 <= m <= n, got n={n}, m={m!r}")
    m = int(m)
    q = check_q(q)
    k = np.arange(1, min(m, n - m) + 1)
    return float(np.prod(_bracket(n - k + 1, q) / _bracket(k, q)))


def q_deformed_binom_coeffs(n, q, sign="minus"):
    """Coefficients c_m of (1 -+ x)^n_q = sum_m c_m x^m, lowest degree first."""
    n = _check_n(n)
    if sign not in ("minus", "plus"):
        raise QParameterError(f"sign must be 'minus' or 'plus', got {sign!r}")
    s = -1.0 if sign == "minus" else 1.0
    return np.array([q_binomial(n, m, q) * s**m for m in range(n + 1)])


def q_deformed_binom(x, n, q, sign="minus", reciprocal=False):
    """(1 - x)^n_q or (1 + x)^n_q, optionally its reciprocal.

    The polynomial is the q-binomial sum; it is evaluated through the
    factorization prod_j (1 -+ q^(n-1-2j) x), which is free of the
    alternating-sum cancellation and vanishes exactly on its zeros.
    """
    n = _check_n(n)
    q = check_q(q)
    if sign not in ("minus", "plus"):
        raise QParameterError(f"sign must be 'minus' or 'plus', got {sign!r}")
    s = -1.0 if sign == "minus" else 1.0
    x = np.asarray(x, dtype=np.result_type(x, float))
    factors = [1.0 + s * q ** (n - 1 - 2 * j) * x for j in range(n)]
    val = np.prod(factors, axis=0) if factors else np.ones_like(x)
    if not reciprocal:
        return val[()] if np.ndim(val) == 0 else val
    zero = np.zeros(np.shape(x), dtype=bool)
    for f in factors:
        zero |= np.abs(f) <= 1e-13 * np.maximum(1, np.abs(x))
    if np.any(zero):
        bad = np.atleast_1d(x)[np.atleast_1d(zero)]
        raise QDomainError(f"reciprocal of (1{'-' if sign == 'minus' else '+'}x)^{n}_q is singular at x={bad.tolist()}")
    out = 1.0 / val
    return out[()] if np.ndim(out) == 0 else out


# -------------------------------------------------------------- exponentials

@dataclass(frozen=True)
class SeriesResult:
    """Outcome of a truncated q-exponential series."""

    value: complex
    terms: int
    tail_bound: float
    cancellation: float  # max |term| / |value|; ~10**k means k digits lost


def _series(x, q, flavor, tail_tol, max_terms, window):
    f = _flavor_fn(flavor)
    x = complex(x) if np.iscomplexobj(x) else float(x)
    term = 1.0
    total = 1.0
    biggest = 1.0
    small = 0
    ratios = []
    for n in range(1, max_terms + 1):
        new = term * x / f(n, q)
        if term != 0:
            ratios.append(abs(new) / abs(term))
        term = new
        total += term
        biggest = max(biggest, abs(term))
        if abs(term) < tail_tol * abs(total):
            small += 1
            if small >= 5:
                r = ratios[-1] if ratios else 0.0
                tail = abs(term) * r / (1 - r) if r < 1 else math.inf
                return SeriesResult(total, n + 1, tail, biggest / max(abs(total), 1e-300))
        else:
            small = 0
        # plateaued term ratio >= 1 means we are outside the disc of convergence
        if len(ratios) >= window:
            w = ratios[-window:]
            if min(w) >= 1 and max(w) - min(w) <= 1e-3 * max(w):
                raise QDivergenceError(
                    f"q-exponential series diverges at |x|={abs(x):.6g} (term ratio ~{w[-1]:.6g})"
                )
        if not math.isfinite(abs(total)):
            raise QDivergenceError(f"q-exponential series overflowed at |x|={abs(x):.6g}")
    raise QDivergenceError(f"q-exponential series did not converge within {max_terms} terms")


def _exp_dispatch(x, q, flavor, tail_tol, max_terms, window, full_output, precision_warn):
    q = check_q(q)
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x))
    results = [_series(v, q, flavor, tail_tol, max_terms, window) for v in xs.ravel()]
    if precision_warn:
        worst = max(r.cancellation for r in results)
        if worst > 1e8:
            warnings.warn(
                f"q-exponential series lost about {math.log10(worst):.0f} digits to cancellation",
                RuntimeWarning,
                stacklevel=3,
            )
    vals = np.array([r.value for r in results]).reshape(xs.shape)
    if not np.iscomplexobj(xs):
        vals = vals.real
    out = vals[0] if scalar else vals
    if full_output:
        return out, (results[0] if scalar else results)
    return out


def q_exp_e(x, q, tail_tol=1e-16, max_terms=500, window=10, full_output=False, precision_warn=True):
    """e_q^x = sum_n x^n / [n]_q!.

    The series is entire for every q != 1, but for negative real x it
    alternates with large intermediate terms; a ``RuntimeWarning`` is issued
    when more than eight digits cancel. With ``full_output`` the
    :class:`SeriesResult` (term count, tail bound, cancellation) is returned too.
    """
    return _exp_dispatch(x, q, "bracket", tail_tol, max_terms, window, full_output, precision_warn)


def q_exp_E(x, q, tail_tol=1e-16, max_terms=500, window=10, full_output=False, precision_warn=True):
    """E_q^x = sum_n x^n / {n}_q!.

    For q < 1 the radius of convergence is 1/(1 - q^2); outside it the
    series raises :class:`QDivergenceError`. Use :func:`q_exp_E_product`
    for the continuation.
    """
    return _exp_dispatch(x, q, "brace", tail_tol, max_terms, window, full_output, precision_warn)


def q_exp_E_product(x, q, rtol=1e-17):
    """E_q^x from its infinite-product form (valid beyond the series radius).

    q < 1:  E_q^x = 1 / prod_k (1 - (1-q^2) x q^(2k)),
    q > 1:  E_q^x = prod_k (1 + (1-r) x r^k) with r = q^-2.
    Vectorized over real ``x``.
    """
    q = check_q(q)
    x = np.asarray(x, dtype=float)
    p = q * q if q < 1 else 1.0 / (q * q)
    a = (1 - p) * np.abs(x)
    amax = float(np.max(a)) if a.size else 0.0
    kmax = 1 if amax == 0 else max(1, int(math.ceil(math.log(rtol / amax) / math.log(p))) + 1)
    kmax = max(kmax, 1)
    ks = p ** np.arange(kmax)
    u = np.multiply.outer((1 - p) * x, ks)
    if q < 1:
        fac = 1 - u
        if np.any(fac <= 0):
            raise QDomainError("E_q^x has poles at x = q^(-2k)/(1-q^2); argument hits or passes one")
        out = np.exp(-np.sum(np.log(fac), axis=-1))
    else:
        fac = 1 + u
        out = np.prod(fac, axis=-1)
    return out[()] if out.ndim == 0 else out


def recessive_anchor(q):
    """Lattice anchor 1/(q^-1 - q) on which e_q^{-x} decays (q mapped to < 1)."""
    q = canonical_q(q)
    return q / (1 - q * q)


_LATTICE_CACHE: dict = {}


def _recessive_table(q, kmax):
    """e_q^{-x_k} for x_k = c q^-k, k = k0..kmax, by backward recurrence.

    On the anchored lattice the defining q-difference equation reads
    e_{k+1} = e_{k-1} - q^-k e_k. Its decaying solution is obtained stably by
    running the recurrence downward (Miller's algorithm) and normalizing
    with the convergent series at the innermost node x_{k0} <= 1.
    """
    key = (q, kmax)
    if key in _LATTICE_CACHE:
        return _LATTICE_CACHE[key]
    c = q / (1 - q * q)
    k0 = math.floor(math.log(c) / math.log(q))  # largest k with x_k <= 1
    start = kmax + 40
    n = start - k0 + 2
    vals = np.zeros(n)
    vals[-1] = 0.0
    vals[-2] = 1.0
    inv_q = 1.0 / q
    for i in range(n - 2, 0, -1):
        k = k0 + i
        vals[i - 1] = vals[i + 1] + inv_q**k * vals[i]
        if abs(vals[i - 1]) > 1e250:
            vals[i - 1 :] *= 1e-250
    x0 = c * q ** (-k0)
    x1 = c * q ** (-(k0 - 1))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        ref0 = q_exp_e(-x0, q)
        ref1 = q_exp_e(-x1, q)
    scale = ref0 / vals[0]
    table = vals[: kmax - k0 + 1] * scale
    # lattice consistency: one more inner node from the series
    back = vals[1] * scale + inv_q**k0 * ref0
    if not math.isclose(back, ref1, rel_tol=1e-9, abs_tol=1e-14):
        raise QPrecisionError("lattice recurrence disagrees with the series at the inner node")
    if len(_LATTICE_CACHE) > 64:
        _LATTICE_CACHE.clear()
    _LATTICE_CACHE[key] = (k0, table)
    return k0, table


def q_exp_e_neg_lattice(x, q, lattice_rtol=1e-7):
    """e_q^{-x} for x >= 0 on the anchored lattice {q^k / (q^-1 - q)}.

    Points with x <= 1 may lie anywhere and use the series. Larger points
    must sit on the lattice, where the value is taken from the stable
    recurrence; off-lattice large arguments fall back to the series and
    raise :class:`QPrecisionError` if cancellation destroys it.
    """
    q = canonical_q(q)
    c = q / (1 - q * q)
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    flat = x.ravel()
    res = out.ravel()
    big = flat > 1.0
    if np.any(flat < 0):
        raise QDomainError("q_exp_e_neg_lattice needs x >= 0")
    if np.any(~big):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            res[~big] = q_exp_e(-flat[~big], q)
    if np.any(big):
        kf = np.log(flat[big] / c) / math.log(1.0 / q)
        k = np.rint(kf).astype(int)
        on = np.abs(kf - k) < lattice_rtol / math.log(1.0 / q) * 10
        kmax = int(k.max())
        kmax = (kmax // 64 + 1) * 64
        k0, table = _recessive_table(q, kmax)
        vals = np.empty(k.shape)
        vals[on] = table[k[on] - k0]
        if np.any(~on):
            off = flat[big][~on]
            v, info = q_exp_e(-off, q, full_output=True, precision_warn=False)
            info = [info] if not isinstance(info, list) else info
            if max(i.cancellation for i in info) > 1e6:
                raise QPrecisionError(
                    "e_q^{-x} off the anchored lattice loses precision for x > 1; "
                    f"use nodes on q^k/(q^-1 - q), offending x={off.tolist()[:3]}"
                )
            vals[~on] = v
        res[big] = vals
    return out[()] if out.ndim == 0 else out


# ------------------------------------------------------------------- exact

_D0 = LaurentPoly({2: 1, -2: -1})  # q - 1/q in s units


def q_power_poly(p):
    """q**p as a monomial, p integer or half-integer."""
    return LaurentPoly.q_power(half_integer(p, "exponent"))


def q_bracket_poly(x, base_power=1):
    """Exact [x]_b with base b = q**base_power.

    Returns a LaurentPoly when the ratio is a Laurent polynomial (integer
    x) and a QFraction otherwise (half-odd x, e.g. [1/2]_q = 1/(s + 1/s)).

    >>> str(q_bracket_poly(3))
    'q^2 + 1 + q^-2'
    """
    x = half_integer(x, "x")
    p = int(base_power)
    if p != base_power or p < 1:
        raise QParameterError(f"base_power must be a positive integer, got {base_power!r}")
    num = LaurentPoly({int(2 * p * x): 1}) - LaurentPoly({int(-2 * p * x): 1})
    den = _D0 if p == 1 else LaurentPoly({2 * p: 1, -2 * p: -1})
    return as_exact(QFraction(num, den))


def q_brace_poly(x):
    """Exact {x}_q = (q^(2x) - 1)/(q^2 - 1)."""
    x = half_integer(x, "x")
    num = LaurentPoly({int(4 * x): 1}) - 1
    den = LaurentPoly({4: 1}) - 1
    return as_exact(QFraction(num, den))


def q_factorial_poly(n, flavor="bracket"):
    n = _check_n(n)
    f = {"bracket": q_bracket_poly, "brace": q_brace_poly}.get(flavor)
    if f is None:
        raise QParameterError(f"flavor must be 'bracket' or 'brace', got {flavor!r}")
    out = LaurentPoly.constant(1)
    for k in range(1, n + 1):
        out = out * f(k)
    return out


def q_binomial_poly(n, m):
    """Exact Gaussian binomial [n]!/([m]![n-m]!) as a Laurent polynomial."""
    n = _check_n(n)
    if isinstance(m, bool) or int(m) != m or not 0 <= m <= n:
        raise QDomainError(f"need 0 <= m <= n, got n={n}, m={m!r}")
    m = int(m)
    num = LaurentPoly.constant(1)
    den = LaurentPoly.constant(1)
    for k in range(1, min(m, n - m) + 1):
        num = num * q_bracket_poly(n - k + 1)
        den = den * q_bracket_poly(k)
    return num.exact_div(den)


def q_deformed_binom_poly(n, sign="minus"):
    """Coefficient list (LaurentPoly) of (1 -+ x)^n_q, lowest degree first."""
    n = _check_n(n)
    if sign not in ("minus", "plus"):
        raise QParameterError(f"sign must be 'minus' or 'plus', got {sign!r}")
    s = -1 if sign == "minus" else 1
    return [q_binomial_poly(n, m) * s**m for m in range(n + 1)]

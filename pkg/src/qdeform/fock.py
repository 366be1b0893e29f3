"""Truncated Fock space, norm tables and basis conventions.

Two bases are used. The raw kets |n> follow the ladder rules
``a_- |n> = n |n-1>`` and ``a_+ |n> = |n+1>`` and carry a realization
dependent Gram diagonal <n|n> (a :class:`NormTable`). The unit kets
|n) = |n> / sqrt(<n|n>) are orthonormal. Matrices act on coefficient
columns: ``A[m, n]`` is the coefficient of ket m in A acting on ket n.

Truncation to n <= n_max corrupts only the last row and column of products
of ladder operators; identity checks use :func:`interior`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import QDomainError, QParameterError

__all__ = [
    "RAW",
    "UNIT",
    "NormTable",
    "FockSpace",
    "FockOperator",
    "raw_ladder",
    "apply_diag",
    "adjoint_wrt",
    "to_unit_basis",
    "from_unit_basis",
    "commutator",
    "interior",
    "norms_from_conjugation",
    "residual",
    "factorial_norms",
]

log = logging.getLogger(__name__)

RAW = "raw"
UNIT = "unit"


@dataclass(frozen=True)
class NormTable:
    """n -> <n|n>, stored as logarithms so that large tables stay finite."""

    log_values: np.ndarray

    def __post_init__(self):
        lv = np.asarray(self.log_values, dtype=float)
        if lv.ndim != 1 or lv.size == 0:
            raise QParameterError("norm table must be a nonempty 1-d array")
        if not np.all(np.isfinite(lv)):
            raise QParameterError("norm table entries must be finite and positive")
        if abs(lv[0]) > 1e-12:
            raise QParameterError(f"norm table must have <0|0> = 1, got {math.exp(lv[0])}")
        lv = lv.copy()
        lv.setflags(write=False)
        object.__setattr__(self, "log_values", lv)

    @classmethod
    def from_values(cls, values):
        v = np.asarray(values, dtype=float)
        if np.any(v <= 0) or not np.all(np.isfinite(v)):
            raise QParameterError("norm table entries must be finite and positive")
        return cls(np.log(v))

    @classmethod
    def ones(cls, size):
        return cls(np.zeros(size))

    @property
    def values(self):
        return np.exp(self.log_values)

    def __len__(self):
        return len(self.log_values)

    def __getitem__(self, n):
        return math.exp(self.log_values[n])

    def allclose(self, other, rtol=1e-12):
        return len(self) == len(other) and bool(
            np.all(np.abs(self.log_values - other.log_values) <= rtol * np.maximum(1, np.abs(self.log_values)))
        )


@dataclass(frozen=True)
class FockSpace:
    n_max: int
    basis: str = RAW
    norms: NormTable | None = None

    def __post_init__(self):
        if self.n_max < 1:
            raise QParameterError("n_max must be at least 1")
        if self.basis not in (RAW, UNIT):
            raise QParameterError(f"basis must be {RAW!r} or {UNIT!r}")
        if self.norms is not None and len(self.norms) != self.dim:
            raise QParameterError("norm table size does not match the space")

    @property
    def dim(self):
        return self.n_max + 1


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Dense complex matrix on a truncated Fock space, tagged with its basis."""

    matrix: np.ndarray
    basis: str = RAW
    label: str = field(default="", compare=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise QParameterError("operator matrix must be square")
        if self.basis not in (RAW, UNIT):
            raise QParameterError(f"basis must be {RAW!r} or {UNIT!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_max(self):
        return self.matrix.shape[0] - 1

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def _same(self, other):
        if isinstance(other, FockOperator):
            if other.basis != self.basis:
                raise QParameterError(f"cannot combine {self.basis} and {other.basis} operators")
            if other.matrix.shape != self.matrix.shape:
                raise QParameterError("operator dimensions differ")
            return other.matrix
        return None

    def __matmul__(self, other):
        m = self._same(other)
        if m is None:
            return np.asarray(self.matrix @ np.asarray(other))
        return FockOperator(self.matrix @ m, self.basis)

    def __add__(self, other):
        m = self._same(other)
        if m is None:
            return FockOperator(self.matrix + other * np.eye(len(self.matrix)), self.basis)
        return FockOperator(self.matrix + m, self.basis)

    __radd__ = __add__

    def __sub__(self, other):
        m = self._same(other)
        if m is None:
            return FockOperator(self.matrix - other * np.eye(len(self.matrix)), self.basis)
        return FockOperator(self.matrix - m, self.basis)

    def __neg__(self):
        return FockOperator(-self.matrix, self.basis)

    def __mul__(self, scalar):
        if isinstance(scalar, FockOperator):
            raise TypeError("use @ for operator products")
        return FockOperator(self.matrix * scalar, self.basis)

    __rmul__ = __mul__

    def diagonal(self):
        return np.diag(self.matrix)

    def is_diagonal(self):
        return not np.any(self.matrix - np.diag(np.diag(self.matrix)))

    def act(self, n):
        """Column of the operator applied to basis ket n."""
        return self.matrix[:, n]

    def apply_function(self, f):
        """f(A) for a diagonal operator A, applied entrywise to the diagonal."""
        if not self.is_diagonal():
            raise QDomainError("functions are only applied to diagonal operators")
        d = np.diag(self.matrix)
        return FockOperator(np.diag(f(d)), self.basis)

    def to_dict(self):
        """Row-major serialization with a small header."""
        m = self.matrix
        return {
            "n_max": self.n_max,
            "basis": self.basis,
            "real": m.real.ravel().tolist(),
            "imag": m.imag.ravel().tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        dim = d["n_max"] + 1
        m = (np.array(d["real"]) + 1j * np.array(d["imag"])).reshape(dim, dim)
        return cls(m, d["basis"])


def raw_ladder(n_max):
    """Raw-basis a_-, a_+ and N on the space n = 0..n_max."""
    if n_max < 1:
        raise QParameterError("n_max must be at least 1")
    n = np.arange(n_max + 1)
    a_minus = np.diag(n[1:].astype(float), k=1)
    a_plus = np.diag(np.ones(n_max), k=-1)
    return (
        FockOperator(a_minus, RAW, "a-"),
        FockOperator(a_plus, RAW, "a+"),
        FockOperator(np.diag(n.astype(float)), RAW, "N"),
    )


def apply_diag(f, n_max, basis=RAW, at_zero=None, label=""):
    """diag(f(0), ..., f(n_max)).

    ``f`` is called with the integer array 0..n_max. A non-finite value at
    n = 0 is replaced by ``at_zero`` when given (a removable 0/0 that only
    ever multiplies an annihilated state, or a continuity limit); any other
    non-finite entry raises :class:`QDomainError` naming n.
    """
    n = np.arange(n_max + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.asarray(f(n), dtype=complex) * np.ones(n_max + 1)
    bad = ~np.isfinite(d)
    if bad[0] and at_zero is not None:
        d[0] = at_zero
        bad[0] = False
        log.debug("apply_diag %s: n=0 entry set to %r", label or f, at_zero)
    if np.any(bad):
        raise QDomainError(f"diagonal function is singular at n={int(np.flatnonzero(bad)[0])}")
    return FockOperator(np.diag(d), basis, label)


def adjoint_wrt(op, norms):
    """Adjoint in the inner product with Gram diagonal ``norms``.

    (A^dag)[m, n] = conj(A[n, m]) * <n|n> / <m|m>.
    """
    a = np.asarray(op.matrix)
    if op.basis == UNIT:
        return FockOperator(a.conj().T, UNIT)
    lv = norms.log_values
    if len(lv) != a.shape[0]:
        raise QParameterError("norm table size does not match the operator")
    ratio = np.exp(lv[None, :] - lv[:, None])
    return FockOperator(a.conj().T * ratio, RAW)


def to_unit_basis(op, norms):
    """Similarity transform S A S^-1 with S = diag(sqrt(<n|n>))."""
    if op.basis == UNIT:
        return op
    lv = norms.log_values
    ratio = np.exp(0.5 * (lv[:, None] - lv[None, :]))
    return FockOperator(np.asarray(op.matrix) * ratio, UNIT, op.label)


def from_unit_basis(op, norms):
    if op.basis == RAW:
        return op
    lv = norms.log_values
    ratio = np.exp(0.5 * (lv[None, :] - lv[:, None]))
    return FockOperator(np.asarray(op.matrix) * ratio, RAW, op.label)


def commutator(a, b):
    return a @ b - b @ a


def interior(matrix, drop=1):
    """Leading block excluding the last ``drop`` rows and columns."""
    m = np.asarray(matrix)
    k = m.shape[0] - drop
    return m[:k, :k]


def norms_from_conjugation(minus, plus):
    """Norm table forced by Q_+ = Q_-^dag for a pair of ladder matrices.

    Conjugation requires <n|n>/<n-1|n-1> = Q_-[n-1, n] / Q_+[n, n-1].
    """
    lo = np.diag(np.asarray(minus.matrix), k=1)
    up = np.diag(np.asarray(plus.matrix), k=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = (lo / up).real
    if np.any(~np.isfinite(r)) or np.any(r <= 0):
        raise QDomainError("ladder entries do not define a positive norm table")
    return NormTable(np.concatenate([[0.0], np.cumsum(np.log(r))]))


def residual(lhs, rhs, *terms, drop=1):
    """Scale-aware max residual of ``lhs - rhs`` on the interior block.

    Each entry is divided by max(1, sum of |term| over the matrices that
    formed it), so entries of size 1e9 are judged at relative precision
    and entries of order one at absolute precision. ``terms`` defaults to
    (lhs, rhs).
    """
    lhs = np.asarray(getattr(lhs, "matrix", lhs))
    rhs = np.asarray(getattr(rhs, "matrix", rhs))
    terms = terms or (lhs, rhs)
    scale = sum(np.abs(np.asarray(getattr(t, "matrix", t))) for t in terms)
    diff = np.abs(lhs - rhs) / np.maximum(1.0, scale)
    block = interior(diff, drop) if drop else diff
    return float(block.max()) if block.size else 0.0


def factorial_norms(n_max):
    """<n|n> = n!, the norm in which a_+ is the adjoint of a_-."""
    return NormTable(np.array([math.lgamma(n + 1) for n in range(n_max + 1)]))

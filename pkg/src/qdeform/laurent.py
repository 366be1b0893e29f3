"""Exact Laurent polynomials in s = q^(1/2) and their ratios.

Every q-number with integer or half-integer argument is a ratio of Laurent
polynomials in s. Integer brackets are genuine Laurent polynomials, while
half-odd-integer brackets such as [1/2]_q = 1/(s + 1/s) are not, so the module
also provides :class:`QFraction`. Equality of fractions is decided by
cross-multiplication, which needs no polynomial gcd.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = ["LaurentPoly", "QFraction", "as_exact"]


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def _check_coeff(c):
    if isinstance(c, bool) or not isinstance(c, Rational):
        raise TypeError(f"exact coefficients must be rational, got {type(c).__name__}")
    return _norm_coeff(Fraction(c)) if not isinstance(c, int) else c


class LaurentPoly:
    """Laurent polynomial sum_e c_e s^e with rational coefficients, s = q^(1/2).

    Instances are immutable and hashable. Exponents are integers counted in
    units of q^(1/2); zero coefficients are never stored.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in dict(coeffs).items():
                if not isinstance(e, (int, np.integer)) or isinstance(e, bool):
                    raise TypeError("exponents must be integers")
                v = _check_coeff(v)
                if v != 0:
                    c[int(e)] = v
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # constructors
    @classmethod
    def monomial(cls, exponent, coeff=1):
        """coeff * s**exponent."""
        return cls({exponent: coeff})

    @classmethod
    def q_power(cls, power, coeff=1):
        """coeff * q**power for integer or half-integer ``power``."""
        p2 = Fraction(power) * 2
        if p2.denominator != 1:
            raise ValueError(f"q-power must be a half-integer, got {power}")
        return cls({int(p2): coeff})

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    # inspection
    @property
    def coeffs(self):
        """Copy of the exponent -> coefficient mapping."""
        return dict(self._c)

    def terms(self):
        """(exponent, coefficient) pairs with exponents descending."""
        return sorted(self._c.items(), reverse=True)

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    @property
    def max_exponent(self):
        return max(self._c) if self._c else None

    @property
    def min_exponent(self):
        return min(self._c) if self._c else None

    def is_constant(self):
        return not self._c or set(self._c) == {0}

    def reflect(self):
        """Image under q -> 1/q, i.e. exponent negation."""
        return LaurentPoly({-e: c for e, c in self._c.items()})

    def is_palindromic(self):
        return self == self.reflect()

    # arithmetic
    @staticmethod
    def _coerce(other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, Rational) and not isinstance(other, bool):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._c.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, QFraction):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._c)
        for e, c in other._c.items():
            out[e] = _norm_coeff(out.get(e, 0) + c)
        return LaurentPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QFraction):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, QFraction):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly({e: _norm_coeff(c) for e, c in out.items()})

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if len(self._c) != 1:
                return QFraction(LaurentPoly.constant(1), self ** (-k))
            (e, c), = self._c.items()
            return LaurentPoly({e * k: Fraction(1, 1) / Fraction(c) ** (-k)})
        out = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, QFraction):
            return QFraction(self) / other
        if isinstance(other, Rational) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return LaurentPoly({e: _norm_coeff(Fraction(c) / other) for e, c in self._c.items()})
        if isinstance(other, LaurentPoly):
            q, r = self.divmod(other)
            if r.is_zero():
                return q
            return QFraction(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def divmod(self, other):
        """Division with remainder after clearing the lowest powers of s.

        Returns ``(quot, rem)`` with ``self == quot * other + rem``. The
        remainder is zero exactly when ``other`` divides ``self`` in the
        Laurent ring.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly(), LaurentPoly()
        la, lb = self.min_exponent, other.min_exponent
        a = [Fraction(0)] * (self.max_exponent - la + 1)
        for e, c in self._c.items():
            a[e - la] = Fraction(c)
        b = [Fraction(0)] * (other.max_exponent - lb + 1)
        for e, c in other._c.items():
            b[e - lb] = Fraction(c)
        # ordinary polynomial long division, highest degree first
        db = len(b) - 1
        lead = b[-1]
        quot = {}
        rem = a[:]
        for k in range(len(a) - 1 - db, -1, -1):
            c = rem[k + db] / lead
            if c:
                quot[k] = c
                for i, bi in enumerate(b):
                    rem[k + i] -= c * bi
        shift = la - lb
        q = LaurentPoly({k + shift: _norm_coeff(c) for k, c in quot.items()})
        r = LaurentPoly({i + la: _norm_coeff(c) for i, c in enumerate(rem) if c})
        return q, r

    def exact_div(self, other):
        """Quotient ``self / other``; raises ``ValueError`` if not exact."""
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("Laurent division is not exact")
        return q

    # comparison
    def __eq__(self, other):
        if isinstance(other, QFraction):
            return other == self
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._c.items())))
        return self._hash

    # evaluation
    def evaluate(self, q):
        """Numeric value at q (float, complex or numpy array)."""
        q = np.asarray(q, dtype=float) if not np.iscomplexobj(q) else np.asarray(q)
        s = np.sqrt(q)
        out = np.zeros_like(s, dtype=np.result_type(s, float))
        for e, c in self._c.items():
            out = out + float(c) * s**e
        return out[()] if out.ndim == 0 else out

    __call__ = evaluate

    # formatting
    @staticmethod
    def _power_str(e):
        if e == 0:
            return ""
        if e % 2 == 0:
            p = e // 2
            return "q" if p == 1 else f"q^{p}"
        return f"q^{{{e}/2}}"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, c in self.terms():
            mag = abs(c)
            p = self._power_str(e)
            if p and mag == 1:
                body = p
            elif p:
                body = f"{mag}·{p}"
            else:
                body = f"{mag}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"


class QFraction:
    """Ratio ``num/den`` of Laurent polynomials in s = q^(1/2).

    No gcd normalization is attempted beyond cancelling the denominator when
    it divides the numerator exactly. Equality uses cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = LaurentPoly._coerce(num) if not isinstance(num, LaurentPoly) else num
        den = LaurentPoly.constant(1) if den is None else den
        den = LaurentPoly._coerce(den) if not isinstance(den, LaurentPoly) else den
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("QFraction parts must be LaurentPoly or rational")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        # monomial denominators always cancel
        if len(den._c) == 1:
            (e, c), = den._c.items()
            num = LaurentPoly({k - e: _norm_coeff(Fraction(v) / c) for k, v in num._c.items()})
            den = LaurentPoly.constant(1)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("QFraction is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, QFraction):
            return other
        if isinstance(other, LaurentPoly):
            return QFraction(other)
        if isinstance(other, Rational) and not isinstance(other, bool):
            return QFraction(LaurentPoly.constant(other))
        return NotImplemented

    def simplify(self):
        """LaurentPoly if the ratio is a Laurent polynomial, else self."""
        if self.den.is_constant():
            return self.num / self.den._c[0]
        q, r = self.num.divmod(self.den)
        return q if r.is_zero() else self

    def reduced(self):
        """Equal fraction with the polynomial gcd cancelled (leading den coeff 1)."""
        a, b = self.num, self.den
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        num, den = self.num.exact_div(a), self.den.exact_div(a)
        lead = Fraction(den._c[den.max_exponent])
        return QFraction(num * (1 / lead), den * (1 / lead))

    def __neg__(self):
        return QFraction(-self.num, self.den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return QFraction(self.num + other.num, self.den)
        return QFraction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QFraction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QFraction(self.den ** (-k), self.num ** (-k))
        return QFraction(self.num**k, self.den**k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        s = self.simplify()
        return hash(s) if isinstance(s, LaurentPoly) else hash((self.num, self.den))

    def is_zero(self):
        return self.num.is_zero()

    def reflect(self):
        return QFraction(self.num.reflect(), self.den.reflect())

    def evaluate(self, q):
        return self.num.evaluate(q) / self.den.evaluate(q)

    __call__ = evaluate

    def __str__(self):
        s = self.simplify()
        if isinstance(s, LaurentPoly):
            return str(s)
        r = self.reduced().simplify()
        if isinstance(r, LaurentPoly):
            return str(r)
        return f"({r.num}) / ({r.den})"

    def __repr__(self):
        return f"QFraction({self})"


def as_exact(x):
    """Simplest exact representation: LaurentPoly when possible."""
    if isinstance(x, QFraction):
        return x.simplify()
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.constant(x)

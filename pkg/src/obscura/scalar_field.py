"""
Exact arithmetic in the cyclotomic field Q(zeta_m).

A :class:`Scalar` stores its value in the power basis 1, zeta, ..., zeta^(d-1)
where d = phi(m) is the degree of the m-th cyclotomic polynomial.  Every value
is kept fully reduced, so equality is plain coefficient comparison.

For m = 1 and m = 2 the field is Q itself and the scalar is just a rational.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import math
from numbers import Rational

from obscura.errors import InvalidOrderError, OrderMismatchError, ScalarZeroDivisionError

__all__ = [
    "Scalar",
    "cyclotomic_polynomial",
    "root_of_unity",
    "scalar",
    "scalar_add",
    "scalar_inv",
    "scalar_mul",
]


def _poly_divmod(num, den):
    """Long division of integer/rational coefficient lists (low degree first)."""
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = Fraction(num[-1]) / lead
        q[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise InvalidOrderError(f"root-of-unity order must be >= 1, got {m}")
    poly = [Fraction(-1)] + [Fraction(0)] * (m - 1) + [Fraction(1)]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic_polynomial(d))
            assert not any(rem)
    assert all(c.denominator == 1 for c in poly)
    return tuple(int(c) for c in poly)


def _degree(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


def _reduce(coeffs, m: int) -> tuple[Fraction, ...]:
    """Reduce a coefficient list modulo the (monic) m-th cyclotomic polynomial."""
    phi = cyclotomic_polynomial(m)
    d = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    for top in range(len(c) - 1, d - 1, -1):
        t = c[top]
        if t:
            shift = top - d
            for i in range(d):
                if phi[i]:
                    c[shift + i] -= t * phi[i]
        c[top] = Fraction(0)
    c = c[:d]
    c += [Fraction(0)] * (d - len(c))
    return tuple(c)


class Scalar:
    """An element of Q(zeta_m), immutable and hashable."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs=(0,)):
        if order < 1:
            raise InvalidOrderError(f"root-of-unity order must be >= 1, got {order}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", _reduce(coeffs, order))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- construction ----------------------------------------------------

    @classmethod
    def rational(cls, value, order: int = 2) -> "Scalar":
        return cls(order, (Fraction(value),))

    @classmethod
    def _raw(cls, order: int, coeffs: tuple[Fraction, ...]) -> "Scalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.order != self.order:
                raise OrderMismatchError(
                    f"cannot combine scalars of orders {self.order} and {other.order}"
                )
            return other
        if isinstance(other, (int, Rational)):
            c = [Fraction(0)] * len(self.coeffs)
            c[0] = Fraction(other)
            return Scalar._raw(self.order, tuple(c))
        return NotImplemented

    # -- queries -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Scalar._raw(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self.coeffs) == 1:
            return Scalar._raw(self.order, (self.coeffs[0] * other.coeffs[0],))
        if other.is_rational():
            k = other.coeffs[0]
            return Scalar._raw(self.order, tuple(a * k for a in self.coeffs))
        if self.is_rational():
            k = self.coeffs[0]
            return Scalar._raw(self.order, tuple(k * b for b in other.coeffs))
        prod = [Fraction(0)] * (2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return Scalar._raw(self.order, _reduce(prod, self.order))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ScalarZeroDivisionError("zero has no inverse in k^x")
        if self.is_rational():
            c = [Fraction(0)] * len(self.coeffs)
            c[0] = 1 / self.coeffs[0]
            return Scalar._raw(self.order, tuple(c))
        # extended Euclid: find u with u * self = 1 mod Phi_m
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        r0, r1 = phi, _trim(list(self.coeffs))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] == 0:
            q, r = _poly_divmod(r0, r1)
            r = _trim(r)
            r0, r1 = r1, r
            s0, s1 = s1, _trim(_poly_sub(s0, _poly_mul(q, s1)))
        # r1 is a nonzero constant
        inv = [c / r1[0] for c in s1]
        return Scalar(self.order, inv)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self._coerce(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    # -- printing ------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_rational():
            return _frac_str(self.coeffs[0])
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(_frac_str(c))
                continue
            power = "zeta" if i == 1 else f"zeta^{i}"
            if c == 1:
                term = power
            elif c == -1:
                term = f"-{power}"
            else:
                term = f"{_frac_str(c)}*{power}"
            parts.append(term)
        if len(parts) == 1:
            return parts[0]
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return f"({text})"

    def __repr__(self) -> str:
        return f"Scalar({self.order}, {str(self)!r})"


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [Fraction(0)]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def scalar(value, order: int = 2) -> Scalar:
    """Lift an int, Fraction, or existing Scalar into Q(zeta_order)."""
    if isinstance(value, Scalar):
        if value.order != order:
            raise OrderMismatchError(f"scalar of order {value.order} used where {order} expected")
        return value
    if isinstance(value, str):
        value = Fraction(value)
    return Scalar.rational(value, order)


def root_of_unity(m: int, k: int = 1) -> Scalar:
    """zeta_m ** k as an exact scalar of order m."""
    if m < 1:
        raise InvalidOrderError(f"root-of-unity order must be >= 1, got {m}")
    k %= m
    coeffs = [0] * (k + 1)
    coeffs[k] = 1
    return Scalar(m, coeffs)


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def scalar_inv(a: Scalar) -> Scalar:
    return a.inverse()


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)

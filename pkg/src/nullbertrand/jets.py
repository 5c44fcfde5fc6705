"""Truncated Taylor series ("jets") in one variable.

A jet of order K at s0 stores the normalized Taylor coefficients
``coeffs[k] = f^(k)(s0) / k!`` for k = 0..K.  Products are Cauchy products;
division and the elementary functions use the usual Taylor-mode
recurrences, so derivatives come out exact up to roundoff.

The module-level functions (``sin``, ``sqrt``, ``power`` ...) accept plain
floats, mpmath numbers and jets alike; the expression evaluator relies on
that to run a single AST over any scalar kind.
"""

import math
from math import factorial

import mpmath
import numpy as np

from .errors import DomainError

DEFAULT_ORDER = 10


class Jet:
    __slots__ = ("s0", "coeffs")

    def __init__(self, s0, coeffs):
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.ndim != 1 or coeffs.size < 1:
            raise ValueError("jet coefficients must be a non-empty 1-d sequence")
        coeffs.flags.writeable = False
        self.s0 = float(s0)
        self.coeffs = coeffs

    @classmethod
    def constant(cls, value, s0, order):
        c = np.zeros(order + 1)
        c[0] = value
        return cls(s0, c)

    @property
    def order(self):
        return self.coeffs.size - 1

    @property
    def value(self):
        return float(self.coeffs[0])

    def derivative(self, k):
        """k-th derivative at s0 (k! times the k-th coefficient)."""
        if not 0 <= k <= self.order:
            raise IndexError(f"derivative order {k} outside 0..{self.order}")
        return factorial(k) * float(self.coeffs[k])

    def derivatives(self):
        k = np.arange(self.coeffs.size)
        return self.coeffs * np.array([factorial(int(i)) for i in k], dtype=float)

    def diff(self):
        """Jet of the derivative function; loses one order."""
        if self.order < 1:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.coeffs.size)
        return Jet(self.s0, self.coeffs[1:] * k)

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot raise jet order from {self.order} to {order}")
        return Jet(self.s0, self.coeffs[: order + 1])

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.s0 != self.s0:
                raise ValueError(f"jets expanded at different points: {self.s0} vs {other.s0}")
            n = min(self.coeffs.size, other.coeffs.size)
            return self.coeffs[:n], other.coeffs[:n]
        if isinstance(other, (int, float, np.floating, np.integer)):
            b = np.zeros(self.coeffs.size)
            b[0] = other
            return self.coeffs, b
        return NotImplemented

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return Jet(self.s0, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return Jet(self.s0, a - b)

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return Jet(self.s0, b - a)

    def __neg__(self):
        return Jet(self.s0, -self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Jet(self.s0, self.coeffs * other)
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return Jet(self.s0, np.convolve(a, b)[: a.size])

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return Jet(self.s0, _divide(a, b))

    def __rtruediv__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return Jet(self.s0, _divide(b, a))

    def __pow__(self, exponent):
        return power(self, exponent)

    def __rpow__(self, base):
        return power(base, self)

    def __repr__(self):
        return f"Jet(s0={self.s0!r}, coeffs={list(self.coeffs)!r})"


def jet_variable(s0, order=DEFAULT_ORDER):
    """The identity function s expanded at s0."""
    if order < 1:
        raise ValueError("jet order must be >= 1")
    c = np.zeros(order + 1)
    c[0] = s0
    c[1] = 1.0
    return Jet(s0, c)


def jet_arith(a, b, op):
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    raise ValueError(f"unknown jet operator {op!r}")


def _divide(a, b):
    if b[0] == 0.0:
        raise DomainError("division by a jet with zero constant term")
    q = np.empty_like(a)
    q[0] = a[0] / b[0]
    for k in range(1, a.size):
        q[k] = (a[k] - np.dot(b[1 : k + 1], q[k - 1 :: -1])) / b[0]
    return q


def _weights(a):
    # j * a_j, used by the exp/sin/sinh/ln recurrences
    return np.arange(a.size) * a


def _exp(a):
    e = np.empty_like(a)
    e[0] = math.exp(a[0])
    ja = _weights(a)
    for k in range(1, a.size):
        e[k] = np.dot(ja[1 : k + 1], e[k - 1 :: -1][:k]) / k
    return e


def _sin_cos(a):
    s = np.empty_like(a)
    c = np.empty_like(a)
    s[0] = math.sin(a[0])
    c[0] = math.cos(a[0])
    ja = _weights(a)
    for k in range(1, a.size):
        w = ja[1 : k + 1]
        s[k] = np.dot(w, c[k - 1 :: -1][:k]) / k
        c[k] = -np.dot(w, s[k - 1 :: -1][:k]) / k
    return s, c


def _sinh_cosh(a):
    s = np.empty_like(a)
    c = np.empty_like(a)
    s[0] = math.sinh(a[0])
    c[0] = math.cosh(a[0])
    ja = _weights(a)
    for k in range(1, a.size):
        w = ja[1 : k + 1]
        s[k] = np.dot(w, c[k - 1 :: -1][:k]) / k
        c[k] = np.dot(w, s[k - 1 :: -1][:k]) / k
    return s, c


def _ln(a):
    if not a[0] > 0.0:
        raise DomainError(f"ln of non-positive value {a[0]!r}")
    out = np.empty_like(a)
    out[0] = math.log(a[0])
    for k in range(1, a.size):
        j = np.arange(1, k)
        acc = np.dot(j * out[1:k], a[k - 1 : 0 : -1]) if k > 1 else 0.0
        out[k] = (a[k] - acc / k) / a[0]
    return out


def _sqrt(a):
    if not a[0] > 0.0:
        raise DomainError(f"sqrt of non-positive value {a[0]!r}")
    r = np.empty_like(a)
    r[0] = math.sqrt(a[0])
    for k in range(1, a.size):
        acc = np.dot(r[1:k], r[k - 1 : 0 : -1]) if k > 1 else 0.0
        r[k] = (a[k] - acc) / (2.0 * r[0])
    return r


def _is_mp(x):
    return isinstance(x, (mpmath.mpf, mpmath.mpc))


def exp(x):
    if isinstance(x, Jet):
        return Jet(x.s0, _exp(x.coeffs))
    if _is_mp(x):
        return mpmath.exp(x)
    return math.exp(x)


def sin(x):
    if isinstance(x, Jet):
        return Jet(x.s0, _sin_cos(x.coeffs)[0])
    if _is_mp(x):
        return mpmath.sin(x)
    return math.sin(x)


def cos(x):
    if isinstance(x, Jet):
        return Jet(x.s0, _sin_cos(x.coeffs)[1])
    if _is_mp(x):
        return mpmath.cos(x)
    return math.cos(x)


def sinh(x):
    if isinstance(x, Jet):
        return Jet(x.s0, _sinh_cosh(x.coeffs)[0])
    if _is_mp(x):
        return mpmath.sinh(x)
    return math.sinh(x)


def cosh(x):
    if isinstance(x, Jet):
        return Jet(x.s0, _sinh_cosh(x.coeffs)[1])
    if _is_mp(x):
        return mpmath.cosh(x)
    return math.cosh(x)


def ln(x):
    if isinstance(x, Jet):
        return Jet(x.s0, _ln(x.coeffs))
    if not x > 0:
        raise DomainError(f"ln of non-positive value {x!r}")
    if _is_mp(x):
        return mpmath.log(x)
    return math.log(x)


def sqrt(x):
    if isinstance(x, Jet):
        return Jet(x.s0, _sqrt(x.coeffs))
    if not x > 0:
        raise DomainError(f"sqrt of non-positive value {x!r}")
    if _is_mp(x):
        return mpmath.sqrt(x)
    return math.sqrt(x)


def divide(a, b):
    """a / b for any scalar kind, raising DomainError on a zero divisor."""
    if not isinstance(b, Jet) and b == 0:
        raise DomainError("division by zero")
    return a / b


def _int_power(base, n):
    # Binary exponentiation; same multiplication order for every scalar kind,
    # so the float result equals the constant term of the jet result exactly.
    if n < 0:
        return divide(1.0, _int_power(base, -n))
    result = None
    square = base
    while n:
        if n & 1:
            result = square if result is None else result * square
        n >>= 1
        if n:
            square = square * square
    return 1.0 if result is None else result


def power(base, exponent):
    """base ** exponent: integer exponents for any base, otherwise base > 0."""
    if not isinstance(exponent, Jet):
        e = float(exponent)
        if e.is_integer() and abs(e) <= 1 << 16:
            if isinstance(base, Jet) or not _is_mp(base):
                return _int_power(base, int(e))
            return base ** int(e)
        if _is_mp(base) or _is_mp(exponent):
            if not base > 0:
                raise DomainError(f"non-integer power of non-positive base {base!r}")
            return mpmath.power(base, exponent)
    return exp(exponent * ln(base))


ELEMENTARY = {
    "sin": sin,
    "cos": cos,
    "sinh": sinh,
    "cosh": cosh,
    "exp": exp,
    "sqrt": sqrt,
    "ln": ln,
}


def jet_elementary(fn, a, exponent=None):
    if fn == "pow":
        return power(a, exponent)
    return ELEMENTARY[fn](a)


_STENCILS = {
    1: ({-1: -0.5, 1: 0.5}, 1),
    2: ({-1: 1.0, 0: -2.0, 1: 1.0}, 2),
    3: ({-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5}, 3),
    4: ({-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0}, 4),
}


def finite_difference_oracle(f, s0, k, h):
    """Second-order central-difference estimate of f^(k)(s0), k in 1..4.

    Works in the arithmetic of ``s0`` and ``h``: pass mpmath numbers to get
    an estimate free of double-precision cancellation.
    """
    if k not in _STENCILS:
        raise ValueError(f"finite differences only for k in 1..4, got {k}")
    weights, power_of_h = _STENCILS[k]
    total = 0
    for offset, w in weights.items():
        total = total + w * f(s0 + offset * h)
    return total / h**power_of_h

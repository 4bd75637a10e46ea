"""Exact p-adic scalar arithmetic.

Rationals are plain :class:`fractions.Fraction` values.  Elements of the
totally ramified extension ``Q[pi]/(pi^m - p)`` are :class:`EisensteinNumber`.
Valuations are returned as ``Fraction`` for nonzero input and :data:`INF`
(``math.inf``) for zero, so they compare and add naturally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import ParameterError

INF = math.inf

Valuation = Union[Fraction, float]
Scalar = Union[int, Fraction]

_TRIAL_LIMIT = 10**6


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Trial division primality test; refuses inputs needing factors above 10**6."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    root = math.isqrt(n)
    if root > _TRIAL_LIMIT:
        raise ParameterError(f"{n} is too large to certify prime by trial division")
    for q in range(3, root + 1, 2):
        if n % q == 0:
            return False
    return True


def require_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ParameterError(f"p = {p!r} is not a prime")
    return p


def prime_power_exponent(p: int, d: int) -> int | None:
    """Return e with d == p**e (e >= 1), or None if d is not such a power."""
    if d < p:
        return None
    e = 0
    while d % p == 0:
        d //= p
        e += 1
    return e if d == 1 else None


def vp_int(p: int, n: int) -> Valuation:
    """Exponent of p in the integer n; INF for n == 0."""
    require_prime(p)
    if n == 0:
        return INF
    n = abs(n)
    if p == 2:
        return Fraction((n & -n).bit_length() - 1)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return Fraction(e)


def vp_rational(p: int, q: Scalar) -> Valuation:
    q = Fraction(q)
    if q == 0:
        require_prime(p)
        return INF
    return vp_int(p, q.numerator) - vp_int(p, q.denominator)


def digit_sum(p: int, n: int) -> int:
    """Sum of the base-p digits of n >= 0."""
    if p < 2:
        raise ParameterError("base must be at least 2")
    if n < 0:
        raise ParameterError("digit_sum needs n >= 0")
    s = 0
    while n:
        n, r = divmod(n, p)
        s += r
    return s


def legendre_factorial_valuation(p: int, n: int) -> Fraction:
    """v_p(n!) from the digit-sum form (n - s_p(n)) / (p - 1)."""
    require_prime(p)
    if n < 0:
        raise ParameterError("factorial of a negative integer")
    return Fraction(n - digit_sum(p, n), p - 1)


def vp_factorial(p: int, n: int) -> int:
    """v_p(n!) as the floor sum  sum_i floor(n / p^i).

    Independent of :func:`legendre_factorial_valuation`; the two are
    cross-checked in the test suite.
    """
    require_prime(p)
    total, q = 0, p
    while q <= n:
        total += n // q
        q *= p
    return total


class EisensteinNumber:
    """Element of Q[pi]/(pi^m - p), stored as m rational coordinates.

    ``coeffs[j]`` is the coefficient of ``pi**j``.  Instances are immutable.
    """

    __slots__ = ("coeffs", "p", "m")

    def __init__(self, coeffs: Iterable[Scalar], p: int, m: int = 1):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if m < 1:
            raise ParameterError("ramification index m must be >= 1")
        if len(coeffs) != m:
            raise ParameterError(f"expected {m} coordinates, got {len(coeffs)}")
        require_prime(p)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "m", m)

    @classmethod
    def _make(cls, coeffs: tuple, p: int, m: int) -> "EisensteinNumber":
        # trusted constructor: coeffs already a tuple of m Fractions
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "m", m)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("EisensteinNumber is immutable")

    @classmethod
    def from_rational(cls, q: Scalar, p: int, m: int = 1) -> "EisensteinNumber":
        return cls([q] + [0] * (m - 1), p, m)

    @classmethod
    def zero(cls, p: int, m: int = 1) -> "EisensteinNumber":
        return cls.from_rational(0, p, m)

    @classmethod
    def one(cls, p: int, m: int = 1) -> "EisensteinNumber":
        return cls.from_rational(1, p, m)

    @classmethod
    def pi_power(cls, j: int, p: int, m: int) -> "EisensteinNumber":
        """pi**j for any integer j, using pi**m = p."""
        q, r = divmod(j, m)
        coeffs = [Fraction(0)] * m
        coeffs[r] = Fraction(p) ** q
        return cls(coeffs, p, m)

    # -- coercion -----------------------------------------------------------

    def _coerce(self, other) -> "EisensteinNumber":
        if isinstance(other, EisensteinNumber):
            if other.p != self.p or other.m != self.m:
                raise ParameterError(
                    f"field mismatch: (p={self.p}, m={self.m}) vs (p={other.p}, m={other.m})"
                )
            return other
        if isinstance(other, (int, Rational)):
            return EisensteinNumber._make(
                (Fraction(other),) + (Fraction(0),) * (self.m - 1), self.p, self.m
            )
        return NotImplemented

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return EisensteinNumber._make(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.p, self.m
        )

    __radd__ = __add__

    def __neg__(self):
        return EisensteinNumber._make(tuple(-a for a in self.coeffs), self.p, self.m)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return EisensteinNumber._make(
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.p, self.m
        )

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            f = Fraction(other)
            return EisensteinNumber._make(tuple(a * f for a in self.coeffs), self.p, self.m)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self.m
        if m == 1:
            return EisensteinNumber._make((self.coeffs[0] * other.coeffs[0],), self.p, 1)
        out = [Fraction(0)] * m
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                k = i + j
                # pi^k with k >= m carries one factor p: pi^k = p * pi^(k - m)
                if k >= m:
                    out[k - m] += self.p * a * b
                else:
                    out[k] += a * b
        return EisensteinNumber._make(tuple(out), self.p, m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # only rational divisors; general Eisenstein inversion is not offered
        if isinstance(other, EisensteinNumber):
            r = other.rational()
            if r is None or other.p != self.p or other.m != self.m:
                raise ParameterError("division only by rational scalars")
            other = r
        if not isinstance(other, (int, Rational)):
            return NotImplemented
        f = Fraction(other)
        if f == 0:
            raise ZeroDivisionError("division by zero")
        return EisensteinNumber._make(tuple(a / f for a in self.coeffs), self.p, self.m)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ParameterError("only non-negative integer powers are supported")
        result = EisensteinNumber.one(self.p, self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison and inspection -----------------------------------------

    def __eq__(self, other):
        if isinstance(other, EisensteinNumber):
            return (self.p, self.m, self.coeffs) == (other.p, other.m, other.coeffs)
        if isinstance(other, (int, Rational)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if self.m == 1 or not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.p, self.m, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def rational(self) -> Fraction | None:
        """The value as a Fraction if it lies in Q, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def valuation(self) -> Valuation:
        """v_p of this element, with v_p(pi) = 1/m.

        Each nonzero coordinate contributes v_p(coeff_j) + j/m.  These values
        have pairwise distinct fractional parts (j/m for distinct j < m), so
        the minimum is attained exactly once and no cancellation can occur.
        """
        best = INF
        for j, a in enumerate(self.coeffs):
            if a:
                v = vp_rational(self.p, a) + Fraction(j, self.m)
                if v < best:
                    best = v
        return best

    def __repr__(self):
        return f"EisensteinNumber({[str(a) for a in self.coeffs]}, p={self.p}, m={self.m})"

    def __str__(self):
        if self.m == 1:
            return rational_str(self.coeffs[0])
        terms = []
        for j, a in enumerate(self.coeffs):
            if a:
                terms.append(rational_str(a) + ("" if j == 0 else f"*pi^{j}"))
        return " + ".join(terms) if terms else "0/1"

    def to_json(self):
        """Rational string when m == 1, else ``{"coeffs": [...], "p": p, "m": m}``."""
        if self.m == 1:
            return rational_str(self.coeffs[0])
        return {"coeffs": [rational_str(a) for a in self.coeffs], "p": self.p, "m": self.m}


def as_eisenstein(x, p: int, m: int = 1) -> EisensteinNumber:
    if isinstance(x, EisensteinNumber):
        if (x.p, x.m) != (p, m):
            raise ParameterError(
                f"field mismatch: expected (p={p}, m={m}), got (p={x.p}, m={x.m})"
            )
        return x
    return EisensteinNumber.from_rational(x, p, m)


def valuation(x, p: int | None = None) -> Valuation:
    """v_p of an EisensteinNumber, or of an int/Fraction when p is given."""
    if isinstance(x, EisensteinNumber):
        return x.valuation()
    if p is None:
        raise ParameterError("a prime is required to value a rational")
    return vp_rational(p, x)


def rational_str(q: Scalar) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def valuation_str(v: Valuation) -> str:
    return "inf" if v == INF else rational_str(v)


@dataclass(frozen=True)
class CanonicalPartition:
    """n = sum_k digits[k] * d**k with digits[k] < d for k < N and digits[N] unbounded."""

    n: int
    d: int
    N: int
    digits: tuple

    def value(self) -> int:
        return sum(nk * self.d**k for k, nk in enumerate(self.digits))


def canonical_decompose(n: int, d: int, N: int) -> CanonicalPartition:
    if n < 1 or d < 2 or N < 0:
        raise ParameterError("canonical_decompose needs n >= 1, d >= 2, N >= 0")
    digits = []
    rest = n
    for _ in range(N):
        rest, r = divmod(rest, d)
        digits.append(r)
    digits.append(rest)
    return CanonicalPartition(n, d, N, tuple(digits))


def check_factorial_divisibility(d: int, k: int, nk: int) -> bool:
    """(d-1)!^(k*nk) * (d*k!)^nk * nk!  divides  (d*k*nk)!  (exact integer test)."""
    if d < 1 or k < 1 or nk < 0:
        raise ParameterError("check_factorial_divisibility needs d, k >= 1 and nk >= 0")
    divisor = (
        math.factorial(d - 1) ** (k * nk) * (d * math.factorial(k)) ** nk * math.factorial(nk)
    )
    return math.factorial(d * k * nk) % divisor == 0


def check_digit_exchange(p: int, d: int, n0: int, n1: int, m0: int, m1: int) -> bool:
    """v_p(m0! m1! / (n0! n1!)) <= (n1 - m1) v_p(d!)  whenever n0 + n1 d = m0 + m1 d."""
    require_prime(p)
    if prime_power_exponent(p, d) is None:
        raise ParameterError(f"d = {d} is not a power of p = {p}")
    if not 0 <= n0 < d or min(n1, m0, m1) < 0:
        raise ParameterError("need 0 <= n0 < d and n1, m0, m1 >= 0")
    if n0 + n1 * d != m0 + m1 * d:
        raise ParameterError("n0 + n1*d must equal m0 + m1*d")
    f = math.factorial
    lhs = vp_rational(p, Fraction(f(m0) * f(m1), f(n0) * f(n1)))
    rhs = (n1 - m1) * vp_int(p, f(d))
    return lhs <= rhs


def check_canonical_factorial(p: int, d: int, N: int, n: int) -> bool:
    """v_p(n!) == sum_k v_p((d^k)!^(n_k) * n_k!) over the canonical digits of n."""
    require_prime(p)
    if prime_power_exponent(p, d) is None:
        raise ParameterError(f"d = {d} is not a power of p = {p}")
    digits = canonical_decompose(n, d, N).digits
    rhs = sum(
        nk * vp_factorial(p, d**k) + vp_factorial(p, nk) for k, nk in enumerate(digits)
    )
    return vp_factorial(p, n) == rhs


def coerce_sequence(values: Sequence, p: int, m: int) -> tuple:
    return tuple(as_eisenstein(v, p, m) for v in values)

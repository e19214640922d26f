"""Exact p-adic scalars with per-element absolute-precision tracking.

A :class:`PadicScalar` is in one of three states:

* exact: it carries a :class:`~fractions.Fraction` and is known to infinite
  precision.  Arithmetic between exact scalars stays exact, so cancellation
  between rational-origin values produces a true zero.
* inexact nonzero: ``p**valuation * unit`` with ``unit`` known modulo
  ``p**prec``.
* inexact zero: congruent to 0 modulo ``p**bound``; its valuation is unknown.

Exact scalars also carry a nominal relative precision ``prec``; it is what
``unit`` is rendered to and what derived inexact values (square roots) get.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from sympy import isprime
from sympy.ntheory import sqrt_mod

from .errors import (
    DomainError,
    InvalidParams,
    InvalidRational,
    NotASquare,
    PrecisionExhausted,
)

DEFAULT_PRECISION = 32
INF = math.inf


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or p < 2 or not isprime(p):
        raise InvalidParams(f"{p!r} is not a prime")
    return p


def vp_int(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def parse_rational(q) -> Fraction:
    """Accept int, Fraction or a ``"num/den"`` string."""
    if isinstance(q, Fraction):
        return q
    if isinstance(q, bool):
        raise InvalidRational(f"not a rational: {q!r}")
    if isinstance(q, (int, Rational)):
        return Fraction(q)
    if isinstance(q, str):
        try:
            num, _, den = q.strip().partition("/")
            den_i = int(den) if den else 1
            num_i = int(num)
        except ValueError:
            raise InvalidRational(f"malformed rational {q!r}") from None
        if den_i == 0:
            raise InvalidRational(f"zero denominator in {q!r}")
        return Fraction(num_i, den_i)
    raise InvalidRational(f"not a rational: {q!r}")


class PadicScalar:
    __slots__ = ("p", "prec", "_exact", "_val", "_unit")

    def __init__(self, p, prec, exact=None, val=None, unit=None):
        self.p = p
        self.prec = prec
        self._exact = exact
        self._val = val
        self._unit = unit

    # -- constructors -------------------------------------------------------

    @classmethod
    def exact(cls, q, p: int, prec: int = DEFAULT_PRECISION) -> "PadicScalar":
        return cls(p, prec, exact=parse_rational(q))

    @classmethod
    def from_digits(cls, p: int, valuation: int, unit: int, prec: int) -> "PadicScalar":
        """Inexact ``p**valuation * unit`` with ``unit`` known mod ``p**prec``.

        ``unit`` need not be a unit; extra factors of p are absorbed into the
        valuation (shrinking the relative precision).
        """
        if prec < 1:
            return cls.zero_mod(p, valuation + max(prec, 0))
        m = p**prec
        unit %= m
        if unit == 0:
            return cls.zero_mod(p, valuation + prec)
        e = vp_int(unit, p)
        if e:
            unit //= p**e
            prec -= e
            valuation += e
            unit %= p**prec
        return cls(p, prec, val=valuation, unit=unit)

    @classmethod
    def zero_mod(cls, p: int, bound: int) -> "PadicScalar":
        """Inexact zero: known only to be divisible by ``p**bound``."""
        return cls(p, 0, val=bound, unit=0)

    # -- state --------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self._exact is not None

    @property
    def is_exact_zero(self) -> bool:
        return self._exact is not None and self._exact == 0

    @property
    def is_zero(self) -> bool:
        """Zero within the known precision (exact zero included)."""
        if self._exact is not None:
            return self._exact == 0
        return self._unit == 0

    def fraction(self) -> Fraction:
        if self._exact is None:
            raise DomainError("scalar is not of rational origin")
        return self._exact

    def _exact_digits(self):
        # (valuation, unit mod p**prec) of an exact nonzero value
        q = self._exact
        p = self.p
        num, den = q.numerator, q.denominator
        vn, vd = vp_int(num, p), vp_int(den, p)
        m = p**self.prec
        u = (num // p**vn) * pow(den // p**vd, -1, m) % m
        return vn - vd, u

    @property
    def valuation(self):
        if self._exact is not None:
            if self._exact == 0:
                return INF
            if self._val is None:
                self._val, self._unit = self._exact_digits()
            return self._val
        if self._unit == 0:
            raise PrecisionExhausted(
                f"value is 0 mod {self.p}^{self._val}; valuation undetermined"
            )
        return self._val

    @property
    def unit(self) -> int:
        """Unit part modulo ``p**prec`` (0 for zero)."""
        if self._exact is not None:
            if self._exact == 0:
                return 0
            if self._unit is None:
                self._val, self._unit = self._exact_digits()
            return self._unit
        return self._unit

    @property
    def abs_precision(self):
        if self._exact is not None:
            return INF
        if self._unit == 0:
            return self._val
        return self._val + self.prec

    def unit_digits(self, r: int) -> int:
        """Unit part modulo ``p**r``; needs ``r`` known digits."""
        if self._exact is not None:
            q = self._exact
            p = self.p
            num, den = q.numerator, q.denominator
            m = p**r
            return (num // p ** vp_int(num, p)) * pow(den // p ** vp_int(den, p), -1, m) % m
        if r > self.prec:
            raise PrecisionExhausted(f"need {r} unit digits, have {self.prec}")
        return self._unit % self.p**r

    def _residue_mod(self, v0: int, r: int) -> int:
        # integer X with self == p**v0 * X mod p**(v0 + r); requires v(self) >= v0
        if r <= 0:
            return 0
        if self.is_zero:
            return 0
        v = self.valuation
        shift = v - v0
        if shift >= r:
            return 0
        return self.unit_digits(r - shift) * self.p**shift

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise InvalidParams(f"mixed primes {self.p} and {other.p}")
            return other
        return PadicScalar.exact(other, self.p, self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        x, y = self, other
        if x._exact is not None and y._exact is not None:
            return PadicScalar(x.p, min(x.prec, y.prec), exact=x._exact + y._exact)
        if x.is_exact_zero:
            return y
        if y.is_exact_zero:
            return x
        p = x.p
        target = min(x.abs_precision, y.abs_precision)
        vx = x._val if x.is_zero else x.valuation
        vy = y._val if y.is_zero else y.valuation
        v0 = min(vx, vy)
        r = target - v0
        if r <= 0:
            return PadicScalar.zero_mod(p, target)
        s = (x._residue_mod(v0, r) + y._residue_mod(v0, r)) % p**r
        return PadicScalar.from_digits(p, v0, s, r)

    __radd__ = __add__

    def __neg__(self):
        if self._exact is not None:
            return PadicScalar(self.p, self.prec, exact=-self._exact)
        if self._unit == 0:
            return self
        return PadicScalar(self.p, self.prec, val=self._val, unit=(-self._unit) % self.p**self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        x, y = self, other
        if x._exact is not None and y._exact is not None:
            return PadicScalar(x.p, min(x.prec, y.prec), exact=x._exact * y._exact)
        if x.is_exact_zero or y.is_exact_zero:
            return PadicScalar(x.p, min(x.prec, y.prec), exact=Fraction(0))
        p = x.p
        if x.is_zero or y.is_zero:
            bx = x._val if x.is_zero else x.valuation
            by = y._val if y.is_zero else y.valuation
            return PadicScalar.zero_mod(p, bx + by)
        prec = min(x.prec if x._exact is None else INF, y.prec if y._exact is None else INF)
        m = p**prec
        u = x.unit_digits(prec) * y.unit_digits(prec) % m
        return PadicScalar(p, prec, val=x.valuation + y.valuation, unit=u)

    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        if self._exact is not None:
            if self._exact == 0:
                raise DomainError("inverse of exact zero")
            return PadicScalar(self.p, self.prec, exact=1 / self._exact)
        if self._unit == 0:
            raise PrecisionExhausted("inverse of a value indistinguishable from zero")
        m = self.p**self.prec
        return PadicScalar(self.p, self.prec, val=-self._val, unit=pow(self._unit, -1, m))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = PadicScalar(self.p, self.prec, exact=Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        """Equality within the known precision."""
        try:
            other = self._coerce(other)
        except (InvalidRational, InvalidParams):
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def with_precision(self, prec: int) -> "PadicScalar":
        """Same value, nominal relative precision ``prec`` (exact values only
        change their rendering; inexact ones are truncated, never extended)."""
        if self._exact is not None:
            return PadicScalar(self.p, prec, exact=self._exact)
        if self._unit == 0 or prec >= self.prec:
            return self
        return PadicScalar(self.p, prec, val=self._val, unit=self._unit % self.p**prec)

    # -- rendering -----------------------------------------------------------

    def literal(self) -> str:
        """``"p^v * u (mod p^k)"``; exact values render at nominal precision."""
        p = self.p
        if self.is_exact_zero:
            return "0"
        if self.is_zero:
            return f"0 (mod {p}^{self._val})"
        v = self.valuation
        return f"{p}^{v} * {self.unit} (mod {p}^{v + self.prec})"

    def to_json(self) -> str:
        if self._exact is not None:
            q = self._exact
            return f"{q.numerator}/{q.denominator}"
        return self.literal()

    def __repr__(self):
        if self._exact is not None:
            return f"PadicScalar({self._exact}, p={self.p})"
        return f"PadicScalar({self.literal()})"


def from_rational(q, p: int, N: int = DEFAULT_PRECISION) -> PadicScalar:
    if N < 1:
        raise InvalidParams("relative precision must be >= 1")
    check_prime(p)
    return PadicScalar.exact(q, p, N)


def valuation(x: PadicScalar):
    return x.valuation


def angular_component(x: PadicScalar) -> int:
    if x.is_exact_zero:
        raise DomainError("angular component of zero")
    return x.unit_digits(1)


# -- square classes ------------------------------------------------------------


@lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    """The pinned non-square unit: least positive quadratic nonresidue mod p."""
    if p == 2:
        raise InvalidParams("no residue-field nonsquare for p = 2")
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            return a
    raise AssertionError("unreachable")


def is_qr(a: int, p: int) -> bool:
    """Euler criterion for a unit residue a mod odd p."""
    return pow(a % p, (p - 1) // 2, p) == 1


def square_class_representatives(p: int) -> tuple[int, ...]:
    if p == 2:
        return (1, -1, 2, -2, 5, -5, 10, -10)
    a = least_nonresidue(p)
    return (1, a, p, a * p)


@dataclass(frozen=True)
class SquareClass:
    """A coset of the squares in Q_p^x, named by its canonical representative."""

    p: int
    representative: int

    @property
    def is_trivial(self) -> bool:
        return self.representative == 1

    @property
    def class_id(self) -> str:
        if self.p == 2:
            return str(self.representative)
        a = least_nonresidue(self.p)
        return {1: "1", a: "alpha", self.p: "p", a * self.p: "alpha*p"}[self.representative]

    @property
    def ramified(self) -> bool:
        return self.representative % self.p == 0

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        prod = from_rational(self.representative * other.representative, self.p, 8)
        return square_class(prod)

    def __str__(self):
        return str(self.representative)


def square_class(x: PadicScalar) -> SquareClass:
    p = x.p
    if x.is_zero:
        if x.is_exact:
            raise DomainError("zero has no square class")
        raise PrecisionExhausted("square class of a value indistinguishable from zero")
    v = x.valuation
    odd = v % 2
    if p == 2:
        u = x.unit_digits(3)
        rep = {1: 1, 3: -5, 5: 5, 7: -1}[u]
        return SquareClass(2, rep * 2 if odd else rep)
    a = least_nonresidue(p)
    unit_rep = 1 if is_qr(x.unit_digits(1), p) else a
    return SquareClass(p, unit_rep * p if odd else unit_rep)


def _is_rational_square(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def _canonical_sign(unit: int, p: int, m: int) -> int:
    # +-root choice: ac in 1..(p-1)/2 for odd p, unit = 1 mod 4 for p = 2
    if p == 2:
        return unit if unit % 4 == 1 else (-unit) % m
    return unit if unit % p <= (p - 1) // 2 else (-unit) % m


def sqrt_unit_mod(u: int, p: int, k: int) -> int:
    """A square root of the unit ``u`` modulo ``p**k`` (odd p) by Newton lifting
    of a root modulo p.  Requires ``u`` to be a quadratic residue mod p."""
    r = sqrt_mod(u % p, p)
    if r is None:
        raise NotASquare(f"{u} is not a square mod {p}")
    j = 1
    while j < k:
        j = min(2 * j, k)
        m = p**j
        r = (r - (r * r - u) * pow(2 * r, -1, m)) % m
    return r


def sqrt_unit_mod_2k(u: int, k: int) -> int:
    """A square root of ``u = 1 mod 8`` determined modulo ``2**(k-1)``."""
    if u % 8 != 1:
        raise NotASquare(f"{u} is not 1 mod 8")
    r = 1
    for j in range(3, k):
        # invariant r*r = u mod 2**j
        if (r * r - u) % 2 ** (j + 1):
            r += 2 ** (j - 1)
    return r % 2 ** (k - 1)


def hensel_sqrt(x: PadicScalar) -> PadicScalar:
    """Square root of a p-adic square, lifted to all available precision.

    The sign is normalised so that the output is deterministic: for odd p the
    angular component lies in ``1..(p-1)/2``; for p = 2 the unit part is 1 mod 4.
    """
    p = x.p
    if x.is_exact_zero:
        return x
    sc = square_class(x)
    if not sc.is_trivial:
        raise NotASquare(f"{x!r} lies in square class {sc.representative}")
    if x.is_exact:
        root = _is_rational_square(x.fraction())
        if root is not None:
            r = PadicScalar.exact(root, p, x.prec)
            if r.unit != _canonical_sign(r.unit, p, p**r.prec):
                r = -r
            return r
    v = x.valuation
    n = x.prec
    u = x.unit_digits(n)
    if p == 2:
        if n < 3:
            raise PrecisionExhausted("need three unit digits for a 2-adic root")
        r = sqrt_unit_mod_2k(u, n)
        n -= 1
    else:
        r = sqrt_unit_mod(u, p, n)
    r = _canonical_sign(r, p, p**n)
    return PadicScalar(p, n, val=v // 2, unit=r)


def teichmuller(residue: int, p: int, prec: int) -> PadicScalar:
    """The root of unity lifting a nonzero residue (odd p), or +-1 for p = 2."""
    if residue % p == 0:
        raise DomainError("Teichmuller lift of zero residue")
    if p == 2:
        return PadicScalar.exact(1, 2, prec)
    m = p**prec
    w = residue % p
    # w -> w**p converges to the root of unity congruent to w
    for _ in range(prec):
        w = pow(w, p, m)
    if w == 1:
        return PadicScalar.exact(1, p, prec)
    if w == m - 1:
        return PadicScalar.exact(-1, p, prec)
    return PadicScalar(p, prec, val=0, unit=w)

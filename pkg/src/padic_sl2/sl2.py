"""2x2 matrices over Q_p with the determinant-one contract."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InvalidParams, InvariantViolation, PrecisionExhausted
from .padic import DEFAULT_PRECISION, PadicScalar, check_prime, vp_int


@dataclass(frozen=True, eq=False)
class Mat2:
    """Row-major ``[[a, b], [c, d]]``."""

    a: PadicScalar
    b: PadicScalar
    c: PadicScalar
    d: PadicScalar

    @property
    def p(self) -> int:
        return self.a.p

    @property
    def prec(self) -> int:
        return min(x.prec for x in self.entries)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @classmethod
    def of(cls, rows, p: int, prec: int = DEFAULT_PRECISION, check: bool = True) -> "Mat2":
        """Build from nested rows of rationals or scalars; checks det = 1."""
        check_prime(p)
        (a, b), (c, d) = rows
        ents = [x if isinstance(x, PadicScalar) else PadicScalar.exact(x, p, prec) for x in (a, b, c, d)]
        m = cls(*ents)
        if check and not m.det() == 1:
            raise InvalidParams(f"determinant of {m} is not 1")
        return m

    @classmethod
    def identity(cls, p: int, prec: int = DEFAULT_PRECISION) -> "Mat2":
        return cls.of([[1, 0], [0, 1]], p, prec, check=False)

    @classmethod
    def diag(cls, t, p: int, prec: int = DEFAULT_PRECISION) -> "Mat2":
        """``diag(t, 1/t)``."""
        t = t if isinstance(t, PadicScalar) else PadicScalar.exact(t, p, prec)
        return cls(t, t * 0, t * 0, t.inverse())

    @classmethod
    def omega(cls, p: int, prec: int = DEFAULT_PRECISION) -> "Mat2":
        return cls.of([[0, 1], [-1, 0]], p, prec, check=False)

    def det(self) -> PadicScalar:
        return self.a * self.d - self.b * self.c

    def trace(self) -> PadicScalar:
        return self.a + self.d

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return all(x == y for x, y in zip(self.entries, other.entries))

    __hash__ = None

    @property
    def is_exact(self) -> bool:
        return all(x.is_exact for x in self.entries)

    def is_scalar(self, sign: int) -> bool:
        return self.b.is_zero and self.c.is_zero and self.a == sign and self.d == sign

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def to_json(self):
        return [[x.to_json() for x in row] for row in self.rows()]

    def fractions(self):
        return [[x.fraction() for x in row] for row in self.rows()]

    def __repr__(self):
        return f"Mat2({self.to_json()}, p={self.p})"


def mat_mul(x: Mat2, y: Mat2) -> Mat2:
    return Mat2(
        x.a * y.a + x.b * y.c,
        x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c,
        x.c * y.b + x.d * y.d,
    )


def mat_inv(x: Mat2) -> Mat2:
    """Adjugate; equals the inverse because det = 1."""
    return Mat2(x.d, -x.b, -x.c, x.a)


def conjugate(x: Mat2, g: Mat2) -> Mat2:
    """``g^-1 x g``."""
    return mat_mul(mat_mul(mat_inv(g), x), g)


def mat_pow(x: Mat2, n: int) -> Mat2:
    if n < 0:
        return mat_pow(mat_inv(x), -n)
    result = Mat2.identity(x.p, x.prec)
    base = x
    while n:
        if n & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        n >>= 1
    return result


def scale(x: Mat2, s) -> Mat2:
    return Mat2(*(e * s for e in x.entries))


def matrix_valuation(x: Mat2):
    """Minimum entry valuation; zero entries (exact or at precision) are skipped."""
    vals = [e.valuation for e in x.entries if not e.is_zero]
    if not vals:
        raise DomainError("zero matrix")
    m = min(vals)
    if any(e.is_zero and not e.is_exact and e.abs_precision < m for e in x.entries):
        raise PrecisionExhausted("an entry is zero only to a precision below the minimum")
    return m


@dataclass(frozen=True, eq=False)
class BruhatForm:
    cell: str  # "B" or "BwB"
    left: Mat2
    right: Mat2 | None = None

    def reconstruct(self) -> Mat2:
        if self.cell == "B":
            return self.left
        return mat_mul(mat_mul(self.left, Mat2.omega(self.left.p, self.left.prec)), self.right)


def bruhat_decompose(x: Mat2) -> BruhatForm:
    """``x = left`` if upper triangular, else ``left . omega . right``.

    In the big cell the left factor is the unipotent ``[[1, a/c], [0, 1]]`` and
    the right factor ``[[-c, -d], [0, -1/c]]`` carries the torus part.
    """
    if x.c.is_exact_zero:
        return BruhatForm("B", x)
    if x.c.is_zero:
        raise PrecisionExhausted("lower-left entry indistinguishable from zero")
    one = x.c * 0 + 1
    left = Mat2(one, x.a / x.c, one * 0, one)
    right = Mat2(-x.c, -x.d, one * 0, -(x.c.inverse()))
    return BruhatForm("BwB", left, right)


def _checked(lhs: Mat2, rhs: Mat2, name: str) -> Mat2:
    if not lhs == rhs:
        raise InvariantViolation(f"relation {name} failed: {lhs} != {rhs}")
    return rhs


def _as_scalar(t, p, prec):
    return t if isinstance(t, PadicScalar) else PadicScalar.exact(t, p, prec)


def relation_R1(t, p: int | None = None, prec: int = DEFAULT_PRECISION) -> Mat2:
    """``[[0, t], [-1/t, 0]]``, checked against the product of three unipotents."""
    t = _as_scalar(t, p, prec)
    if t.is_zero:
        raise DomainError("R1 needs t != 0")
    zero, one = t * 0, t * 0 + 1
    up = Mat2(one, t, zero, one)
    low = Mat2(one, zero, -t.inverse(), one)
    return _checked(mat_mul(mat_mul(up, low), up), Mat2(zero, t, -t.inverse(), zero), "R1")


def relation_R2(t, p: int | None = None, prec: int = DEFAULT_PRECISION) -> Mat2:
    """``diag(t, 1/t)``, checked against ``R1(t) . [[0, -1], [1, 0]]``."""
    t = _as_scalar(t, p, prec)
    zero, one = t * 0, t * 0 + 1
    w_inv = Mat2(zero, -one, one, zero)
    return _checked(mat_mul(relation_R1(t), w_inv), Mat2(t, zero, zero, t.inverse()), "R2")


def random_rational(rng, height: int) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_sl2(rng, p: int, prec: int = DEFAULT_PRECISION, height: int = 50) -> Mat2:
    """Random det-1 matrix: bounded-height a, b, c and d = (1 + bc)/a."""
    while True:
        a = random_rational(rng, height)
        if a != 0:
            break
    b = random_rational(rng, height)
    c = random_rational(rng, height)
    return Mat2.of([[a, b], [c, (1 + b * c) / a]], p, prec, check=False)


def random_sl2_integral(rng, p: int, prec: int = DEFAULT_PRECISION, height: int = 50) -> Mat2:
    """Random element of SL_2(Z_p) with rational-origin entries."""
    while True:
        a = rng.randint(-height, height)
        if a % p:
            break
    b = rng.randint(-height, height)
    c = rng.randint(-height, height)
    # (1 + bc)/a is p-integral because a is a p-adic unit
    return Mat2.of([[a, b], [c, Fraction(1 + b * c, a)]], p, prec, check=False)


def reduce_mod(x: Mat2, k: int) -> tuple[int, int, int, int]:
    """Image of an SL_2(Z_p) matrix in SL_2(Z/p^k)."""
    p = x.p
    m = p**k
    out = []
    for e in x.entries:
        if e.is_zero:
            if not e.is_exact and e.abs_precision < k:
                raise PrecisionExhausted("entry not known mod p^k")
            out.append(0)
            continue
        v = e.valuation
        if v < 0:
            raise DomainError("matrix is not integral")
        out.append(e.unit_digits(max(k - v, 0)) * p**v % m if v < k else 0)
    return tuple(out)


def vp_fraction(q: Fraction, p: int):
    if q == 0:
        return math.inf
    return vp_int(q.numerator, p) - vp_int(q.denominator, p)

"""Brute-force verification over the finite groups SL_2(Z/p^k Z).

Nothing here uses the p-adic machinery except :func:`lift_and_classify`,
which exists to compare the two.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ..errors import TooLarge, UnsupportedCase
from ..padic import check_prime
from . import _kernels
from ._kernels import BACKEND, HAVE_NUMBA, group_order

SIZE_GUARD = 10**8

__all__ = [
    "BACKEND",
    "HAVE_NUMBA",
    "ClassCounts",
    "ClosureResult",
    "FiniteGroupTable",
    "class_counts_mod_p",
    "closure_check",
    "enumerate_sl2",
    "group_order",
    "lift_and_classify",
    "member_mask",
    "norm_one_count",
    "norm_one_shadow",
]


@dataclass(frozen=True, eq=False)
class FiniteGroupTable:
    p: int
    k: int
    elements: np.ndarray  # (order, 4) rows a, b, c, d in lexicographic order

    @property
    def modulus(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    def __len__(self):
        return self.order


def enumerate_sl2(p: int, k: int, backend: str | None = None) -> FiniteGroupTable:
    check_prime(p)
    if k < 1:
        raise ValueError("level k must be >= 1")
    if p ** (3 * k) > SIZE_GUARD:
        raise TooLarge(f"p^(3k) = {p}^{3 * k} exceeds {SIZE_GUARD}")
    elements = _kernels.enumerate_sl2_array(p, k, backend)
    elements.setflags(write=False)
    return FiniteGroupTable(p, k, elements)


class ClassCounts(NamedTuple):
    central: int
    unipotent_like: int
    split_like: int
    aniso_like: int
    undetermined: int

    @property
    def total(self) -> int:
        return sum(self)


def class_counts_mod_p(table: FiniteGroupTable, backend: str | None = None) -> ClassCounts:
    """Bucket SL_2(F_p) by the residue of tr^2 - 4.

    A zero residue does not determine the class over Q_p, so those elements
    are ``undetermined``; ``unipotent_like`` stays 0 because no residue-level
    test certifies unipotence.  For p = 2 a unit residue does not decide the
    square class either (that needs the unit mod 8), so every noncentral
    element is undetermined.
    """
    if table.k != 1:
        raise UnsupportedCase("class buckets are defined at level k = 1")
    p = table.p
    central, zero, res, non = (int(x) for x in _kernels.residue_buckets(table.elements, p, backend))
    if p == 2:
        return ClassCounts(central, 0, 0, 0, zero + res + non)
    return ClassCounts(central, 0, res, non, zero)


def _rational_lift(row, p: int):
    """A det-1 rational matrix reducing to the given row mod p."""
    a, b, c, d = (int(x) for x in row)
    if a % p:
        return [[a, b], [c, Fraction(1 + b * c, a)]]
    if d % p:
        return [[Fraction(1 + b * c, d), b], [c, d]]
    # a = d = 0 mod p, so bc = -1 mod p and b is a unit
    return [[a, b], [Fraction(a * d - 1, b), d]]


def lift_and_classify(table: FiniteGroupTable, prec: int = 8) -> dict[str, int]:
    """Classify a rational lift of every element whose discriminant is a unit.

    Returns counts of ``split`` and ``anisotropic`` verdicts, to be compared
    with :func:`class_counts_mod_p`.
    """
    from ..classify import classify
    from ..sl2 import Mat2

    p = table.p
    out = {"split": 0, "anisotropic": 0}
    for row in table.elements:
        a, b, c, d = (int(x) for x in row)
        if ((a + d) ** 2 - 4) % p == 0:
            continue
        m = Mat2.of(_rational_lift(row, p), p, prec)
        kind = classify(m).kind
        if kind in out:
            out[kind] += 1
    return out


def _filtration_exponents(p: int, k: int, delta: int, level: int):
    vd = 1 if delta % p == 0 else 0
    e = 2 * level + vd - (1 if p == 2 else 0)
    return min(max(e, 0), k), min(level, k)


def norm_one_shadow(p: int, k: int, delta: int, level: int | None = None) -> np.ndarray:
    """Rows (a, b) mod p^k that reduce from Z_p-points of a^2 - delta b^2 = 1,
    optionally inside the level-n filtration subgroup.

    For odd p the conic is smooth mod p and every solution mod p^k lifts.  For
    p = 2 it is not, so solutions are taken mod 2^(k+2) and reduced: a root
    mod 2^(k+2) of a unit square agrees with a true root mod 2^(k+1).
    """
    check_prime(p)
    extra = 2 if p == 2 else 0
    M, m = p ** (k + extra), p**k
    if M * M > SIZE_GUARD:
        raise TooLarge("modulus too large for exhaustive scan")
    a = np.arange(M, dtype=np.int64)[:, None]
    b = np.arange(M, dtype=np.int64)[None, :]
    ok = (a * a - delta * b * b - 1) % M == 0
    if level is not None:
        ea, eb = _filtration_exponents(p, k, delta, level)
        ok &= (b % p**eb == 0) & ((a - 1) % p**ea == 0)
    A, B = np.nonzero(ok)
    rows = np.stack([A % m, B % m], axis=1)
    return np.unique(rows, axis=0) if extra else rows


def norm_one_count(p: int, k: int, delta: int, level: int | None = None, backend: str | None = None) -> int:
    """Size of :func:`norm_one_shadow`.  Odd p uses the histogram kernel: the
    level-n restriction is b = 0 mod p^n and a = 1 mod p^(2n + v(delta)),
    exponents capped at k (2n - 1 + v(delta) for p = 2)."""
    check_prime(p)
    if p == 2:
        return len(norm_one_shadow(p, k, delta, level))
    if p ** (2 * k) > SIZE_GUARD:
        raise TooLarge("modulus too large for exhaustive scan")
    a_mod = b_mod = 1
    if level is not None:
        ea, eb = _filtration_exponents(p, k, delta, level)
        a_mod, b_mod = p**ea, p**eb
    return _kernels.norm_one_count_raw(p**k, delta, a_mod, b_mod, backend)


def member_mask(table: FiniteGroupTable, descriptor) -> np.ndarray:
    """Rows of ``table`` lying in the reduction of ``descriptor`` mod p^k."""
    p, k, m = table.p, table.k, table.modulus
    E = table.elements
    a, b, c, d = (E[:, t] for t in range(4))
    D = descriptor
    if D.conjugator is not None or D.centralizes is not None:
        raise UnsupportedCase("conjugated descriptors are not reduced mod p^k")

    def div(x, e):
        if e < 0:
            raise UnsupportedCase("negative exponent: set is not integral")
        return x % (p ** min(e, k)) == 0

    def one(x, e):
        return div(x - 1, e)

    v = D.variant
    if v == "SL2O":
        return np.ones(len(E), dtype=bool)
    if v == "Congruence":
        return one(a, D.gamma) & one(d, D.gamma) & div(b, D.eta1) & div(c, D.eta2)
    if v == "Borel":
        return c == 0
    if v == "U":
        return (c == 0) & (a == d) & ((a == 1 % m) | (a == m - 1))
    if v == "Uplus":
        return (c == 0) & (a == 1 % m) & (d == 1 % m)
    if v == "Q1":
        return (b == 0) & (c == 0)
    if v == "NQ1":
        return ((b == 0) & (c == 0)) | ((a == 0) & (d == 0))
    if v == "Qdelta":
        return (a == d) & (c == (D.delta * b) % m)
    if v == "Zfilt":
        shape = (a == d) & (c == (D.delta * b) % m)
        e = 2 * D.n + (1 if D.delta % p == 0 else 0) - (1 if p == 2 else 0)
        return shape & div(b, D.n) & one(a, e)
    if v == "AdditiveA":
        return (c == 0) & (a == 1 % m) & (d == 1 % m) & div(b, D.gamma)
    if v == "MultP" and D.n == 0:
        return (b == 0) & (c == 0) & one(a, D.gamma0)
    if v == "BorelParam":
        return (c == 0) & one(a, D.mult.gamma0) & div(b, D.add.gamma)
    raise UnsupportedCase(f"{v} has no reduction mod p^k")


@dataclass(frozen=True)
class ClosureResult:
    closed: bool
    size: int
    counterexample: tuple | None = None  # (x, y) rows with x*y outside, or (x,) with x^-1 outside

    def __bool__(self):
        return self.closed

    def to_json(self) -> dict:
        out = {"closed": self.closed, "size": self.size}
        if self.counterexample is not None:
            out["counterexample"] = [list(map(int, r)) for r in self.counterexample]
        return out


def closure_check(table: FiniteGroupTable, descriptor, backend: str | None = None) -> ClosureResult:
    """Exhaustively test the reduced member set for closure under products
    and inverses."""
    S = table.elements[member_mask(table, descriptor)]
    kind, i, j = _kernels.closure_search(S, table.modulus, backend)
    if kind == -1:
        return ClosureResult(True, len(S))
    row = lambda r: tuple(int(x) for x in r)  # noqa: E731
    if kind == 1:
        return ClosureResult(False, len(S), (row(S[i]),))
    return ClosureResult(False, len(S), (row(S[i]), row(S[j])))


def mat_mul_mod(x, y, m: int):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % m, (a * f + b * h) % m, (c * e + d * g) % m, (c * f + d * h) % m)

"""The field reconstructed from group words in SL_2.

An element is a pair ``(t0, t1)`` of torus parameters standing for the
unipotent word ``u0^t0 . u1^t1``, where ``u^t`` is conjugation of ``u`` by
``diag(t, 1/t)``.  Two pairs are equal as field elements iff their words are
equal matrices; addition concatenates words, multiplication uses the
four-factor word with product exponents.
"""
from __future__ import annotations

from dataclasses import dataclass

from .padic import DEFAULT_PRECISION, PadicScalar
from .sl2 import Mat2, mat_inv, mat_mul


@dataclass(frozen=True, eq=False)
class GroupFieldElement:
    t0: PadicScalar
    t1: PadicScalar

    def __eq__(self, other):
        """Equality as field elements (the word relation)."""
        if not isinstance(other, GroupFieldElement):
            return NotImplemented
        return word(self) == word(other)

    __hash__ = None


def u0(p: int, prec: int = DEFAULT_PRECISION) -> Mat2:
    return Mat2.of([[1, 1], [0, 1]], p, prec, check=False)


def u1(p: int, prec: int = DEFAULT_PRECISION) -> Mat2:
    return mat_inv(u0(p, prec))


def torus_action(u: Mat2, t: PadicScalar) -> Mat2:
    """``diag(t, 1/t) u diag(1/t, t)``; the zero exponent gives the identity."""
    if t.is_exact_zero:
        return Mat2.identity(u.p, u.prec)
    d = Mat2.diag(t, u.p)
    return mat_mul(mat_mul(d, u), mat_inv(d))


def word(e: GroupFieldElement) -> Mat2:
    p, prec = e.t0.p, e.t0.prec
    return mat_mul(torus_action(u0(p, prec), e.t0), torus_action(u1(p, prec), e.t1))


def _scalar(x, p, prec):
    return x if isinstance(x, PadicScalar) else PadicScalar.exact(x, p, prec)


def encode(x, p: int | None = None, prec: int = DEFAULT_PRECISION) -> GroupFieldElement:
    """``x -> ((x + 1)/2, (x - 1)/2)``."""
    x = _scalar(x, p, prec)
    return GroupFieldElement((x + 1) / 2, (x - 1) / 2)


def decode(e: GroupFieldElement) -> PadicScalar:
    """The upper-right entry of the word, i.e. t0^2 - t1^2."""
    return word(e).b


def gf_add(e: GroupFieldElement, f: GroupFieldElement) -> GroupFieldElement:
    return encode(mat_mul(word(e), word(f)).b)


def mul_word(e: GroupFieldElement, f: GroupFieldElement) -> Mat2:
    """``u0^(t0 t0') u0^(t1 t1') u1^(t0 t1') u1^(t1 t0')``."""
    p, prec = e.t0.p, e.t0.prec
    U0, U1 = u0(p, prec), u1(p, prec)
    factors = [
        torus_action(U0, e.t0 * f.t0),
        torus_action(U0, e.t1 * f.t1),
        torus_action(U1, e.t0 * f.t1),
        torus_action(U1, e.t1 * f.t0),
    ]
    out = factors[0]
    for g in factors[1:]:
        out = mat_mul(out, g)
    return out


def gf_mul(e: GroupFieldElement, f: GroupFieldElement) -> GroupFieldElement:
    return encode(mul_word(e, f).b)

"""The trace-valuation sets W, W' and their covering behaviour.

W = {A : v(tr A) < 0} is covered by four left translates; W' is not covered
by any finite family, and :func:`escape_Wprime` produces an explicit element
outside a given family of W'-translates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .classify import SPLIT, classify
from .errors import InvalidParams, InvariantViolation, NoCoverIndex, PrecisionExhausted
from .padic import DEFAULT_PRECISION, PadicScalar
from .sl2 import Mat2, mat_inv, mat_mul


def trace_valuation(x: Mat2):
    return x.trace().valuation if not x.trace().is_exact_zero else float("inf")


def in_W(x: Mat2) -> bool:
    t = x.trace()
    if t.is_exact_zero:
        return False
    if t.is_zero:
        if t.abs_precision >= 0:
            return False
        raise PrecisionExhausted("trace valuation undecidable")
    return t.valuation < 0


def in_Wprime(x: Mat2) -> bool:
    return not in_W(x)


@dataclass(frozen=True, eq=False)
class CoverWitness:
    translates: tuple[Mat2, Mat2, Mat2, Mat2]
    a: PadicScalar
    b: PadicScalar


def standard_cover(a, b, p: int | None = None, prec: int = DEFAULT_PRECISION) -> CoverWitness:
    """``I, omega, diag(1/a, a), [[0, -1/b], [b, 0]]`` for v(a), v(b) > 0."""
    if not isinstance(a, PadicScalar):
        a = PadicScalar.exact(a, p, prec)
    if not isinstance(b, PadicScalar):
        b = PadicScalar.exact(b, a.p, prec)
    for name, s in (("a", a), ("b", b)):
        if s.is_zero or s.valuation <= 0:
            raise InvalidParams(f"cover parameter {name} needs positive valuation")
    p = a.p
    zero = a * 0
    translates = (
        Mat2.identity(p, prec),
        Mat2.omega(p, prec),
        Mat2(a.inverse(), zero, zero, a),
        Mat2(zero, -b.inverse(), b, zero),
    )
    return CoverWitness(translates, a, b)


def default_cover(p: int, prec: int = DEFAULT_PRECISION) -> CoverWitness:
    return standard_cover(p, p, p, prec)


def cover_membership(x: Mat2, cover: CoverWitness) -> int:
    """Least 1-based i with ``A_i^-1 x`` in W."""
    for i, t in enumerate(cover.translates, start=1):
        if in_W(mat_mul(mat_inv(t), x)):
            return i
    raise NoCoverIndex(f"{x} lies in no translate of W")


@dataclass(frozen=True, eq=False)
class EscapeWitness:
    """``matrix = h . diag(x, 1/x) . h^-1`` with ``h = [[1, shift], [0, 1]]``."""

    x: PadicScalar
    matrix: Mat2
    shift: int = 0

    @property
    def conjugator(self) -> Mat2:
        return Mat2.of([[1, self.shift], [0, 1]], self.x.p, self.x.prec, check=False)


def _abs_val(s: PadicScalar) -> int:
    return 0 if s.is_exact_zero else abs(s.valuation)


def _shifted_diagonals(inv: Mat2, s: int):
    # diagonal of h^-1 B h for h = [[1, s], [0, 1]]
    return inv.a - inv.c * s, inv.d + inv.c * s


def escape_Wprime(translates) -> EscapeWitness:
    """An element outside every ``A_j W'`` for the given finite family.

    With ``A_j^-1 = [[a, *], [*, d]]``, ``tr(A_j^-1 diag(x, 1/x)) = a x + d/x``
    has negative valuation once v(x) exceeds every |v(a)|, |v(d)|, provided
    a and d are nonzero.  Translates with a zero diagonal entry (omega among
    them) are handled by first conjugating the family by a unipotent
    ``h = [[1, s], [0, 1]]``; s = 0 is used whenever it already works.
    """
    translates = list(translates)
    if not translates:
        raise InvalidParams("need at least one translate")
    p = translates[0].p
    prec = min(t.prec for t in translates)
    invs = [mat_inv(t) for t in translates]
    # each translate rules out at most two shifts (roots of linear forms)
    for s in range(2 * len(invs) + 1):
        diags = [_shifted_diagonals(inv, s) for inv in invs]
        if all(not (u.is_zero or w.is_zero) for u, w in diags):
            break
    else:
        raise InvariantViolation("no unipotent shift clears the diagonals")
    m = max(max(_abs_val(u), _abs_val(w)) for u, w in diags)
    x = PadicScalar.exact(p ** (m + 1), p, prec)
    h = Mat2.of([[1, s], [0, 1]], p, prec, check=False)
    escape = mat_mul(mat_mul(h, Mat2.diag(x, p, prec)), mat_inv(h))
    for inv in invs:
        if not in_W(mat_mul(inv, escape)):
            raise InvariantViolation("escape witness lands in a W' translate")
    return EscapeWitness(x, escape, s)


def w_implies_split(x: Mat2) -> bool:
    """Whether an element of W classifies as split (always true for Q_p)."""
    if not in_W(x):
        raise InvalidParams("element is not in W")
    return classify(x).kind == SPLIT


def sample_W(rng, p: int, prec: int = DEFAULT_PRECISION, max_shift: int = 4, height: int = 20) -> Mat2:
    """``diag(x, 1/x) . R`` with x = p**-k and R a random integral det-1
    factor, retried until the trace has negative valuation."""
    from .sl2 import random_sl2_integral

    while True:
        k = rng.randint(1, max_shift)
        sign = rng.choice((1, -1))
        x = Mat2.diag(PadicScalar.exact(Fraction(sign * rng.choice((1, 3, 7, 11)), p**k), p, prec), p, prec)
        m = mat_mul(x, random_sl2_integral(rng, p, prec, height))
        if in_W(m):
            return m

"""Conjugacy type of SL_2(Q_p) elements from the trace discriminant."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import PrecisionExhausted, WrongClass
from .padic import SquareClass, hensel_sqrt, square_class
from .sl2 import Mat2, mat_mul

CENTRAL = "central"
UNIPOTENT = "unipotent"
SPLIT = "split"
ANISOTROPIC = "anisotropic"


@dataclass(frozen=True)
class ElementClass:
    kind: str
    sign: int | None = None
    delta: SquareClass | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.sign is not None:
            out["sign"] = "+" if self.sign > 0 else "-"
        if self.delta is not None:
            out["delta"] = str(self.delta.representative)
        return out

    def __str__(self):
        if self.kind == ANISOTROPIC:
            return f"anisotropic({self.delta.representative})"
        if self.sign is not None:
            return f"{self.kind}({'+' if self.sign > 0 else '-'})"
        return self.kind


def discriminant(x: Mat2):
    t = x.trace()
    return t * t - 4


def classify(x: Mat2) -> ElementClass:
    """Central, unipotent, split or anisotropic (with the class of tr^2 - 4)."""
    if x.b.is_zero and x.c.is_zero:
        for sign in (1, -1):
            if x.a == sign and x.d == sign:
                return ElementClass(CENTRAL, sign=sign)
    disc = discriminant(x)
    if disc.is_exact_zero:
        return ElementClass(UNIPOTENT, sign=1 if x.trace() == 2 else -1)
    if disc.is_zero:
        raise PrecisionExhausted("tr^2 - 4 vanishes to the available precision")
    sc = square_class(disc)
    if sc.is_trivial:
        return ElementClass(SPLIT)
    return ElementClass(ANISOTROPIC, delta=sc)


def eigenvalues_split(x: Mat2):
    """``(lam, 1/lam)`` with ``lam = (tr - s) / 2``, s the canonical root of tr^2 - 4."""
    t = x.trace()
    s = hensel_sqrt(t * t - 4)
    return (t - s) / 2, (t + s) / 2


def diagonalize_split(x: Mat2) -> Mat2:
    """A det-1 conjugator ``P`` with ``P^-1 x P`` diagonal.

    The columns are eigenvectors; the first is divided by det of the raw
    eigenvector matrix so the determinant becomes one.
    """
    cls = classify(x)
    if cls.kind != SPLIT:
        raise WrongClass(f"expected a split element, got {cls}")
    if x.b.is_exact_zero and x.c.is_exact_zero:
        return Mat2.identity(x.p, x.prec)
    lam, mu = eigenvalues_split(x)
    if not x.c.is_zero:
        v = (lam - x.d, x.c)
        w = (mu - x.d, x.c)
    else:
        v = (x.b, lam - x.a)
        w = (x.b, mu - x.a)
    det = v[0] * w[1] - w[0] * v[1]
    return Mat2(v[0] / det, w[0], v[1] / det, w[1])


def commutes(x: Mat2, y: Mat2) -> bool:
    return mat_mul(x, y) == mat_mul(y, x)


def cartan_of(x: Mat2):
    """Descriptor of the Cartan subgroup containing a semisimple noncentral x.

    Split elements give Q1 conjugated by :func:`diagonalize_split`; anisotropic
    ones give Q_delta tagged with ``x`` itself, whose centralizer is the group.
    """
    from .subgroups import SubgroupDescriptor

    cls = classify(x)
    if cls.kind == SPLIT:
        return SubgroupDescriptor.Q1(x.p, conjugator=diagonalize_split(x))
    if cls.kind == ANISOTROPIC:
        return SubgroupDescriptor.Qdelta(x.p, cls.delta.representative, centralizes=x)
    raise WrongClass(f"{cls} elements have no Cartan subgroup as centralizer")

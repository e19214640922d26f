"""Descriptors and membership tests for the definable subgroups of SL_2(Q_p).

The value group is Z and ``a_gamma`` is ``p**gamma`` throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import (
    InternalInconsistency,
    InvalidParams,
    PrecisionExhausted,
    UnsupportedCase,
    WrongSubgroup,
)
from .padic import (
    INF,
    PadicScalar,
    angular_component,
    hensel_sqrt,
    square_class,
    square_class_representatives,
    teichmuller,
)
from .sl2 import Mat2, conjugate, mat_inv, mat_mul, matrix_valuation

VARIANTS = (
    "U",
    "Uplus",
    "Q1",
    "Qdelta",
    "Borel",
    "NQ1",
    "SL2O",
    "AdditiveA",
    "MultP",
    "BorelParam",
    "Zfilt",
    "Congruence",
)


def congruence_group_check(gamma: int, eta1: int, eta2: int) -> bool:
    """Whether H_{gamma,eta1,eta2} is a group."""
    return eta1 + eta2 >= gamma >= 0


def _check_delta(p: int, delta: int) -> None:
    reps = square_class_representatives(p)
    if delta not in reps or delta == 1:
        raise InvalidParams(f"delta must be a nonsquare representative in {reps[1:]}, got {delta}")


def is_ramified(p: int, delta: int) -> bool:
    return delta % p == 0


def zfilt_min_level(p: int, delta: int) -> int:
    """Smallest n for which Z_{n,delta} is accepted."""
    return 0 if p != 2 and is_ramified(p, delta) else 1


def zfilt_base_level(p: int, delta: int) -> int:
    """Level of the torsion-free finite-index base of the filtration."""
    ram = is_ramified(p, delta)
    if p == 2:
        return 1 if ram else 2
    return 0 if ram else 1


def zfilt_a_exponent(p: int, delta: int, n: int) -> int:
    """e such that Z_{n,delta} requires a - 1 in p**e Z_p."""
    vd = 1 if is_ramified(p, delta) else 0
    return 2 * n + vd - (1 if p == 2 else 0)


@dataclass(frozen=True, eq=False)
class SubgroupDescriptor:
    """A parametric definable subgroup, optionally conjugated.

    With ``conjugator`` g the described set is ``g D g^-1``.  With
    ``centralizes`` set, membership is "commutes with that element".
    """

    variant: str
    p: int
    delta: int | None = None
    gamma: int | None = None
    n: int | None = None
    gamma0: int | None = None
    eta1: int | None = None
    eta2: int | None = None
    mult: "SubgroupDescriptor | None" = None
    add: "SubgroupDescriptor | None" = None
    conjugator: Mat2 | None = field(default=None, repr=False)
    centralizes: Mat2 | None = field(default=None, repr=False)
    require_group: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidParams(f"unknown variant {self.variant!r}")
        v = self.variant
        if v in ("Qdelta", "Zfilt"):
            _check_delta(self.p, self.delta)
        if v == "Zfilt" and self.n < zfilt_min_level(self.p, self.delta):
            raise InvalidParams(
                f"Z_(n,{self.delta}) needs n >= {zfilt_min_level(self.p, self.delta)}"
            )
        if v == "Congruence" and self.require_group:
            if not congruence_group_check(self.gamma, self.eta1, self.eta2):
                raise InvalidParams(
                    f"H_({self.gamma},{self.eta1},{self.eta2}) is not a group"
                )
        if v == "MultP" and (self.n < 0 or self.gamma0 < 1):
            raise InvalidParams("MultP needs n >= 0 and gamma0 >= 1")
        if v == "BorelParam":
            if self.mult is None or self.add is None:
                raise InvalidParams("BorelParam needs P and Z")
            # P.Z in Z forces P into the units
            if self.mult.n != 0:
                raise InvalidParams("BorelParam needs P.Z in Z, i.e. P bounded (n = 0)")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def U(cls, p, **kw):
        return cls("U", p, **kw)

    @classmethod
    def Uplus(cls, p, **kw):
        return cls("Uplus", p, **kw)

    @classmethod
    def Q1(cls, p, **kw):
        return cls("Q1", p, **kw)

    @classmethod
    def Qdelta(cls, p, delta, **kw):
        return cls("Qdelta", p, delta=delta, **kw)

    @classmethod
    def Borel(cls, p, **kw):
        return cls("Borel", p, **kw)

    @classmethod
    def NQ1(cls, p, **kw):
        return cls("NQ1", p, **kw)

    @classmethod
    def SL2O(cls, p, **kw):
        return cls("SL2O", p, **kw)

    @classmethod
    def AdditiveA(cls, p, gamma, **kw):
        return cls("AdditiveA", p, gamma=gamma, **kw)

    @classmethod
    def MultP(cls, p, n, gamma0, **kw):
        return cls("MultP", p, n=n, gamma0=gamma0, **kw)

    @classmethod
    def BorelParam(cls, P, Z, **kw):
        return cls("BorelParam", P.p, mult=P, add=Z, **kw)

    @classmethod
    def Zfilt(cls, p, n, delta, **kw):
        return cls("Zfilt", p, n=n, delta=delta, **kw)

    @classmethod
    def Congruence(cls, p, gamma, eta1, eta2, **kw):
        return cls("Congruence", p, gamma=gamma, eta1=eta1, eta2=eta2, **kw)

    # -- serialisation ------------------------------------------------------------

    def to_json(self) -> dict:
        out = {"variant": self.variant}
        for name in ("delta", "gamma", "n", "gamma0", "eta1", "eta2"):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        if self.mult is not None:
            out["P"] = self.mult.to_json()
            out["Z"] = self.add.to_json()
        if self.conjugator is not None:
            out["conjugator"] = self.conjugator.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict, p: int, prec: int = 32) -> "SubgroupDescriptor":
        data = dict(data)
        variant = data.pop("variant", None)
        kw = {}
        for name in ("delta", "gamma", "n", "gamma0", "eta1", "eta2"):
            if name in data:
                kw[name] = int(data.pop(name))
        if "P" in data:
            kw["mult"] = cls.from_json(data.pop("P"), p, prec)
            kw["add"] = cls.from_json(data.pop("Z"), p, prec)
        if "conjugator" in data:
            kw["conjugator"] = Mat2.of(data.pop("conjugator"), p, prec)
        if data:
            raise InvalidParams(f"unknown descriptor fields {sorted(data)}")
        return cls(variant, p, **kw)


# -- scalar predicates -----------------------------------------------------------


def val_at_least(x: PadicScalar, bound) -> bool:
    """v(x) >= bound, failing loudly if precision cannot decide."""
    if x.is_exact_zero:
        return True
    if x.is_zero:
        if x.abs_precision >= bound:
            return True
        raise PrecisionExhausted(f"cannot decide v >= {bound}")
    return x.valuation >= bound


def in_additive(x: PadicScalar, gamma: int) -> bool:
    """x in p**gamma Z_p."""
    return val_at_least(x, gamma)


def in_multiplicative(x: PadicScalar, n: int, gamma0: int) -> bool:
    """x in {p**(n k)} . (1 + p**gamma0 Z_p)."""
    if x.is_zero:
        return False
    v = x.valuation
    if (v != 0) if n == 0 else (v % n != 0):
        return False
    return x.unit_digits(gamma0) == 1 % x.p**gamma0


# -- membership ----------------------------------------------------------------


def _is_shape_qdelta(x: Mat2, delta: int) -> bool:
    return x.a == x.d and x.c == x.b * delta


def member(D: SubgroupDescriptor, x: Mat2) -> bool:
    if D.centralizes is not None:
        c = D.centralizes
        return mat_mul(x, c) == mat_mul(c, x)
    if D.conjugator is not None:
        x = conjugate(x, D.conjugator)
    v = D.variant
    a, b, c, d = x.entries
    if v == "U":
        return c.is_zero and a == d and (a == 1 or a == -1)
    if v == "Uplus":
        return c.is_zero and a == 1 and d == 1
    if v == "Q1":
        return b.is_zero and c.is_zero
    if v == "Qdelta":
        return _is_shape_qdelta(x, D.delta)
    if v == "Borel":
        return c.is_zero
    if v == "NQ1":
        return (b.is_zero and c.is_zero) or (a.is_zero and d.is_zero)
    if v == "SL2O":
        return all(val_at_least(e, 0) for e in x.entries)
    if v == "AdditiveA":
        return c.is_zero and a == 1 and d == 1 and in_additive(b, D.gamma)
    if v == "MultP":
        return b.is_zero and c.is_zero and in_multiplicative(a, D.n, D.gamma0)
    if v == "BorelParam":
        P, Z = D.mult, D.add
        return c.is_zero and in_multiplicative(a, P.n, P.gamma0) and in_additive(b, Z.gamma)
    if v == "Zfilt":
        if not _is_shape_qdelta(x, D.delta):
            return False
        e = zfilt_a_exponent(D.p, D.delta, D.n)
        return val_at_least(b, D.n) and val_at_least(a - 1, e)
    if v == "Congruence":
        return (
            val_at_least(a - 1, D.gamma)
            and val_at_least(d - 1, D.gamma)
            and val_at_least(b, D.eta1)
            and val_at_least(c, D.eta2)
        )
    raise AssertionError(v)


# -- filtration of Q_delta -------------------------------------------------------


def qdelta_element(a, b, delta: int, p: int | None = None, prec: int = 32) -> Mat2:
    """``[[a, b], [b delta, a]]``."""
    if not isinstance(a, PadicScalar):
        a = PadicScalar.exact(a, p, prec)
    if not isinstance(b, PadicScalar):
        b = PadicScalar.exact(b, a.p, prec)
    return Mat2(a, b, b * delta, a)


def filtration_level(x: Mat2, delta: int):
    """v(b) for ``x = (a, b)`` in Q_delta, or INF at +-I.

    Inside the finite-index base group the unit lemma is re-checked: a - 1 has
    valuation exactly the Z_{n,delta} exponent for n = v(b).
    """
    p = x.p
    _check_delta(p, delta)
    if not _is_shape_qdelta(x, delta):
        raise WrongSubgroup(f"not in Q_{delta}")
    if x.b.is_exact_zero:
        return INF
    if x.b.is_zero:
        raise PrecisionExhausted("off-diagonal entry vanishes to precision")
    level = x.b.valuation
    n0 = zfilt_base_level(p, delta)
    if level >= n0 and val_at_least(x.a - 1, zfilt_a_exponent(p, delta, n0)):
        am1 = x.a - 1
        want = zfilt_a_exponent(p, delta, level)
        if am1.is_zero:
            if am1.is_exact or am1.abs_precision > want:
                raise InternalInconsistency(f"v(a - 1) > {want} at level {level}")
            raise PrecisionExhausted("a - 1 vanishes to the available precision")
        if am1.valuation != want:
            raise InternalInconsistency(
                f"unit lemma violated: level {level} but v(a - 1) = {am1.valuation} != {want}"
            )
    return level


def z_quotient_map(x: Mat2, n: int, delta: int) -> int:
    """``b / p**n mod p`` on Z_{n,delta}: the quotient map onto Z/pZ."""
    p = x.p
    if not member(SubgroupDescriptor.Zfilt(p, n, delta), x):
        raise WrongSubgroup(f"not in Z_({n},{delta})")
    b = x.b
    if b.is_zero or b.valuation > n:
        return 0
    return angular_component(b)


def fp2_mul(u: tuple[int, int], w: tuple[int, int], delta: int, p: int) -> tuple[int, int]:
    """Product in F_p[sqrt(delta)] of pairs ``(re, im)``."""
    return ((u[0] * w[0] + delta * u[1] * w[1]) % p, (u[0] * w[1] + u[1] * w[0]) % p)


def residue_character(x: Mat2, delta: int) -> tuple[int, int]:
    """``res(a + b sqrt(delta))`` as ``(res a, res b)`` for unramified delta."""
    p = x.p
    _check_delta(p, delta)
    if is_ramified(p, delta) or p == 2:
        raise UnsupportedCase("residue character implemented for odd p and unit delta only")
    if not _is_shape_qdelta(x, delta):
        raise WrongSubgroup(f"not in Q_{delta}")

    def res(s):
        if s.is_zero or s.valuation > 0:
            return 0
        if s.valuation < 0:
            raise WrongSubgroup("entry is not integral")
        return s.unit_digits(1)

    return (res(x.a), res(x.b))


def sample_zfilt(rng, p: int, delta: int, level: int, prec: int = 32, height: int = 10**6) -> Mat2:
    """Element of Q_delta of exact level ``level`` inside the base group.

    b = p**level * u for a random unit u, a = the canonical root of 1 + delta b^2.
    """
    n0 = zfilt_base_level(p, delta)
    if level < n0:
        raise InvalidParams(f"level {level} is below the base level {n0}")
    while True:
        u = rng.randint(1, height)
        if u % p == 0:
            continue
        b = PadicScalar.exact(p**level * u, p, prec)
        rad = b * b * delta + 1
        if not square_class(rad).is_trivial:
            continue
        a = hensel_sqrt(rad)
        return Mat2(a, b, b * delta, a)


# -- boundedness -------------------------------------------------------------------


class Boundedness(NamedTuple):
    bounded: bool
    m: int | None = None


def is_bounded(D: SubgroupDescriptor) -> Boundedness:
    """Decided from the parameters; the bound is the least matrix valuation."""
    v = D.variant
    if D.centralizes is not None:
        # the centralizer of an anisotropic element is a compact torus
        from .classify import ANISOTROPIC, classify

        if classify(D.centralizes).kind != ANISOTROPIC:
            return Boundedness(False)
        return _torus_bound(D)
    if v in ("U", "Uplus", "Q1", "Borel", "NQ1"):
        return Boundedness(False)
    if v in ("SL2O", "Qdelta", "Zfilt"):
        m = 0
    elif v == "AdditiveA":
        m = min(0, D.gamma)
    elif v == "MultP":
        if D.n > 0:
            return Boundedness(False)
        m = 0
    elif v == "BorelParam":
        m = min(0, D.add.gamma)
    elif v == "Congruence":
        m = min(0, D.eta1, D.eta2)
    else:
        raise AssertionError(v)
    if D.conjugator is not None:
        g = D.conjugator
        m = m + matrix_valuation(g) + matrix_valuation(mat_inv(g))
    return Boundedness(True, m)


def _torus_bound(D: SubgroupDescriptor) -> Boundedness:
    # The centraliser is {s I + t N : s^2 - t^2 disc/4 = 1} with N the
    # trace-free part of x; the norm-one condition bounds v(s) and v(t).
    x = D.centralizes
    p = x.p
    half_tr = x.trace() / 2
    N = Mat2(x.a - half_tr, x.b, x.c, x.d - half_tr)
    vD = (half_tr * half_tr - 1).valuation
    if p == 2:
        s_min, t_min = -1, -1 - (vD + 1) // 2
    else:
        s_min, t_min = 0, -(vD // 2)
    m = min(s_min, t_min + matrix_valuation(N))
    return Boundedness(True, min(m, 0))


# -- finite-index scaffold for bounded subgroups ----------------------------------


def torsion_decompose(x: Mat2, gamma: int, eta: int) -> tuple[Mat2, Mat2]:
    """Split ``x = diag(z, 1/z) . h`` with z a root of unity and h in H_{gamma,eta,eta}.

    Raises WrongSubgroup when the remainder is not in the congruence group,
    i.e. x is outside the torsion-extended group.
    """
    p = x.p
    if x.a.is_zero or x.a.valuation != 0:
        raise WrongSubgroup("upper-left entry is not a unit")
    if p == 2:
        z = PadicScalar.exact(1 if x.a.unit_digits(2) == 1 else -1, 2, x.prec)
    else:
        z = teichmuller(angular_component(x.a), p, x.prec)
    t = Mat2(z, z * 0, z * 0, z.inverse())
    h = mat_mul(mat_inv(t), x)
    if not member(SubgroupDescriptor.Congruence(p, gamma, eta, eta, require_group=False), h):
        raise WrongSubgroup(f"remainder not in H_({gamma},{eta},{eta})")
    return t, h

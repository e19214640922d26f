"""The oracle checks run by ``oracle-verify``."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import (
    class_counts_mod_p,
    closure_check,
    enumerate_sl2,
    group_order,
    lift_and_classify,
    norm_one_count,
    norm_one_shadow,
)
from ._kernels import encode


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str = ""


def _nonsquares(p):
    from ..padic import square_class_representatives

    return [d for d in square_class_representatives(p) if d != 1]


def _base_level(p, delta):
    ram = delta % p == 0
    if p == 2:
        return 1 if ram else 2
    return 0 if ram else 1


def check_orders(p, k):
    out = []
    for level in sorted({1, k}):
        t = enumerate_sl2(p, level)
        want = p ** (3 * (level - 1)) * p * (p * p - 1)
        keys = encode(t.elements, t.modulus)
        distinct = np.unique(keys).size == t.order
        out.append(Check(f"order SL2(Z/{p}^{level})", t.order == want and distinct, f"{t.order} vs {want}"))
    return out


def check_class_buckets(p):
    t = enumerate_sl2(p, 1)
    cc = class_counts_mod_p(t)
    out = [Check("class buckets sum to order", cc.total == t.order, str(cc._asdict()))]
    if p != 2:
        lc = lift_and_classify(t)
        ok = lc["split"] == cc.split_like and lc["anisotropic"] == cc.aniso_like
        out.append(Check("unit-discriminant buckets match lift-and-classify", ok, f"{lc}"))
    return out


def check_closures(p, k):
    from ..subgroups import SubgroupDescriptor as SD

    t = enumerate_sl2(p, k)
    out = []
    for name, D, want in [
        ("Congruence(1,1,1) closed", SD.Congruence(p, 1, 1, 1), True),
        ("SL2(O) closed", SD.SL2O(p), True),
        ("Borel closed", SD.Borel(p), True),
        ("U closed", SD.U(p), True),
        ("H(2,0,0) not closed", SD.Congruence(p, 2, 0, 0, require_group=False), False),
    ]:
        r = closure_check(t, D)
        out.append(Check(f"{name} mod {p}^{k}", r.closed == want, str(r.to_json())))
    for delta in _nonsquares(p):
        D = SD.Qdelta(p, delta)
        r = closure_check(t, D)
        out.append(Check(f"Q_{delta} closed mod {p}^{k}", r.closed, str(r.to_json())))
    return out


def check_norm_one(p, k):
    out = []
    for delta in _nonsquares(p):
        n0 = _base_level(p, delta)
        counts = [norm_one_count(p, k, delta, n) for n in range(n0, k + 1)]
        ratios = [counts[i] // counts[i + 1] for i in range(len(counts) - 1)]
        ok = all(counts[i] == p * counts[i + 1] for i in range(len(counts) - 1))
        out.append(Check(f"filtration index p mod {p}^{k}, delta={delta}", ok, f"counts {counts} ratios {ratios}"))
    if p != 2:
        sq = 4
        got = norm_one_count(p, k, sq)
        want = p ** (k - 1) * (p - 1)
        out.append(Check("square delta gives split-torus count", got == want, f"{got} vs {want}"))
    return out


def check_quotient_map(p, k):
    """phi(b) = b / p^n mod p is a homomorphism on the finite shadow of
    Z_{n,delta}, with kernel the shadow of Z_{n+1,delta}."""
    m = p**k
    out = []
    for delta in _nonsquares(p):
        n = _base_level(p, delta)
        if n + 1 > k:
            continue
        S = norm_one_shadow(p, k, delta, n)
        K = norm_one_shadow(p, k, delta, n + 1)
        a, b = S[:, 0], S[:, 1]
        phi = (b // p**n) % p
        # product of (a, b) and (a', b') in Q_delta: b'' = a b' + b a'
        bb = (a[:, None] * b[None, :] + b[:, None] * a[None, :]) % m
        hom = bool(np.all((bb // p**n) % p == (phi[:, None] + phi[None, :]) % p))
        kernel = {tuple(r) for r in S[phi == 0].tolist()} == {tuple(r) for r in K.tolist()}
        onto = set(phi.tolist()) == set(range(p))
        out.append(
            Check(
                f"quotient map Z_{n}/Z_{n + 1} mod {p}^{k}, delta={delta}",
                hom and kernel and onto,
                f"hom={hom} kernel={kernel} onto={onto}",
            )
        )
    return out


def check_reduction_hom(p, k, samples=1000, seed=0):
    from ..oracle import mat_mul_mod
    from ..sl2 import mat_mul, random_sl2_integral, reduce_mod

    rng = random.Random(seed)
    m = p**k
    bad = 0
    for _ in range(samples):
        x = random_sl2_integral(rng, p, 16)
        y = random_sl2_integral(rng, p, 16)
        if reduce_mod(mat_mul(x, y), k) != mat_mul_mod(reduce_mod(x, k), reduce_mod(y, k), m):
            bad += 1
    return [Check(f"reduction mod {p}^{k} is a homomorphism", bad == 0, f"{bad} failures / {samples}")]


def check_scalar_digits(p, k, seed=0):
    """from_rational and hensel_sqrt against direct scans mod p^k."""
    from ..padic import from_rational, hensel_sqrt, square_class

    rng = random.Random(seed)
    m = p**k
    bad = 0
    for _ in range(200):
        num = rng.randint(-10**6, 10**6) or 1
        den = rng.randint(1, 10**6)
        while den % p == 0:
            den //= p
        x = from_rational(Fraction(num, den), p, k + 2)
        # scan for the unique residue r with den * r = num mod m
        v = x.valuation
        if v >= k:
            continue
        value = x.unit_digits(k) * p**v % m
        scan = [r for r in range(m) if (den * r - num) % m == 0]
        bad += scan != [value]
    hensel_bad = 0
    units = [u for u in range(1, m) if u % p]
    squares = sorted({(r * r) % m for r in units})
    for u in squares[:200]:
        x = from_rational(u, p, k)
        if not square_class(x).is_trivial:
            continue
        r = hensel_sqrt(x)
        digits = r.unit_digits(r.prec)
        mod = p**r.prec
        roots = {s % mod for s in units if (s * s - u) % m == 0}
        hensel_bad += digits not in roots
    return [
        Check(f"from_rational digits mod {p}^{k}", bad == 0, f"{bad} mismatches"),
        Check(f"hensel_sqrt among scanned roots mod {p}^{k}", hensel_bad == 0, f"{hensel_bad} mismatches"),
    ]


def run_suite(p: int, k: int, seed: int = 0) -> list[Check]:
    checks: list[Check] = []
    checks += check_orders(p, k)
    checks += check_class_buckets(p)
    checks += check_closures(p, k)
    checks += check_norm_one(p, k)
    checks += check_quotient_map(p, k)
    checks += check_reduction_hom(p, k, seed=seed)
    checks += check_scalar_digits(p, k, seed=seed)
    return checks


def format_table(checks: list[Check]) -> str:
    width = max(len(c.name) for c in checks)
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name.ljust(width)}  {c.detail}" for c in checks]
    return "\n".join(lines)


__all__ = ["Check", "format_table", "run_suite", "group_order"]

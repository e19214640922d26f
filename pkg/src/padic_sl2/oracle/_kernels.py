"""Exhaustive kernels over SL_2(Z/mZ), m = p**k.

Every kernel exists twice: a numba ``@njit`` loop and a vectorised numpy
version.  ``PADIC_SL2_NUMBA=0`` (or numba missing) selects numpy.  Both
produce identical output, including element order.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("PADIC_SL2_NUMBA", "1") not in ("0", "false", "no")
BACKEND = "numba" if USE_NUMBA else "numpy"

# dense membership bitmaps up to this many entries (m**4); sorted keys beyond
LOOKUP_LIMIT = 50_000_000
CHUNK = 256


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


def resolve(backend: str | None) -> str:
    backend = backend or BACKEND
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    return backend


def tables(p: int, k: int):
    """Inverse-mod-m table for units and p-valuation table (v(0) = k)."""
    m = p**k
    inv = np.zeros(m, dtype=np.int64)
    val = np.zeros(m, dtype=np.int64)
    for u in range(m):
        if u % p:
            inv[u] = pow(u, -1, m)
        else:
            v, w = 0, u
            while w and w % p == 0:
                w //= p
                v += 1
            val[u] = v if u else k
    return inv, val


def group_order(p: int, k: int) -> int:
    return p ** (3 * k - 2) * (p * p - 1)


# -- enumeration --------------------------------------------------------------------


@_njit
def _enumerate_nb(p, k, inv, val, size):
    m = p**k
    out = np.empty((size, 4), dtype=np.int64)
    n = 0
    for a in range(m):
        j = val[a]
        pj = p**j
        mj = m // pj
        ia = inv[a // pj]
        for b in range(m):
            for c in range(m):
                r = (1 + b * c) % m
                if r % pj:
                    continue
                d0 = (r // pj) * ia % mj
                for t in range(pj):
                    out[n, 0] = a
                    out[n, 1] = b
                    out[n, 2] = c
                    out[n, 3] = d0 + t * mj
                    n += 1
    return out[:n]


def _enumerate_np(p, k, inv, val, size):
    m = p**k
    B, C = np.meshgrid(np.arange(m, dtype=np.int64), np.arange(m, dtype=np.int64), indexing="ij")
    B, C = B.ravel(), C.ravel()
    R = (1 + B * C) % m
    blocks = []
    for a in range(m):
        pj = p ** int(val[a])
        mj = m // pj
        ok = R % pj == 0
        d0 = (R[ok] // pj) * inv[a // pj] % mj
        d = (d0[:, None] + np.arange(pj, dtype=np.int64)[None, :] * mj).ravel()
        blk = np.empty((d.size, 4), dtype=np.int64)
        blk[:, 0] = a
        blk[:, 1] = np.repeat(B[ok], pj)
        blk[:, 2] = np.repeat(C[ok], pj)
        blk[:, 3] = d
        blocks.append(blk)
    return np.concatenate(blocks)[:size]


def enumerate_sl2_array(p: int, k: int, backend: str | None = None) -> np.ndarray:
    inv, val = tables(p, k)
    size = group_order(p, k)
    if resolve(backend) == "numba":
        return _enumerate_nb(p, k, inv, val, size)
    return _enumerate_np(p, k, inv, val, size)


def encode(elements: np.ndarray, m: int) -> np.ndarray:
    e = elements
    return ((e[:, 0] * m + e[:, 1]) * m + e[:, 2]) * m + e[:, 3]


# -- closure ------------------------------------------------------------------------


@_njit
def _closure_nb(S, m, lookup, keys, use_lookup):
    # returns (kind, i, j): kind -1 closed, 0 product failure, 1 inverse failure
    N = S.shape[0]
    for i in range(N):
        a, b, c, d = S[i, 0], S[i, 1], S[i, 2], S[i, 3]
        key = ((d * m + (m - b) % m) * m + (m - c) % m) * m + a
        if use_lookup:
            ok = lookup[key] != 0
        else:
            pos = np.searchsorted(keys, key)
            ok = pos < keys.size and keys[pos] == key
        if not ok:
            return 1, i, i
    for i in range(N):
        a, b, c, d = S[i, 0], S[i, 1], S[i, 2], S[i, 3]
        for j in range(N):
            e, f, g, h = S[j, 0], S[j, 1], S[j, 2], S[j, 3]
            key = (
                (((a * e + b * g) % m * m + (a * f + b * h) % m) * m + (c * e + d * g) % m) * m
                + (c * f + d * h) % m
            )
            if use_lookup:
                ok = lookup[key] != 0
            else:
                pos = np.searchsorted(keys, key)
                ok = pos < keys.size and keys[pos] == key
            if not ok:
                return 0, i, j
    return -1, -1, -1


def _contains_np(keys_sorted, lookup, q):
    if lookup is not None:
        return lookup[q] != 0
    pos = np.searchsorted(keys_sorted, q)
    pos = np.minimum(pos, keys_sorted.size - 1)
    return keys_sorted[pos] == q


def _closure_np(S, m, lookup, keys, use_lookup):
    lk = lookup if use_lookup else None
    inv = np.stack([S[:, 3], (-S[:, 1]) % m, (-S[:, 2]) % m, S[:, 0]], axis=1)
    ok = _contains_np(keys, lk, encode(inv, m))
    if not ok.all():
        i = int(np.argmin(ok))
        return 1, i, i
    a, b, c, d = (S[:, t][None, :] for t in range(4))
    for start in range(0, S.shape[0], CHUNK):
        L = S[start : start + CHUNK]
        e, f, g, h = (L[:, t][:, None] for t in range(4))
        # row-block L on the left: products L[i] @ S[j]
        q = (
            (((e * a + f * c) % m * m + (e * b + f * d) % m) * m + (g * a + h * c) % m) * m
            + (g * b + h * d) % m
        )
        ok = _contains_np(keys, lk, q)
        if not ok.all():
            i, j = np.unravel_index(int(np.argmin(ok)), ok.shape)
            return 0, start + int(i), int(j)
    return -1, -1, -1


def closure_search(S: np.ndarray, m: int, backend: str | None = None):
    """First failure of closure of the set S (rows a, b, c, d) under inverse
    and product, as ``(kind, i, j)``; kind -1 means closed."""
    S = np.ascontiguousarray(S, dtype=np.int64)
    if S.shape[0] == 0:
        return -1, -1, -1
    keys = np.sort(encode(S, m))
    use_lookup = m**4 <= LOOKUP_LIMIT
    lookup = np.zeros(m**4 if use_lookup else 1, dtype=np.uint8)
    if use_lookup:
        lookup[keys] = 1
    if resolve(backend) == "numba":
        kind, i, j = _closure_nb(S, m, lookup, keys, use_lookup)
    else:
        kind, i, j = _closure_np(S, m, lookup, keys, use_lookup)
    return int(kind), int(i), int(j)


# -- norm-one counts ------------------------------------------------------------------


@_njit
def _norm_one_nb(m, delta, a_mod, b_mod):
    ha = np.zeros(m, dtype=np.int64)
    hb = np.zeros(m, dtype=np.int64)
    one = 1 % a_mod
    for a in range(m):
        if a % a_mod == one:
            ha[a * a % m] += 1
    for b in range(0, m, b_mod):
        hb[(1 + delta * b * b) % m] += 1
    total = 0
    for s in range(m):
        total += ha[s] * hb[s]
    return total


def _norm_one_np(m, delta, a_mod, b_mod):
    a = np.arange(m, dtype=np.int64)
    a = a[a % a_mod == 1 % a_mod]
    b = np.arange(0, m, b_mod, dtype=np.int64)
    ha = np.bincount(a * a % m, minlength=m)
    hb = np.bincount((1 + delta * b * b) % m, minlength=m)
    return int((ha * hb).sum())


def norm_one_count_raw(m: int, delta: int, a_mod: int = 1, b_mod: int = 1, backend: str | None = None) -> int:
    """#{(a, b) mod m : a^2 - delta b^2 = 1, a = 1 mod a_mod, b = 0 mod b_mod}."""
    delta %= m
    if resolve(backend) == "numba":
        return int(_norm_one_nb(m, delta, a_mod, b_mod))
    return _norm_one_np(m, delta, a_mod, b_mod)


# -- residue-level class buckets ---------------------------------------------------------


@_njit
def _buckets_nb(E, p, qr):
    # central, zero discriminant, nonzero residue, nonzero nonresidue
    out = np.zeros(4, dtype=np.int64)
    for i in range(E.shape[0]):
        a, b, c, d = E[i, 0], E[i, 1], E[i, 2], E[i, 3]
        if b == 0 and c == 0 and a == d and (a == 1 or a == p - 1):
            out[0] += 1
            continue
        t = (a + d) % p
        disc = (t * t - 4) % p
        if disc == 0:
            out[1] += 1
        elif qr[disc]:
            out[2] += 1
        else:
            out[3] += 1
    return out


def _buckets_np(E, p, qr):
    a, b, c, d = (E[:, t] for t in range(4))
    central = (b == 0) & (c == 0) & (a == d) & ((a == 1) | (a == p - 1))
    disc = ((a + d) ** 2 - 4) % p
    rest = ~central
    zero = rest & (disc == 0)
    res = rest & (disc != 0) & (qr[disc] != 0)
    non = rest & (disc != 0) & (qr[disc] == 0)
    return np.array([central.sum(), zero.sum(), res.sum(), non.sum()], dtype=np.int64)


def residue_buckets(E: np.ndarray, p: int, backend: str | None = None) -> np.ndarray:
    qr = np.zeros(p, dtype=np.uint8)
    for x in range(1, p):
        qr[x * x % p] = 1
    if resolve(backend) == "numba":
        return _buckets_nb(np.ascontiguousarray(E), p, qr)
    return _buckets_np(E, p, qr)

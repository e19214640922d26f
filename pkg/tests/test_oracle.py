import itertools

import numpy as np
import pytest

from padic_sl2.errors import TooLarge, UnsupportedCase
from padic_sl2.oracle import (
    HAVE_NUMBA,
    class_counts_mod_p,
    closure_check,
    enumerate_sl2,
    lift_and_classify,
    member_mask,
    norm_one_count,
    norm_one_shadow,
)
from padic_sl2.oracle import _kernels
from padic_sl2.oracle.suite import run_suite
from padic_sl2.sl2 import Mat2
from padic_sl2.subgroups import SubgroupDescriptor as SD


def brute_sl2(p, k):
    m = p**k
    return [t for t in itertools.product(range(m), repeat=4) if (t[0] * t[3] - t[1] * t[2]) % m == 1]


@pytest.mark.parametrize("p, k, n", [(3, 1, 24), (5, 1, 120), (5, 2, 15000), (2, 2, 48)])
def test_orders(p, k, n):
    assert len(enumerate_sl2(p, k)) == n


@pytest.mark.parametrize("p, k", [(2, 2), (3, 1), (3, 2)])
def test_enumeration_matches_plain_loop(p, k):
    t = enumerate_sl2(p, k)
    assert [tuple(r) for r in t.elements.tolist()] == brute_sl2(p, k)


def test_size_guard():
    with pytest.raises(TooLarge):
        enumerate_sl2(11, 3)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("p, k", [(2, 3), (3, 2), (5, 2)])
def test_backends_agree(p, k):
    a = _kernels.enumerate_sl2_array(p, k, "numba")
    b = _kernels.enumerate_sl2_array(p, k, "numpy")
    assert np.array_equal(a, b)
    t = enumerate_sl2(p, 1)
    assert np.array_equal(
        _kernels.residue_buckets(t.elements, p, "numba"), _kernels.residue_buckets(t.elements, p, "numpy")
    )
    table = enumerate_sl2(p, k)
    for D in (SD.Congruence(p, 1, 1, 1), SD.Congruence(p, 2, 0, 0, require_group=False), SD.Borel(p)):
        assert closure_check(table, D, "numba") == closure_check(table, D, "numpy")
    for delta, lvl in ((p, None), (p, 1), (2 if p != 2 else 5, 2)):
        assert norm_one_count(p, k, delta, lvl, backend="numba") == norm_one_count(p, k, delta, lvl, backend="numpy")


def test_class_counts_p5():
    t = enumerate_sl2(5, 1)
    cc = class_counts_mod_p(t)
    assert cc.central == 2 and cc.total == 120
    lc = lift_and_classify(t)
    assert (lc["split"], lc["anisotropic"]) == (cc.split_like, cc.aniso_like)
    # independent residue scan
    disc = [((a + d) ** 2 - 4) % 5 for a, b, c, d in brute_sl2(5, 1)]
    assert cc.split_like == sum(1 for x in disc if x in (1, 4))
    assert cc.aniso_like == sum(1 for x in disc if x in (2, 3))
    with pytest.raises(UnsupportedCase):
        class_counts_mod_p(enumerate_sl2(5, 2))


def test_class_counts_p2_all_undetermined():
    cc = class_counts_mod_p(enumerate_sl2(2, 1))
    assert cc.central == 1 and cc.undetermined == 5 and cc.split_like == cc.aniso_like == 0


def test_norm_one_against_scan():
    scan = sum(1 for a in range(5) for b in range(5) if (a * a - 2 * b * b) % 5 == 1)
    assert norm_one_count(5, 1, 2) == scan == 6
    full = sum(1 for a in range(25) for b in range(25) if (a * a - 5 * b * b) % 25 == 1)
    lvl0 = sum(1 for a in range(25) for b in range(25) if (a * a - 5 * b * b) % 25 == 1 and (a - 1) % 5 == 0)
    lvl1 = sum(1 for a in range(25) for b in range(25) if (a * a - 5 * b * b) % 25 == 1 and b % 5 == 0 and (a - 1) % 25 == 0)
    assert norm_one_count(5, 2, 5) == full
    assert (norm_one_count(5, 2, 5, 0), norm_one_count(5, 2, 5, 1)) == (lvl0, lvl1)
    assert lvl0 == 5 * lvl1


def test_square_delta_is_split_count():
    for p, k in [(3, 2), (5, 2), (7, 1)]:
        assert norm_one_count(p, k, 4) == p ** (k - 1) * (p - 1)


def test_p2_shadow_lifts():
    # each shadow row reduces from a genuine 2-adic point: a = +-sqrt(1 + delta b^2)
    from padic_sl2.padic import from_rational, hensel_sqrt

    for delta in (2, -1, 5, 10):
        for row in norm_one_shadow(2, 4, delta, 1 if delta % 2 == 0 else 2).tolist():
            a, b = row
            r = hensel_sqrt(from_rational(1 + delta * b * b, 2, 12))
            roots = {r.unit_digits(8) % 16, (-r).unit_digits(8) % 16}
            assert a in roots


def test_closure_examples():
    t = enumerate_sl2(5, 2)
    assert closure_check(t, SD.Congruence(5, 1, 1, 1)).closed
    r = closure_check(t, SD.Congruence(5, 2, 0, 0, require_group=False))
    assert not r and len(r.counterexample) in (1, 2)
    assert closure_check(enumerate_sl2(5, 1), SD.Borel(5)).closed


def test_unsupported_reductions():
    t = enumerate_sl2(3, 1)
    with pytest.raises(UnsupportedCase):
        member_mask(t, SD.Congruence(3, 1, 2, -1))
    with pytest.raises(UnsupportedCase):
        member_mask(t, SD.Q1(3, conjugator=Mat2.of([[1, 1], [0, 1]], 3)))


def test_member_mask_agrees_with_member():
    from padic_sl2.subgroups import member

    # congruence membership depends only on entry valuations, so integer rows
    # can be fed to the p-adic test directly
    t = enumerate_sl2(3, 2)
    for D in (SD.Congruence(3, 1, 0, 1), SD.Congruence(3, 2, 1, 1), SD.Congruence(3, 0, 2, 0)):
        mask = member_mask(t, D)
        for r, inside in zip(t.elements.tolist()[::7], mask.tolist()[::7]):
            x = Mat2.of([[r[0], r[1]], [r[2], r[3]]], 3, check=False)
            assert member(D, x) == inside


@pytest.mark.parametrize("p, k", [(2, 3), (3, 2), (5, 2)])
def test_suite_passes(p, k):
    failed = [c for c in run_suite(p, k) if not c.passed]
    assert not failed, failed


def test_benchmark_script_runs(capsys):
    import runpy
    from pathlib import Path

    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_oracle.py"
    runpy.run_path(str(script), run_name="bench")["main"](["--p", "2", "--k", "2", "--repeat", "1"])
    out = capsys.readouterr().out
    assert "closure SL2(O)" in out

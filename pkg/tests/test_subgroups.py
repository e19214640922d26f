import random
from fractions import Fraction

import pytest

from padic_sl2.errors import InvalidParams, InternalInconsistency, UnsupportedCase, WrongSubgroup
from padic_sl2.padic import INF, PadicScalar, from_rational, hensel_sqrt, square_class_representatives
from padic_sl2.sl2 import Mat2, mat_inv, mat_mul, mat_pow, random_sl2_integral
from padic_sl2.subgroups import (
    SubgroupDescriptor as SD,
    congruence_group_check,
    filtration_level,
    fp2_mul,
    is_bounded,
    member,
    qdelta_element,
    residue_character,
    sample_zfilt,
    torsion_decompose,
    z_quotient_map,
    zfilt_base_level,
    zfilt_min_level,
)

P = 5


def M(rows, p=P):
    return Mat2.of(rows, p)


def test_member_examples():
    assert member(SD.Q1(P), Mat2.diag(2, P))
    assert member(SD.Qdelta(P, 2), M([[3, 2], [4, 3]]))
    H = SD.Congruence(P, 1, 1, 1)
    assert member(H, M([[1, 5], [0, 1]]))
    assert not member(H, M([[1, 1], [0, 1]]))
    assert member(SD.NQ1(P), Mat2.omega(P))
    assert not member(SD.Q1(P), Mat2.omega(P))


def test_member_frames():
    u = M([[1, 7], [0, 1]])
    assert member(SD.U(P), u) and member(SD.Uplus(P), u)
    assert member(SD.U(P), M([[-1, 7], [0, -1]]))
    assert not member(SD.Uplus(P), M([[-1, 7], [0, -1]]))
    assert member(SD.Borel(P), M([[2, 7], [0, Fraction(1, 2)]]))
    assert member(SD.SL2O(P), M([[3, 2], [4, 3]]))
    assert not member(SD.SL2O(P), Mat2.diag(5, P))


def test_member_parametric():
    A = SD.AdditiveA(P, 2)
    assert member(A, M([[1, 25], [0, 1]])) and not member(A, M([[1, 5], [0, 1]]))
    mp = SD.MultP(P, 2, 1)
    assert member(mp, Mat2.diag(25 * 6, P))
    assert not member(mp, Mat2.diag(5 * 6, P))  # odd valuation
    assert not member(mp, Mat2.diag(25 * 2, P))  # unit not 1 mod 5
    B = SD.BorelParam(SD.MultP(P, 0, 1), SD.AdditiveA(P, 1))
    assert member(B, M([[6, 5], [0, Fraction(1, 6)]]))
    assert not member(B, M([[6, 1], [0, Fraction(1, 6)]]))
    with pytest.raises(InvalidParams):
        SD.BorelParam(SD.MultP(P, 1, 1), SD.AdditiveA(P, 1))


def test_conjugated_descriptor():
    g = M([[1, 1], [0, 1]])
    D = SD.Q1(P, conjugator=g)
    x = mat_mul(mat_mul(g, Mat2.diag(3, P)), mat_inv(g))
    assert member(D, x) and not member(SD.Q1(P), x)


@pytest.mark.parametrize("triple, ok", [((1, 1, 1), True), ((3, 1, 1), False), ((0, 0, 0), True), ((-1, 0, 0), False)])
def test_congruence_group_check(triple, ok):
    assert congruence_group_check(*triple) is ok
    if not ok:
        with pytest.raises(InvalidParams):
            SD.Congruence(P, *triple)


def test_zfilt_levels():
    assert zfilt_min_level(5, 5) == 0 and zfilt_min_level(5, 2) == 1
    assert zfilt_min_level(2, 2) == 1 and zfilt_min_level(2, -1) == 1
    assert zfilt_base_level(2, 5) == 2
    with pytest.raises(InvalidParams):
        SD.Zfilt(5, 0, 2)
    with pytest.raises(InvalidParams):
        SD.Qdelta(5, 3)  # not a Serre representative


def test_filtration_examples():
    assert filtration_level(Mat2.identity(P), 5) == INF
    a = hensel_sqrt(from_rational(6, P))
    x = qdelta_element(a, 1, 5, P)
    assert (a.unit_digits(3), (a - 1).valuation) == (16, 1)
    assert filtration_level(x, 5) == 0
    assert z_quotient_map(x, 0, 5) == 1
    assert filtration_level(mat_pow(x, 5), 5) == 1
    assert z_quotient_map(Mat2.identity(P), 0, 5) == 0


def test_filtration_rejects_nonmembers():
    with pytest.raises(WrongSubgroup):
        filtration_level(M([[1, 1], [0, 1]]), 5)
    with pytest.raises(WrongSubgroup):
        z_quotient_map(sample_zfilt(random.Random(0), 5, 2, 1), 2, 2)


def test_unit_lemma_self_check():
    # a - 1 with too large valuation for its level cannot be on the conic
    bad = Mat2(PadicScalar.exact(1 + 5**4, 5), PadicScalar.exact(5, 5), PadicScalar.exact(25, 5), PadicScalar.exact(1 + 5**4, 5))
    with pytest.raises(InternalInconsistency):
        filtration_level(bad, 5)


def test_residue_character():
    assert residue_character(Mat2.identity(P), 2) == (1, 0)
    assert residue_character(M([[3, 2], [4, 3]]), 2) == (3, 2)
    with pytest.raises(UnsupportedCase):
        residue_character(Mat2.identity(P), 5)
    rng = random.Random(1)
    xs = [sample_zfilt(rng, P, 2, 1) for _ in range(20)] + [M([[3, 2], [4, 3]])]
    for x in xs:
        for y in xs:
            got = residue_character(mat_mul(x, y), 2)
            assert got == fp2_mul(residue_character(x, 2), residue_character(y, 2), 2, P)


def test_boundedness():
    assert is_bounded(SD.SL2O(P)) == (True, 0)
    assert not is_bounded(SD.Q1(P)).bounded
    assert is_bounded(SD.Zfilt(P, 0, 5)) == (True, 0)
    assert is_bounded(SD.Congruence(P, 2, 3, -1)) == (True, -1)
    assert not is_bounded(SD.MultP(P, 1, 1)).bounded
    x = M([[3, 2], [4, 3]])
    assert is_bounded(SD.Qdelta(P, 2, centralizes=x)).bounded


def test_json_round_trip():
    for D in [
        SD.Congruence(P, 1, 2, 0),
        SD.Zfilt(P, 3, 10),
        SD.BorelParam(SD.MultP(P, 0, 2), SD.AdditiveA(P, -1)),
        SD.Q1(P, conjugator=M([[1, 1], [0, 1]])),
    ]:
        back = SD.from_json(D.to_json(), P)
        assert back.to_json() == D.to_json()


# -- random closure of every family ----------------------------------------------


def pw(p, e):
    return Fraction(p) ** e


def _u(rng, p):
    while True:
        u = rng.randint(-10**4, 10**4)
        if u % p:
            return u


def _samplers(p):
    def congruence(g, e1, e2):
        def f(rng):
            a = 1 + p**g * rng.randint(-99, 99)
            if a == 0:
                a = 1
            b, c = pw(p, e1) * rng.randint(-99, 99), pw(p, e2) * rng.randint(-99, 99)
            return Mat2.of([[a, b], [c, Fraction(1 + b * c, a)]], p)

        return f

    def diag(rng):
        return Mat2.diag(_u(rng, p) * pw(p, rng.randint(-3, 3)) / _u(rng, p), p)

    def borel(rng):
        t = _u(rng, p) * pw(p, rng.randint(-3, 3)) / 7
        return Mat2.of([[t, Fraction(rng.randint(-99, 99), 13)], [0, 1 / t]], p)

    return [
        (SD.U(p), lambda r: Mat2.of([[s := r.choice((1, -1)), Fraction(r.randint(-99, 99), 7)], [0, s]], p)),
        (SD.Uplus(p), lambda r: Mat2.of([[1, Fraction(r.randint(-99, 99), 7)], [0, 1]], p)),
        (SD.Q1(p), diag),
        (SD.Borel(p), borel),
        (SD.NQ1(p), lambda r: mat_mul(diag(r), Mat2.omega(p)) if r.random() < 0.5 else diag(r)),
        (SD.SL2O(p), lambda r: random_sl2_integral(r, p)),
        (SD.Congruence(p, 1, 1, 1), congruence(1, 1, 1)),
        (SD.Congruence(p, 2, 0, 2), congruence(2, 0, 2)),
        (SD.Congruence(p, 2, 3, -1), congruence(2, 3, -1)),
        (SD.AdditiveA(p, -1), lambda r: Mat2.of([[1, Fraction(r.randint(-99, 99), p)], [0, 1]], p)),
        (SD.MultP(p, 2, 1), lambda r: Mat2.diag(((1 + p * r.randint(-99, 99)) or 1) * pw(p, 2 * r.randint(-2, 2)), p)),
        (SD.Zfilt(p, 2, p), lambda r: sample_zfilt(r, p, p, r.randint(2, 5))),
        (SD.Qdelta(p, 2 if p != 3 else 3), lambda r: sample_zfilt(r, p, 2 if p != 3 else 3, r.randint(1, 4))),
    ]


@pytest.mark.parametrize("p", [3, 5])
def test_random_closure(p):
    rng = random.Random(p)
    for D, sample in _samplers(p):
        xs = [sample(rng) for _ in range(12)]
        for x in xs:
            assert member(D, x), D
            for y in xs:
                assert member(D, mat_mul(x, mat_inv(y))), D


def test_congruence_counterexample_when_not_group():
    H = SD.Congruence(P, 2, 0, 0, require_group=False)
    x, y = M([[1, 1], [0, 1]]), M([[1, 0], [1, 1]])
    assert member(H, x) and member(H, y)
    assert not member(H, mat_mul(y, x))


@pytest.mark.parametrize("p, delta", [(5, 5), (5, 2), (5, 10), (3, 3), (7, 3), (2, 2), (2, -5)])
def test_filtration_chain_strict(p, delta):
    rng = random.Random(delta)
    n0 = zfilt_base_level(p, delta)
    for n in range(n0, n0 + 4):
        Zn, Zn1 = SD.Zfilt(p, n, delta), SD.Zfilt(p, n + 1, delta)
        deeper = sample_zfilt(rng, p, delta, n + 1)
        exact = sample_zfilt(rng, p, delta, n)
        assert member(Zn, deeper) and member(Zn1, deeper)
        assert member(Zn, exact) and not member(Zn1, exact)
        assert filtration_level(exact, delta) == n


@pytest.mark.parametrize("p, delta", [(5, 5), (5, 2), (5, 10), (7, 3), (7, 21), (3, 3)])
def test_power_descent(p, delta):
    rng = random.Random(0)
    for n in range(zfilt_base_level(p, delta), 4):
        for _ in range(10):
            x = sample_zfilt(rng, p, delta, n)
            assert filtration_level(mat_pow(x, p), delta) == n + 1


def test_power_descent_skips_a_level_for_p3_delta6():
    # b(x^3) = b(3a^2 + 6b^2) = 3b(1 + 8b^2), and 1 + 8b^2 = 0 mod 3 for a unit b
    rng = random.Random(0)
    for _ in range(10):
        x = sample_zfilt(rng, 3, 6, 0)
        assert filtration_level(mat_pow(x, 3), 6) >= 2


@pytest.mark.parametrize("p, delta", [(5, 5), (5, 2), (3, 6), (2, 10), (2, 5)])
def test_quotient_map_homomorphism(p, delta):
    rng = random.Random(p * delta)
    n = zfilt_min_level(p, delta) if p != 2 else zfilt_base_level(p, delta)
    xs = [sample_zfilt(rng, p, delta, rng.choice((n, n, n + 1))) for _ in range(15)]
    seen = set()
    for x in xs:
        seen.add(z_quotient_map(x, n, delta))
        for y in xs:
            lhs = z_quotient_map(mat_mul(x, y), n, delta)
            assert lhs == (z_quotient_map(x, n, delta) + z_quotient_map(y, n, delta)) % p
    assert any(v != 0 for v in seen)


def test_torsion_decompose():
    rng = random.Random(4)
    H = SD.Congruence(P, 1, 1, 1)
    for _ in range(30):
        t = Mat2.diag(rng.choice((2, 3, 4, 1)), P)
        z, h = torsion_decompose(mat_mul(t, M([[6, 5], [25, Fraction(126, 6)]])), 1, 1)
        assert member(H, h) and z.b.is_exact_zero and z.c.is_exact_zero
    with pytest.raises(WrongSubgroup):
        torsion_decompose(M([[1, 1], [0, 1]]), 1, 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_serre_reps_give_valid_qdelta(p):
    for delta in square_class_representatives(p)[1:]:
        SD.Qdelta(p, delta)

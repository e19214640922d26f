import random
from fractions import Fraction

import pytest

from padic_sl2.interpretation import GroupFieldElement, decode, encode, gf_add, gf_mul, word
from padic_sl2.padic import PadicScalar
from padic_sl2.sl2 import Mat2

P = 5


def S(q):
    return PadicScalar.exact(q, P)


def test_encode_examples():
    for x, pair in [(3, (2, 1)), (0, (Fraction(1, 2), Fraction(-1, 2))), (1, (1, 0))]:
        e = encode(x, P)
        assert (e.t0.fraction(), e.t1.fraction()) == pair


def test_decode_examples():
    assert decode(GroupFieldElement(S(2), S(1))).fraction() == 3
    assert decode(GroupFieldElement(S(1), S(1))).fraction() == 0
    for x in (0, 1, -1, 7, Fraction(1, 3)):
        assert decode(encode(x, P)).fraction() == x


def test_zero_exponent_word_is_identity_factor():
    assert word(encode(1, P)) == Mat2.of([[1, 1], [0, 1]], P)


def test_field_operations():
    two, three = encode(2, P), encode(3, P)
    assert decode(gf_add(two, three)).fraction() == 5
    assert decode(gf_mul(two, three)).fraction() == 6


def test_equivalence_is_word_equality():
    a = GroupFieldElement(S(2), S(1))
    b = GroupFieldElement(S(Fraction(7, 4)), S(Fraction(1, 4)))  # 49/16 - 1/16 = 3
    assert a == b and a != encode(4, P)


def _rand(rng):
    return Fraction(rng.randint(-60, 60), rng.randint(1, 60))


def test_field_axioms():
    rng = random.Random(5)
    for _ in range(100):
        x, y, z = (encode(_rand(rng), P) for _ in range(3))
        assert gf_add(gf_add(x, y), z) == gf_add(x, gf_add(y, z))
        assert gf_mul(gf_mul(x, y), z) == gf_mul(x, gf_mul(y, z))
        assert gf_add(x, y) == gf_add(y, x)
        assert gf_mul(x, y) == gf_mul(y, x)
        assert gf_mul(x, gf_add(y, z)) == gf_add(gf_mul(x, y), gf_mul(x, z))
        assert gf_mul(x, encode(1, P)) == x


@pytest.mark.parametrize("p", [3, 7])
def test_other_primes(p):
    rng = random.Random(p)
    for _ in range(50):
        x, y = _rand(rng), _rand(rng)
        assert decode(gf_mul(encode(x, p), encode(y, p))).fraction() == x * y
        assert decode(gf_add(encode(x, p), encode(y, p))).fraction() == x + y

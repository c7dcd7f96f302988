import random

import pytest
import sympy

from isograph.fields import (
    GF,
    FieldError,
    dlog_in_mu_n,
    embedding,
    ext_field_build,
    frobenius_map,
    primitive_nth_root,
    sqrt,
)


def test_ext_field_build_f23():
    # -1 is a non-residue mod 23, so the first irreducible quadratic is x^2+1
    F = ext_field_build(23, 1)
    assert F.order == 529
    assert F.modulus == (1, 0)
    assert pow(-1 % 23, 11, 23) == 23 - 1  # Euler criterion confirms non-residue


def test_ext_field_build_orders():
    F = ext_field_build(13, 2)
    assert F.order == 13**4 == 28561
    # subfield order divides: p-1 | q-1
    assert (F.order - 1) % (13 - 1) == 0


def test_ext_field_build_rejects_bad_p():
    with pytest.raises(FieldError):
        ext_field_build(4, 1)
    with pytest.raises(FieldError):
        ext_field_build(3, 1)


def test_field_arith_basics():
    F = GF(23)
    five = F.element(5)
    assert (five * F.element(14)).c == (1,)  # 70 = 3*23 + 1
    for a in range(1, 23):
        el = F.element(a)
        assert el * el.inverse() == F.one()
    with pytest.raises(ZeroDivisionError):
        F.zero().inverse()


def test_field_axioms_exhaustive_small_primes():
    for p in (5, 7, 11, 13, 17, 19, 23, 29, 31):
        F = GF(p)
        els = [F.element(i) for i in range(p)]
        for a in els:
            for b in els:
                assert (a + b) - b == a
                assert a * b == b * a
        # distributivity on a grid
        for a in els[:: max(1, p // 5)]:
            for b in els[:: max(1, p // 5)]:
                for c in els[:: max(1, p // 5)]:
                    assert a * (b + c) == a * b + a * c
                    assert (a + b) + c == a + (b + c)


def test_frobenius_is_homomorphism(rng):
    F = GF(23, 4)
    for _ in range(300):
        a = F.random_element(rng)
        b = F.random_element(rng)
        assert frobenius_map(a * b) == frobenius_map(a) * frobenius_map(b)
        assert frobenius_map(a + b) == frobenius_map(a) + frobenius_map(b)
    # fixes the prime subfield, and 2m applications are the identity
    a = F.element(17)
    assert frobenius_map(a) == a
    b = F.gen()
    for _ in range(F.degree):
        b = frobenius_map(b)
    assert b == F.gen()


def test_power_q_fixes_field(rng):
    for (p, d) in ((23, 2), (13, 4)):
        F = GF(p, d)
        for _ in range(20):
            a = F.random_element(rng)
            assert a**F.order == a


def test_sqrt_examples():
    F = GF(23)
    assert sqrt(F.element(4)) == F.element(2)  # 2 beats 21 lexicographically
    assert sqrt(F.zero()) == F.zero()
    # non-residue in F_p becomes a square in F_{p^2}
    nonres = next(a for a in range(2, 23) if pow(a, 11, 23) != 1)
    assert sqrt(GF(23).element(nonres)) is None
    F2 = GF(23, 2)
    r = sqrt(F2.element(nonres))
    assert r is not None and r * r == F2.element(nonres)


def test_sqrt_iff_residue(rng):
    F = GF(31, 2)
    one = F.one()
    half = (F.order - 1) // 2
    for _ in range(200):
        a = F.random_element(rng)
        r = sqrt(a)
        if not a:
            assert r == a
            continue
        if a**half == one:
            assert r is not None and r * r == a
            assert r == min(r, -r, key=lambda e: e.c)
        else:
            assert r is None


def test_primitive_roots():
    F = GF(23, 2)
    assert primitive_nth_root(F, 1) == F.one()
    assert primitive_nth_root(F, 2) == -F.one()
    z = primitive_nth_root(F, 8)  # 528 = 8 * 66
    assert z**8 == F.one() and z**4 != F.one()
    for n in (3, 4, 8, 11, 16, 24):
        zn = primitive_nth_root(F, n)
        for d in sympy.divisors(n)[:-1]:
            assert zn**d != F.one()
    with pytest.raises(FieldError):
        primitive_nth_root(F, 5)  # 5 does not divide 528


def test_dlog_round_trip():
    F = GF(23, 2)
    for n in (2, 3, 8, 16, 24, 48):
        z = primitive_nth_root(F, n)
        for e in range(n):
            assert dlog_in_mu_n(z**e, z, n) == e
    z = primitive_nth_root(F, 8)
    assert dlog_in_mu_n(F.one(), z, 8) == 0
    assert dlog_in_mu_n(z**3, z, 8) == 3
    with pytest.raises(FieldError):
        dlog_in_mu_n(F.element(5), z, 8)  # 5 is not in mu_8


def test_embedding_respects_arithmetic(rng):
    small = GF(23, 2)
    big = GF(23, 6)
    emb = embedding(small, big)
    for _ in range(50):
        a = small.random_element(rng)
        b = small.random_element(rng)
        assert emb(a * b) == emb(a) * emb(b)
        assert emb(a + b) == emb(a) + emb(b)
    assert emb(small.one()) == big.one()


def test_modulus_deterministic():
    # rebuilding the same field yields the identical modulus
    from isograph.fields import FiniteField

    f1 = FiniteField(23, 2)
    f2 = FiniteField(23, 2)
    assert f1.modulus == f2.modulus
    f3 = FiniteField(29, 4)
    assert FiniteField(29, 4).modulus == f3.modulus

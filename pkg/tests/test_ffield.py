from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from splitkit.ffield import (
    FieldMismatch,
    NotPrime,
    ZeroInverse,
    all_fields_upto,
    fq_arith,
    fq_make,
    is_nth_power,
    least_nonsquare,
    nth_powers,
    unit_generator,
)

SMALL = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2), (2, 4)]


# -- independent oracle: schoolbook polynomials mod the field's modulus --------

def poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def poly_reduce(a, m, p):
    a = list(a)
    d = len(m) - 1
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if c:
            for i in range(d + 1):
                a[k - d + i] = (a[k - d + i] - c * m[i]) % p
    return (a + [0] * d)[:d]


def oracle_mul(F, x, y):
    prod = poly_mul(list(F.coeffs(x)), list(F.coeffs(y)), F.p)
    return F.code(poly_reduce(prod, list(F.modulus), F.p))


def reducible_monics(p, d):
    """All monic degree-d products of two monic factors of positive degree."""
    out = set()
    for k in range(1, d // 2 + 1):
        for lo_a in itertools.product(range(p), repeat=k):
            for lo_b in itertools.product(range(p), repeat=d - k):
                out.add(tuple(poly_mul(list(lo_a) + [1], list(lo_b) + [1], p)))
    return out


@pytest.mark.parametrize("p,r", SMALL)
def test_multiplication_matches_schoolbook(p, r):
    F = fq_make(p, r)
    for x in range(F.q):
        for y in range(F.q):
            assert F.mul(x, y) == oracle_mul(F, x, y)


@pytest.mark.parametrize("p,r", [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4), (3, 3), (7, 2)])
def test_modulus_is_least_irreducible(p, r):
    F = fq_make(p, r)
    bad = reducible_monics(p, r)
    assert tuple(F.modulus) not in bad

    def code(m):
        return sum(c * p**i for i, c in enumerate(m[:-1]))

    for lo in itertools.product(range(p), repeat=r):
        m = tuple(lo) + (1,)
        if code(m) < code(F.modulus):
            assert m in bad


def test_gf9_modulus_is_t2_plus_1():
    # monic quadratics over GF(3) by code: t^2 has a root, t^2 + 1 has none
    assert fq_make(3, 2).modulus == (1, 0, 1)


@pytest.mark.parametrize("p,r", SMALL)
def test_field_axioms_exhaustive(p, r):
    F = fq_make(p, r)
    q = F.q
    for x in range(q):
        assert F.add(x, 0) == x and F.mul(x, 1) == x
        assert F.add(x, F.neg(x)) == 0
        if x:
            assert F.mul(x, F.inv(x)) == 1
    for x, y, z in itertools.product(range(q), repeat=3):
        assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))


def test_prime_field_matches_modular_ints():
    F = fq_make(13)
    for x in range(13):
        for y in range(13):
            assert F.add(x, y) == (x + y) % 13
            assert F.mul(x, y) == (x * y) % 13


@pytest.mark.parametrize("p,r", SMALL)
def test_vectorized_ops_agree(p, r):
    F = fq_make(p, r)
    A, B = np.meshgrid(np.arange(F.q), np.arange(F.q))
    assert np.array_equal(F.vmul(A, B), np.vectorize(F.mul)(A, B))
    assert np.array_equal(F.vadd(A, B), np.vectorize(F.add)(A, B))
    nz = np.arange(1, F.q)
    assert np.array_equal(F.vinv(nz), [F.inv(int(x)) for x in nz])


def test_unit_generator_has_full_order_for_all_small_fields():
    for F in all_fields_upto(256):
        g = unit_generator(F)
        assert F.order_of(g.code) == F.q - 1
        seen = {F.pow(g.code, k) for k in range(F.q - 1)}
        assert seen == set(range(1, F.q))


def test_errors():
    with pytest.raises(NotPrime):
        fq_make(6)
    F = fq_make(5)
    with pytest.raises(ZeroInverse):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F(0).inverse()
    with pytest.raises(FieldMismatch):
        fq_arith(F(1), fq_make(7)(1), "add")


@pytest.mark.parametrize("q,n", [(5, 2), (7, 3), (13, 4), (9, 2), (16, 3), (13, 6)])
def test_nth_powers_match_bruteforce(q, n):
    F = [f for f in all_fields_upto(q) if f.q == q][0]
    brute = {F.pow(x, n) for x in range(1, q)}
    assert nth_powers(F, n) == brute
    for x in range(1, q):
        assert is_nth_power(F(x), n) == (x in brute)


def test_least_nonsquare_prime_fields():
    for p in [3, 5, 7, 11, 13, 17]:
        F = fq_make(p)
        squares = {x * x % p for x in range(1, p)}
        expect = min(x for x in range(1, p) if x not in squares)
        assert least_nonsquare(F) == expect


def test_matrix_inverse_roundtrip():
    F = fq_make(3, 2)
    rng = np.random.default_rng(0)
    done = 0
    while done < 50:
        A = rng.integers(0, F.q, size=(3, 3))
        try:
            Ai = F.mat_inv(A)
        except ZeroInverse:
            continue
        assert np.array_equal(F.matmul(A, Ai), F.identity_matrix(3))
        done += 1


def test_canonical_scalar_class_first_nonzero_is_one():
    F = fq_make(7)
    A = np.array([[0, 3], [5, 2]])
    C = F.canonical_scalar_class(A)
    assert C[0, 1] == 1
    for c in range(1, 7):
        assert np.array_equal(F.canonical_scalar_class(F.scale(c, A)), C)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_field_ops_properties(pr, data):
    F = fq_make(*pr)
    x, y, z = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    assert F.add(x, y) == F.add(y, x)
    assert F.sub(F.add(x, y), y) == x
    k = data.draw(st.integers(0, 3 * F.q))
    expect = 1
    for _ in range(k):
        expect = F.mul(expect, x)
    assert F.pow(x, k) == expect

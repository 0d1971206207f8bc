"""Exact linear algebra helpers: HNF/SNF canonicity, GF(p) routines."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from drinfeld.intlinalg import (
    complete_basis_modp,
    det_int,
    gaussian_binomial,
    hnf_rows,
    in_span_modp,
    inv_scaled,
    matinv_mod,
    matmul,
    pval,
    rank_int,
    rank_modp,
    rref_modp,
    snf_divisors,
    subspaces_modp,
    vecmat,
)


def T(m):
    return tuple(tuple(row) for row in m)


def random_unimodular(n, rng, steps=12):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-3, 3)
        for k in range(n):
            m[i][k] += c * m[j][k]
        if rng.random() < 0.3:
            m[i], m[j] = m[j], m[i]
    return m


def test_pval():
    assert pval(12, 2) == 2
    assert pval(12, 3) == 1
    assert pval(5, 3) == 0
    assert pval(Fraction(1, 9), 3) == -2
    assert pval(Fraction(18, 5), 3) == 2
    with pytest.raises(ValueError):
        pval(0, 2)


def test_det_and_inverse():
    m = [[2, 1, 0], [0, 3, 1], [1, 0, 1]]
    d = det_int(m)
    n, dd = inv_scaled(m)
    assert dd == d
    prod = matmul(m, n)
    assert prod == T([[d if i == j else 0 for j in range(3)] for i in range(3)])


# HNF of an already-triangular basis
def test_hnf_fixed_point():
    rows = [[2, 1], [0, 4]]
    assert hnf_rows(rows) == T([[2, 1], [0, 4]])
    assert hnf_rows([[2, 5], [0, 4]]) == T([[2, 1], [0, 4]])


def test_hnf_unimodular_invariance():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        if rank_int(rows) < n:
            continue
        h1 = hnf_rows(rows)
        u = random_unimodular(n, rng)
        h2 = hnf_rows(matmul(u, rows))
        assert h1 == h2


def test_hnf_drops_dependent_rows():
    rows = [[1, 2, 3], [2, 4, 6], [0, 0, 5]]
    h = hnf_rows(rows)
    assert len(h) == 2
    assert rank_int(rows) == 2


def test_snf_divisors():
    assert snf_divisors([[2, 0], [0, 3]]) == [1, 6]
    assert snf_divisors([[1, 0], [0, 1]]) == [1, 1]
    assert snf_divisors([[2, 4], [4, 8]]) == [2]
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(1, 3)
        rows = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
        divs = snf_divisors(rows)
        for a, b in zip(divs, divs[1:]):
            assert b % a == 0


def test_matinv_mod_roundtrip():
    rng = random.Random(11)
    for p, k in [(2, 3), (3, 2), (5, 2)]:
        mod = p**k
        for _ in range(20):
            n = rng.randint(1, 3)
            while True:
                m = [[rng.randrange(mod) for _ in range(n)] for _ in range(n)]
                if det_int(m) % p:
                    break
            inv = matinv_mod(m, p, k)
            prod = matmul(m, inv)
            assert all(
                prod[i][j] % mod == (1 if i == j else 0)
                for i in range(n)
                for j in range(n)
            )


def test_rref_and_span():
    rows = [[1, 2, 0], [0, 0, 1]]
    r, piv = rref_modp(rows, 3)
    assert piv == (0, 2)
    assert in_span_modp(r, piv, [1, 2, 1], 3)
    assert in_span_modp(r, piv, [2, 4, 0], 3)
    assert not in_span_modp(r, piv, [0, 1, 0], 3)
    assert rank_modp([[2, 4], [1, 2]], 3) == 1


def test_complete_basis():
    rng = random.Random(5)
    for p in (2, 3):
        for n in (2, 3, 4):
            start = [[rng.randrange(p) for _ in range(n)]]
            if not any(start[0]):
                start[0][0] = 1
            cands = [
                [1 if i == j else 0 for j in range(n)] for i in range(n)
            ]
            added = complete_basis_modp(start, cands, p)
            assert rank_modp(start + added, p) == n


# subspace counts match the Gaussian binomial
@given(
    st.sampled_from([2, 3]),
    st.integers(min_value=1, max_value=4),
)
def test_subspace_counts(p, n):
    for k in range(n + 1):
        count = sum(1 for _ in subspaces_modp(n, k, p))
        assert count == gaussian_binomial(n, k, p)


def test_subspaces_are_canonical_rref():
    seen = set()
    for basis in subspaces_modp(4, 2, 2):
        r, piv = rref_modp([list(b) for b in basis], 2)
        key = tuple(tuple(row) for row in r)
        assert key == tuple(tuple(b) for b in basis)
        assert key not in seen
        seen.add(key)


def test_gaussian_binomial_values():
    assert gaussian_binomial(2, 1, 2) == 3
    assert gaussian_binomial(2, 1, 3) == 4
    assert gaussian_binomial(3, 1, 2) == 7
    assert gaussian_binomial(3, 2, 2) == 7
    assert gaussian_binomial(3, 1, 3) == 13


def test_vecmat():
    assert vecmat([1, 2], [[1, 0], [1, 1]]) == (3, 2)

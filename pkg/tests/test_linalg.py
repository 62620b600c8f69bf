from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reltilt import linalg as la


def naive_rank(a, p):
    # elimination on python ints, written independently of rref
    rows = [list(map(int, r)) for r in np.asarray(a)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def matrices(p, max_dim=5):
    return st.tuples(st.integers(0, max_dim), st.integers(0, max_dim)).flatmap(
        lambda rc: st.lists(st.integers(0, p - 1), min_size=rc[0] * rc[1],
                            max_size=rc[0] * rc[1]).map(
            lambda xs: np.array(xs, dtype=np.int64).reshape(rc)))


def test_rank_trivial():
    assert la.rank(la.identity(3), 5) == 3
    assert la.rank(la.zeros(2, 4), 5) == 0


def test_rank_random_against_oracle():
    rng = np.random.default_rng(7)
    a = rng.integers(0, 3, size=(4, 4))
    assert la.rank(a, 3) == naive_rank(a, 3)


@settings(max_examples=60, deadline=None)
@given(matrices(7))
def test_rank_property(a):
    assert la.rank(a, 7) == naive_rank(a, 7)
    assert la.rank(a, 7) <= min(a.shape)


def test_kernel_examples():
    assert la.kernel_basis(la.identity(3), 5).shape == (3, 0)
    k = la.kernel_basis(la.zeros(2, 3), 5)
    assert np.array_equal(k, la.identity(3))


def test_kernel_f2_enumerated():
    a = la.mat([[1, 1]], 2)
    k = la.kernel_basis(a, 2)
    brute = [v for v in product(range(2), repeat=2) if (v[0] + v[1]) % 2 == 0 and any(v)]
    assert [tuple(k[:, 0])] == brute


@settings(max_examples=60, deadline=None)
@given(matrices(5))
def test_kernel_property(a):
    k = la.kernel_basis(a, 5)
    assert k.shape[1] == a.shape[1] - la.rank(a, 5)
    if a.shape[0] and k.shape[1]:
        assert not la.mul(a, k, 5).any()
    assert la.rank(k, 5) == k.shape[1]


def test_solve_matches_inverse():
    a = la.mat([[1, 2, 0], [0, 1, 3], [1, 0, 1]], 5)
    b = np.array([1, 2, 3])
    inv = la.invert(a, 5)
    assert inv is not None
    assert np.array_equal(la.solve(a, b, 5), la.mul(inv, b, 5))


def test_solve_inconsistent_and_empty():
    a = la.mat([[1, 0], [1, 0]], 5)
    assert la.solve(a, np.array([1, 2]), 5) is None
    x = la.solve(la.zeros(0, 3), np.zeros(0, dtype=np.int64), 5)
    assert x.shape == (3,)
    with pytest.raises(ValueError):
        la.solve(a, np.array([1, 2, 3]), 5)


def test_invert():
    a = la.mat([[1, 1], [0, 1]], 2)
    inv = la.invert(a, 2)
    assert np.array_equal(inv, [[1, 1], [0, 1]])
    assert np.array_equal(la.mul(a, inv, 2), la.identity(2))
    assert la.invert(la.mat([[1, 2], [2, 4]], 5), 5) is None
    with pytest.raises(ValueError):
        la.invert(la.zeros(2, 3), 5)


@settings(max_examples=40, deadline=None)
@given(matrices(3, 4))
def test_invert_property(a):
    if a.shape[0] != a.shape[1]:
        return
    inv = la.invert(a, 3)
    if la.rank(a, 3) == a.shape[0]:
        assert np.array_equal(la.mul(a, inv, 3), la.identity(a.shape[0]))
    else:
        assert inv is None


def test_large_prime_no_overflow():
    p = 2147483647
    a = np.full((40, 40), p - 1, dtype=np.int64)
    prod = la.mul(a, a, p)
    assert int(prod[0, 0]) == (40 * (p - 1) ** 2) % p


def test_check_prime():
    assert la.check_prime(5) == 5
    for bad in (1, 4, 2**31 + 1):
        with pytest.raises(ValueError):
            la.check_prime(bad)


def test_quotient_coordinates():
    sub = la.mat([[1], [1], [0]], 5)
    q, s = la.quotient_coordinates(sub, 3, 5)
    assert q.shape == (2, 3)
    assert not la.mul(q, sub, 5).any()
    assert np.array_equal(la.mul(q, s, 5), la.identity(2))


def test_poly_roots():
    # (x - 1)(x - 3)(x^2 + 1) over F_7: x^2 + 1 has no roots mod 7
    f = la.poly_mul(la.poly_mul([-1 % 7, 1], [-3 % 7, 1], 7), [1, 0, 1], 7)
    assert la.poly_roots(f, 7) == [1, 3]
    p = 10007
    g = la.poly_mul([p - 5, 1], [p - 11, 1], p)
    assert la.poly_roots(g, p) == [5, 11]

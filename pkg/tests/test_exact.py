from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubiclat import kernels
from cubiclat.errors import SingularMinor
from cubiclat.exact import (
    OMEGA,
    Eisenstein,
    complete_basis,
    det,
    eisenstein_block_embedding,
    eisenstein_rank,
    elementary_divisors,
    hnf,
    integer_kernel,
    inverse_rational,
    inverse_unimodular,
    is_positive_definite,
    matmul,
    rank,
    rational_ldlt,
    saturation,
    snf,
    transpose,
)
from helpers import naive_det, random_pd_gram

small = st.integers(-9, 9)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def square(max_n=4):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)
    )


def test_snf_round_trip_thousand_matrices(rng):
    for _ in range(1000):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        u, d, v = snf(a)
        assert matmul(matmul(u, a), v) == d
        assert abs(naive_det(u)) == 1 and abs(naive_det(v)) == 1
        diag = [d[i][i] for i in range(min(m, n))]
        assert all(d[i][j] == 0 for i in range(m) for j in range(n) if i != j)
        nz = [x for x in diag if x]
        assert all(x > 0 for x in nz)
        assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
        if m == n:
            assert abs(naive_det(a)) == (0 if len(nz) < n else abs(naive_det(d)))


@given(square(5))
def test_det_matches_laplace(a):
    assert det(a) == naive_det(a)


def test_det_large_exact():
    # 21x21 with entries +-3 would overflow doubles; compare with Fraction elimination
    import random

    r = random.Random(5)
    a = [[r.choice((-3, -1, 0, 1, 3)) for _ in range(21)] for _ in range(21)]
    m = [[Fraction(x) for x in row] for row in a]
    sign, prod = 1, Fraction(1)
    for c in range(21):
        p = next((i for i in range(c, 21) if m[i][c]), None)
        if p is None:
            prod = Fraction(0)
            break
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        prod *= m[c][c]
        for i in range(c + 1, 21):
            f = m[i][c] / m[c][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    assert det(a) == sign * prod


def test_ldlt_reconstruction(rng):
    for _ in range(200):
        n = rng.randint(1, 5)
        g = random_pd_gram(rng, n)
        low, dg = rational_ldlt(g)
        rebuilt = [[sum(low[i][k] * dg[k] * low[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
        assert rebuilt == [[Fraction(x) for x in row] for row in g]
        assert all(x > 0 for x in dg)
        assert is_positive_definite(g)


def test_ldlt_singular_minor():
    with pytest.raises(SingularMinor) as exc:
        rational_ldlt(((1, 1), (1, 1)))
    assert exc.value.stage == 2


def test_positive_definite_rejects_indefinite():
    assert not is_positive_definite(((1, 2), (2, 1)))
    assert not is_positive_definite(((0, 1), (1, 0)))
    assert is_positive_definite(((2, -1), (-1, 2)))


@given(matrices())
def test_hnf_spans_same_lattice(a):
    h = hnf(a)
    assert len(h) == rank(a)
    if h:
        # every row of a is an integer combination of h and vice versa: compare SNF of stacked systems
        assert elementary_divisors(list(a) + list(h)) == elementary_divisors(h)
        assert elementary_divisors(list(a) + list(h)) == elementary_divisors(a)


@given(matrices())
def test_integer_kernel(a):
    n = len(a[0])
    k = integer_kernel(a, n)
    assert len(k) == n - rank(a)
    for row in k:
        assert all(sum(ai * x for ai, x in zip(arow, row)) == 0 for arow in a)
    if k:
        assert elementary_divisors(k) == (1,) * len(k)


@given(st.lists(small, min_size=1, max_size=6).filter(lambda v: any(v)))
def test_complete_basis(v):
    from math import gcd

    g = gcd(*v)
    v = [x // g for x in v]
    b = complete_basis(v)
    assert list(b[0]) == v
    assert abs(det(b)) == 1
    assert matmul(b, inverse_unimodular(b)) == tuple(tuple(int(i == j) for j in range(len(v))) for i in range(len(v)))


@given(square(4))
def test_inverse_rational(a):
    if naive_det(a) == 0:
        return
    inv = inverse_rational(a)
    prod = [[sum(Fraction(a[i][k]) * inv[k][j] for k in range(len(a))) for j in range(len(a))] for i in range(len(a))]
    assert prod == [[Fraction(int(i == j)) for j in range(len(a))] for i in range(len(a))]


def test_saturation():
    assert saturation([(2, 0, 0), (0, 2, 2)]) in (((1, 0, 0), (0, 1, 1)), ((0, 1, 1), (1, 0, 0)))
    assert elementary_divisors(saturation([(2, 4, 6)])) == (1,)


eis = st.builds(Eisenstein, st.integers(-5, 5), st.integers(-5, 5))


@given(eis, eis, eis)
def test_eisenstein_ring_laws(x, y, z):
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x.norm() >= 0
    assert (x * y).norm() == x.norm() * y.norm()


def test_omega_is_cube_root_of_unity():
    assert OMEGA ** 3 == Eisenstein(1)
    assert OMEGA ** 2 + OMEGA + 1 == Eisenstein(0)


@given(st.integers(1, 3).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(eis, min_size=n, max_size=n), min_size=m, max_size=m))))
def test_eisenstein_rank_vs_block_embedding(rows):
    r = eisenstein_rank(rows)
    assert 2 * r == rank(eisenstein_block_embedding(rows))
    assert r == kernels.eisenstein_rank([[x.as_pair() for x in row] for row in rows], backend="python")


@given(st.integers(1, 3).flatmap(
    lambda m: st.lists(st.lists(eis, min_size=3, max_size=3), min_size=m, max_size=m)))
def test_eisenstein_rank_is_transpose_invariant(rows):
    assert eisenstein_rank(rows) == eisenstein_rank(transpose(rows))

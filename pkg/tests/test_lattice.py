import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubiclat import kernels
from cubiclat.errors import CapExceeded, NotGluing
from cubiclat.exact import bilinear, det, gram_of, matmul
from cubiclat.lattice import (
    Lattice,
    Parity,
    Sublattice,
    canonical_gram,
    disc_group,
    distinguished_elements,
    find_isometry,
    find_primitive_embedding,
    glue,
    has_roots,
    is_distinguished,
    is_isometric,
    is_primitive,
    isotropic_subgroups,
    minimum,
    norm_histogram,
    orthogonal_complement,
    overlattices,
    parity,
    primitive_closure,
    short_vectors,
    vectors_up_to_norm,
)
from helpers import box_vectors, naive_det, quad, random_distinguished_rank3, random_pd_gram


def random_unimodular(rng: random.Random, n: int, steps: int = 8):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            m[i] = [-x for x in m[i]]
            continue
        k = rng.choice((-2, -1, 1, 2))
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
        if rng.random() < 0.3:
            m[i], m[j] = m[j], m[i]
    return tuple(tuple(r) for r in m)


gram_strategy = st.integers(1, 5).flatmap(
    lambda n: st.integers(0, 2**32).map(lambda s: random_pd_gram(random.Random(s), n))
)


@given(gram_strategy)
def test_disc_group_order_equals_disc(g):
    lat = Lattice(g)
    grp = disc_group(lat)
    assert grp.order == abs(lat.disc)
    assert all(s > 1 for s in grp.invariant_factors)
    assert all(b % a == 0 for a, b in zip(grp.invariant_factors, grp.invariant_factors[1:]))
    # generators are dual vectors of the stated order
    for s, v in zip(grp.invariant_factors, grp.generators):
        for e in range(lat.rank):
            unit = tuple(int(i == e) for i in range(lat.rank))
            assert bilinear(g, v, unit).denominator == 1
        assert grp.element_order(tuple(int(i == grp.generators.index(v)) for i in range(grp.length))) == s


@given(gram_strategy)
def test_disc_group_forms(g):
    lat = Lattice(g)
    grp = disc_group(lat)
    k = grp.length
    for i in range(k):
        for j in range(k):
            assert grp.b[i][j] == grp.b[j][i]
    if parity(lat) is Parity.EVEN:
        assert grp.q is not None
        elems = list(grp.elements())[:30]
        for x in elems:
            for y in elems[:10]:
                lhs = grp.qvalue(grp.add(x, y)) - grp.qvalue(x) - grp.qvalue(y)
                assert (lhs - 2 * grp.bvalue(x, y)) % 2 == 0
    else:
        assert grp.q is None


@given(gram_strategy)
def test_overlattice_index_identity(g):
    lat = Lattice(g)
    if abs(lat.disc) > 2000:
        return
    for over in overlattices(lat, even=False):
        assert over.index ** 2 * abs(over.lattice.disc) == abs(lat.disc)
        for row in over.basis:
            assert over.to_coords(row) is not None


def test_overlattice_of_a1_squared_times_four():
    # 2Z + 2Z with norm 2 each sits in Z^2 scaled; A1 + A1 has D4-type glue only in even rank 4
    lat = Lattice(((4, 0), (0, 4)))
    overs = overlattices(lat, even=False)
    assert sorted(abs(o.lattice.disc) for o in overs) == [1, 4, 4, 4]


def test_glue_identity():
    a2 = Lattice(((2, -1), (-1, 2)))
    three = Lattice(((3,),))
    x = disc_group(a2).generators[0]
    # q values 2/3 and 1/3 cancel mod 1
    out = glue(a2, three, [(x, (Fraction(1, 3),))])
    assert a2.disc * three.disc == out.disc * 3 ** 2
    assert out.disc == 1
    with pytest.raises(NotGluing):
        glue(a2, a2, [(x, x)])


def test_isotropic_subgroup_cap():
    lat = Lattice(tuple(tuple(101 if i == j else 0 for j in range(2)) for i in range(2)))
    with pytest.raises(CapExceeded):
        isotropic_subgroups(disc_group(lat), cap=1000)


def test_cap_from_environment(monkeypatch):
    lat = Lattice(((101, 0), (0, 101)))
    monkeypatch.setenv("CUBICLAT_CAP", "100")
    with pytest.raises(CapExceeded):
        isotropic_subgroups(disc_group(lat))
    monkeypatch.setenv("CUBICLAT_CAP", "20000")
    assert isotropic_subgroups(disc_group(lat))


def test_short_vectors_against_box_oracle(rng):
    for _ in range(200):
        n = rng.randint(1, 4)
        g = random_pd_gram(rng, n, spread=2)
        bound = rng.randint(1, 3 * max(g[i][i] for i in range(n)))
        got = short_vectors(Lattice(g), bound)
        assert {v for _, v in got} == box_vectors(g, bound)
        assert all(nv == quad(g, v) for nv, v in got)


@given(gram_strategy, st.integers(1, 30))
def test_backends_agree(g, bound):
    py = sorted(kernels.short_vectors(g, bound, backend="python"))
    comp = sorted(kernels.short_vectors(g, bound, backend="compiled"))
    assert py == comp


def test_compiled_backend_refuses_overflow():
    g = ((10**12, 0), (0, 10**12))
    assert kernels.short_vectors(g, 10**13) == kernels.short_vectors(g, 10**13, backend="python")


@given(gram_strategy)
def test_has_roots_iff_minimum_at_most_two_for_distinguished(g):
    lat = Lattice(g)
    mn = minimum(lat)
    assert mn == min(quad(g, v) for v in box_vectors(g, min(g[i][i] for i in range(len(g)))))
    if distinguished_elements(lat):
        assert has_roots(lat) == (mn <= 2)


def test_has_roots_counterexample_without_distinguished():
    # norm-1 vectors are not roots
    lat = Lattice(((1,),))
    assert minimum(lat) == 1 and not has_roots(lat)


@pytest.mark.parametrize("d", [8, 12, 14, 18, 20, 24, 26, 30])
def test_rank2_roots_iff_disc_below_eight(d):
    from cubiclat.moduli import cd_gram

    assert not has_roots(cd_gram(d))
    for small in (2, 3, 5, 6):
        for g in (((3, 0), (0, small)), ((3, 1), (1, small))):
            lat = Lattice(g)
            if lat.disc > 0 and distinguished_elements(lat) and lat.disc == det(g):
                assert has_roots(lat) == (lat.disc < 8)


def test_distinguished_needs_even_complement():
    assert is_distinguished(Lattice(((3, 0), (0, 2))), (1, 0))
    assert not is_distinguished(Lattice(((3, 0), (0, 1))), (1, 0))
    assert not is_distinguished(Lattice(((2, 0), (0, 2))), (1, 0))


def test_distinguished_matches_complement_parity(rng):
    for _ in range(50):
        g = random_distinguished_rank3(rng)
        lat = Lattice(g)
        for v in distinguished_elements(lat):
            comp = orthogonal_complement(Sublattice(lat, (v,)))
            assert parity(comp) is Parity.EVEN


def test_canonical_gram_is_isometry_invariant(rng):
    for _ in range(60):
        n = rng.randint(2, 4)
        g = random_pd_gram(rng, n, spread=2)
        u = random_unimodular(rng, n)
        h = gram_of(u, g)
        assert canonical_gram(Lattice(g)) == canonical_gram(Lattice(h))
        t = find_isometry(Lattice(h), Lattice(g))
        assert t is not None and gram_of(t, g) == h


def test_find_isometry_implies_invariants(rng):
    for _ in range(40):
        g1 = random_pd_gram(rng, 3, spread=2)
        g2 = random_pd_gram(rng, 3, spread=2)
        l1, l2 = Lattice(g1), Lattice(g2)
        if find_isometry(l1, l2) is not None:
            assert l1.disc == l2.disc
            assert disc_group(l1).invariant_factors == disc_group(l2).invariant_factors
            assert norm_histogram(l1, 10) == norm_histogram(l2, 10)
            assert canonical_gram(l1) == canonical_gram(l2)
        else:
            assert canonical_gram(l1) != canonical_gram(l2)


def test_non_isometric_same_disc():
    # two classes of binary forms of discriminant 23 up to isometry: x^2+xy+6y^2 and 2x^2+xy+3y^2 (Gram doubled)
    a = Lattice(((2, 1), (1, 12)))
    b = Lattice(((4, 1), (1, 6)))
    assert a.disc == b.disc == 23
    assert not is_isometric(a, b)


def _components_with_several_distinguished():
    from cubiclat.moduli import intersect_divisors

    for d1, d2 in ((20, 38), (20, 12), (8, 14)):
        for c in intersect_divisors(d1, d2).components:
            yield c.lattice


def test_distinguished_elements_related_by_isometry():
    checked = 0
    for lat in _components_with_several_distinguished():
        ds = distinguished_elements(lat)
        for v in ds[1:]:
            t = find_isometry(lat, lat, pins=(ds[0], v))
            if t is None:
                t = find_isometry(lat, lat, pins=(ds[0], tuple(-x for x in v)))
            assert t is not None
            checked += 1
    assert checked == 5


def test_primitive_embedding_and_closure():
    big = Lattice(((3, 1, 0), (1, 5, 0), (0, 0, 8)))
    small = Lattice(((3, 1), (1, 5)))
    emb = find_primitive_embedding(small, (1, 0), big, (1, 0, 0))
    assert emb is not None and gram_of(emb, big.gram) == small.gram
    sub = Sublattice(big, ((2, 0, 0), (0, 0, 1)))
    assert not is_primitive(sub)
    assert is_primitive(primitive_closure(sub))


def test_vectors_up_to_norm_symmetric():
    lat = Lattice(((2, 1), (1, 2)))
    vs = vectors_up_to_norm(lat, 2)
    assert len(vs) == 3
    assert all(lat.norm(v) == 2 for v in vs)


def test_lattice_validation():
    with pytest.raises(ValueError):
        Lattice(((1, 2), (3, 4)))
    with pytest.raises(ValueError):
        Lattice(((1, 1), (1, 1)))


def test_overlattice_to_coords():
    lat = Lattice(((4, 0), (0, 4)))
    over = next(o for o in overlattices(lat, even=False) if o.lattice.disc == 4)
    v = over.basis[0]
    assert over.to_coords(v) in ((1, 0), (0, 1))
    with pytest.raises(ValueError):
        over.to_coords((Fraction(1, 3), 0))
    assert matmul(((1, 0),), ((1, 0), (0, 1))) == ((1, 0),)
    assert naive_det(over.lattice.gram) == over.lattice.disc

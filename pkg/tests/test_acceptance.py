"""End-to-end acceptance checks, one test per criterion, each with its time limit.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary prints
one PASS/FAIL line per criterion.
"""
import functools
import itertools
import json
import random
import time
from collections import Counter
from fractions import Fraction

import pytest

import cubiclat
from cubiclat import cli, exact, fermat, lattice, moduli, quadform
from cubiclat.lattice import Lattice, distinguished_elements, find_isometry, has_roots, is_isometric
from helpers import box_vectors, has_k3_condition, minors2_gcd, naive_det, quad, random_distinguished_rank3, random_pd_gram


def _clear_caches():
    for mod in (exact, lattice, quadform, moduli, fermat, cli):
        for obj in vars(mod).values():
            if isinstance(obj, functools._lru_cache_wrapper):
                obj.cache_clear()


class Timer:
    def __init__(self, limit: float):
        self.limit = limit

    def __enter__(self):
        _clear_caches()
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        print(f"elapsed {self.elapsed:.2f} s (limit {self.limit} s)")
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f} s, limit {self.limit} s"


@pytest.mark.criterion(1)
def test_criterion_01_fermat_verification():
    with Timer(30):
        code, out, err = cli.run(["fermat", "verify", "--json"])
    rep = json.loads(out)["result"]
    assert code == 0, err
    assert rep["plane_count"] == 405
    assert rep["gram_matches_reference"] is True
    assert rep["det"] == 27
    assert rep["invariant_factors"] == [3, 9]
    assert rep["nontrivial_isotropic_subgroups"] == 1
    assert rep["h2_matches_reference"] is True
    assert rep["pairing_table_symmetric"] and rep["pairing_values_ok"] and rep["planes_on_cubic"]
    # the root lies in the index-3 overlattice, has norm 2 and is orthogonal to h^2
    fl = fermat.fermat_lattice()
    root = tuple(Fraction(x) for x in rep["root_orthogonal_to_h2"])
    assert exact.bilinear(fl.gram, root, root) == 2
    assert exact.bilinear(fl.gram, root, fl.h2_coords) == 0
    assert all(x.denominator in (1, 3) for x in root)
    assert rep["all_pass"] is True


@pytest.mark.criterion(2)
def test_criterion_02_intersect_20_38():
    expected = [45, 92, 133, 168, 197, 220, 237, 248, 253, 252, 245, 232, 213, 188, 157, 120, 77]
    with Timer(10):
        code, out, err = cli.run(["intersect", "20", "38", "--json"])
    rep = json.loads(out)["result"]
    assert code == 0, err
    assert rep["count"] == 17
    assert Counter(rep["discs"]) == Counter(expected)


@pytest.mark.criterion(3)
def test_criterion_03_intersect_20_12():
    with Timer(10):
        code, out, err = cli.run(["intersect", "20", "12", "--json"])
    rep = json.loads(out)["result"]
    assert code == 0, err
    assert rep["count"] == 6
    assert Counter(rep["discs"]) == Counter([80, 77, 68, 53, 32, 20])
    (c20,) = [c for c in rep["components"] if c["disc"] == 20]
    assert c20["provenance"]["kind"] == "Overlattice"
    target = Lattice(((3, 1, 1), (1, 3, -3), (1, -3, 7)))
    assert is_isometric(Lattice(tuple(map(tuple, c20["gram"]))), target)


@pytest.mark.criterion(4)
def test_criterion_04_fermat_all_divisors():
    with Timer(60):
        code, out, err = cli.run(["fermat", "all-divisors", "1000", "--json"])
        witnesses = fermat.all_divisors(1000)
    assert code == 0, err
    assert json.loads(out)["result"]["result"] == "all pass"
    wanted = [d for d in range(7, 1001) if d % 6 in (0, 2)]
    assert sorted(witnesses) == wanted
    fl = fermat.fermat_lattice()
    g, h2 = fl.gram, fl.h2_coords
    for d, w in witnesses.items():
        v = w.vector
        assert 3 * quad(g, v) - exact.bilinear(g, h2, v) ** 2 == d
        assert minors2_gcd(h2, v) == 1


M_MINUS_4 = ((3, 4, 7), (4, 12, -3), (7, -3, 49))
M_PLUS_4 = ((3, 4, -1), (4, 12, 5), (-1, 5, 17))


def _diag_lattice(ns):
    return Lattice(tuple(tuple(3 if i == j == 0 else (2 * ns[i - 1] if i == j else 0) for j in range(11))
                         for i in range(11)))


def _sample_tuples(rng, condition):
    out = []
    while len(out) < 20:
        if condition == 1:
            ns = [3 * rng.randint(1, 8) for _ in range(10)]
        elif condition == 2:
            ns = [2 * rng.randint(1, 12) for _ in range(10)]
        else:
            p = rng.choice((5, 11, 17, 23))
            ns = [p * rng.randint(1, 4) for _ in range(10)]
        if min(ns) >= 2:
            out.append(ns)
    return out


@pytest.mark.criterion(5)
def test_criterion_05_admissibility_battery():
    rng = random.Random(814)
    with Timer(60):
        for d in range(7, 501):
            if d % 6 not in (0, 2):
                continue
            v = quadform.is_admissible(moduli.cd_gram(d), (1, 0))
            assert v.admissible == has_k3_condition(d), d
        witnesses = {}
        for name, g in (("M'-4", M_MINUS_4), ("M'4", M_PLUS_4)):
            lat = Lattice(g)
            assert naive_det(g) in (197, 213)
            v = quadform.is_admissible(lat, (1, 0, 0))
            assert v.admissible and v.witness is not None
            w, d = v.witness
            assert has_k3_condition(d)
            assert quadform.labelling_disc(lat, (1, 0, 0), w) == d and minors2_gcd((1, 0, 0), w) == 1
            witnesses[name] = d
            for bad in (8, 14, 18, 26, 38, 42):
                assert quadform.labellings(lat, (1, 0, 0), bad) == []
        assert witnesses == {"M'-4": 98, "M'4": 206}
        for condition in (1, 2, 3):
            for ns in _sample_tuples(rng, condition):
                lat = _diag_lattice(ns)
                o = (1,) + (0,) * 10
                assert not quadform.is_admissible(lat, o).admissible, (condition, ns)
                rep = moduli.hypothesis_report(lat, o)
                assert rep.rank == 11 and "realizable-small-rank" in rep.branches


@pytest.mark.criterion(6)
def test_criterion_06_catalog_cross_validation():
    with Timer(60):
        results = {w: moduli.cross_validate_catalog(moduli.divisor_catalog(w, 50)) for w in ("c8", "c18")}
    for which, pairs in results.items():
        assert pairs
        for e, verdict in pairs:
            assert verdict == e.admissible, (which, e.parameters)
            n = e.parameters[-1]
            tau = e.parameters[-2]
            if which == "c8":
                formula = 16 * n - 3 * tau * tau
            else:
                formula = 36 * n - 3 * tau * tau + (12 if e.parameters[0] == 1 else 36)
            assert e.disc == naive_det(e.gram) == formula == e.formula_disc


@pytest.mark.criterion(7)
def test_criterion_07_ramanujan_and_lagrange():
    with Timer(30):
        missing = []
        for l in range(1, 10001):
            r = fermat.ramanujan_rep(l)
            if r is None:
                missing.append(l)
            else:
                x, y, z, u = r
                assert 2 * (x * x + y * y + z * z) + 3 * u * u == l
        for n in range(0, 10001):
            a, b, c, d = fermat.four_squares(n)
            assert a * a + b * b + c * c + d * d == n
    assert missing == [1, 17]


@pytest.mark.criterion(8)
def test_criterion_08_rank8_lattice():
    with Timer(60):
        lat = moduli.all_divisor_lattice()
        assert not has_roots(lat)
        assert not any(quad(lat.gram, v) == 2 for v in box_vectors(lat.gram, 2))
        o = lat.distinguished
        for d in range(7, 1001):
            if d % 6 not in (0, 2):
                continue
            v = moduli.all_divisor_witness(d)
            assert 3 * quad(lat.gram, v) - exact.bilinear(lat.gram, o, v) ** 2 == d
            assert minors2_gcd(o, v) == 1
        assert quadform.labellings(lat, o, 14)
        rep = moduli.hypothesis_report(lat)
    assert "irreducible" in rep.branches and rep.codimension == 7


@pytest.mark.criterion(9)
def test_criterion_09_triple_intersection():
    with Timer(600):
        first = moduli.intersect_divisors(8, 12)
        comps = []
        for c in first.components:
            comps.extend(moduli.intersect_lattice_divisor(c.lattice, c.distinguished, 18).components)
        merged = moduli.intersect_many([8, 12, 18])
    rank4 = [c for c in merged.components if c.rank == 4]
    report = f"found {len(merged.components)} components ({len(rank4)} of rank 4); expected exactly 38"
    assert len(merged.components) == 38, report
    assert len(rank4) == 38, report
    for a, b in itertools.combinations(merged.components, 2):
        assert find_isometry(a.lattice, b.lattice) is None
    assert {c.gram for c in merged.components} <= {c.gram for c in comps}


@pytest.mark.criterion(10)
def test_criterion_10_property_suites():
    rng = random.Random(10)
    with Timer(120):
        for _ in range(1000):
            m, n = rng.randint(1, 4), rng.randint(1, 4)
            a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
            u, dm, v = exact.snf(a)
            assert exact.matmul(exact.matmul(u, a), v) == dm
            if m == n:
                assert abs(naive_det(a)) == abs(naive_det(dm))
        for _ in range(200):
            k = rng.randint(1, 5)
            g = random_pd_gram(rng, k)
            low, dg = exact.rational_ldlt(g)
            assert all(sum(low[i][t] * dg[t] * low[j][t] for t in range(k)) == g[i][j]
                       for i in range(k) for j in range(k))
        touched = []
        for _ in range(200):
            k = rng.randint(1, 4)
            g = random_pd_gram(rng, k, spread=2)
            bound = rng.randint(1, 3 * max(g[i][i] for i in range(k)))
            got = lattice.short_vectors(Lattice(g), bound)
            assert {x for _, x in got} == box_vectors(g, bound)
            if abs(naive_det(g)) <= 400:
                touched.append(Lattice(g))
        for lat in touched:
            for over in lattice.overlattices(lat, even=False):
                assert over.index ** 2 * abs(over.lattice.disc) == abs(lat.disc)
        rank3 = [Lattice(random_distinguished_rank3(rng)) for _ in range(100)]
        for d1, d2 in ((20, 38), (20, 12), (8, 14), (12, 18), (8, 12)):
            fam = moduli._family(d1, d2)
            rank3 += [Lattice(fam.gram(t)) for t in moduli.tau_ranges(d1, d2)[0]]
            rank3 += [c.lattice for c in moduli.intersect_divisors(d1, d2).components]
        checked = 0
        for lat in rank3:
            for o in distinguished_elements(lat)[:2]:
                assert lat.disc % 4 in (0, 1)
                split = quadform.splits_off(lat, o)
                v = quadform.is_admissible(lat, o, search_witness=False)
                assert v.lam == quadform.lambda_expected(lat, o, split) and v.split == split
                checked += 1
        assert checked >= 100
        hassett = [d for d in range(8, 300) if d % 6 in (0, 2)]
        for _ in range(20):
            d1, d2 = rng.sample(hassett, 2)
            b = moduli.rootfree_count_bounds(d1, d2)
            assert b.lower <= len(moduli.tau_ranges(d1, d2)[1]) <= b.upper, (d1, d2)


def test_backend_reported():
    assert cubiclat.BACKEND in ("compiled", "python")

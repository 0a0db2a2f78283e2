"""Planes on the Fermat cubic fourfold z1^3 + ... + z6^3 = 0 and its algebraic lattice.

Every plane on the Fermat cubic is cut out by three equations w^k z_a + z_b = 0
over a partition of {1..6} into pairs {a < b}; there are 15 * 27 = 405 of them.
Intersection numbers of plane classes are read off from the rank of the stacked
6x6 system of equations over Z[w].
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, isqrt
from typing import Iterable, Sequence

from . import _fermat_data as ref
from . import kernels
from .errors import NotALinePair, NotHassett, ReferenceMismatch
from .exact import Eisenstein, as_matrix, bilinear, det, inverse_rational, is_primitive_rows, vecmat
from .lattice import (
    Lattice,
    Sublattice,
    complement_basis,
    disc_group,
    isotropic_subgroups,
    overlattice_from_glue,
)

Pair = tuple[int, int]
_ONE: Pair = (1, 0)
_ZERO: Pair = (0, 0)
_POWERS: tuple[Pair, ...] = ((1, 0), (0, 1), (-1, -1))
_PAIRING_BY_RANK = {3: 3, 4: -1, 5: 1, 6: 0}


def _e(p: Pair) -> Eisenstein:
    return Eisenstein(*p)


@dataclass(frozen=True)
class Plane:
    """A projective plane in P^5 given by three linear equations over Z[w].

    ``rows`` holds the 3x6 coefficient matrix with entries a + b w stored as (a, b).
    """

    rows: tuple[tuple[Pair, ...], ...]
    label: str | None = field(default=None, compare=False)

    @classmethod
    def from_forms(cls, forms: Iterable[tuple[int, int, int]], label: str | None = None) -> "Plane":
        """Plane from triples (k, a, b) meaning w^k z_a + z_b = 0 (1-based indices)."""
        rows = []
        for k, a, b in forms:
            row = [_ZERO] * 6
            row[a - 1] = _POWERS[k % 3]
            row[b - 1] = _ONE
            rows.append(tuple(row))
        return cls(tuple(rows), label)

    @property
    def equations(self) -> tuple[tuple[Eisenstein, ...], ...]:
        return tuple(tuple(_e(x) for x in r) for r in self.rows)

    def rank(self) -> int:
        return kernels.eisenstein_rank([list(r) for r in self.rows])

    def pair_data(self) -> frozenset | None:
        """{(a, b, k)} when every equation has the shape w^k z_a + z_b with a < b."""
        out = []
        for r in self.rows:
            support = [i for i, x in enumerate(r) if x != _ZERO]
            if len(support) != 2 or r[support[1]] != _ONE or r[support[0]] not in _POWERS:
                return None
            out.append((support[0] + 1, support[1] + 1, _POWERS.index(r[support[0]])))
        if len({i for a, b, _ in out for i in (a, b)}) != 6:
            return None
        return frozenset(out)

    def spanning_vectors(self) -> tuple[tuple[Eisenstein, ...], ...]:
        """Three vectors spanning the plane (kernel of the equations, by cofactors)."""
        eq = self.equations
        for piv in itertools.combinations(range(6), 3):
            base = _det3([[eq[i][j] for j in piv] for i in range(3)])
            if base:
                break
        else:
            raise ValueError("equations do not have rank 3")
        free = [j for j in range(6) if j not in piv]
        out = []
        for f in free:
            v = [Eisenstein(0, 0)] * 6
            v[f] = base
            for p in piv:
                m = [[eq[i][f] if j == p else eq[i][j] for j in piv] for i in range(3)]
                v[p] = -_det3(m)
            out.append(tuple(v))
        return tuple(out)

    def lies_on_fermat(self) -> bool:
        """Whether z1^3 + ... + z6^3 vanishes identically on the plane."""
        vs = self.spanning_vectors()
        for alpha in _cubic_exponents(3):
            coeff = factorial(3) // (factorial(alpha[0]) * factorial(alpha[1]) * factorial(alpha[2]))
            total = Eisenstein(0, 0)
            for i in range(6):
                term = Eisenstein(1, 0)
                for j in range(3):
                    term = term * (vs[j][i] ** alpha[j])
                total = total + term
            if total * coeff:
                return False
        return True

    def __str__(self) -> str:
        parts = []
        for r in self.rows:
            terms = []
            for i, x in enumerate(r):
                if x != _ZERO:
                    c = {(1, 0): "", (0, 1): "w*", (-1, -1): "w^2*"}.get(x, f"({x[0]}+{x[1]}w)*")
                    terms.append(f"{c}z{i + 1}")
            parts.append(" + ".join(terms))
        return "{" + " = ".join(parts) + " = 0}"


def _det3(m) -> Eisenstein:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _cubic_exponents(n: int) -> list[tuple[int, ...]]:
    return [a for a in itertools.product(range(4), repeat=n) if sum(a) == 3]


def pair_partitions(items: Sequence[int] = (1, 2, 3, 4, 5, 6)) -> list[tuple[Pair, ...]]:
    if not items:
        return [()]
    first, rest = items[0], items[1:]
    out = []
    for i, other in enumerate(rest):
        for tail in pair_partitions(rest[:i] + rest[i + 1:]):
            out.append(((first, other),) + tail)
    return out


@lru_cache(maxsize=None)
def all_planes() -> tuple[Plane, ...]:
    """The 405 planes: 15 pair partitions times 27 choices of cube roots of -1."""
    out = []
    for part in pair_partitions():
        for ks in itertools.product(range(3), repeat=3):
            out.append(Plane.from_forms((k, a, b) for k, (a, b) in zip(ks, part)))
    return tuple(out)


@lru_cache(maxsize=None)
def _plane_index() -> dict:
    return {p.pair_data(): i for i, p in enumerate(all_planes())}


def same_plane(p: Plane, q: Plane) -> bool:
    """Row-space equality over Q(w)."""
    return kernels.eisenstein_rank([list(r) for r in p.rows + q.rows]) == 3


def find_plane(p: Plane) -> int | None:
    """Index in all_planes() of the plane with the same row space, if any."""
    key = p.pair_data()
    if key is not None:
        i = _plane_index().get(key)
        if i is not None:
            return i
    for i, q in enumerate(all_planes()):
        if same_plane(p, q):
            return i
    return None


def plane_pairing(p: Plane, q: Plane) -> int:
    """Intersection number of the classes: 3 if equal, -1 along a line, 1 at a point, 0 if disjoint."""
    r = kernels.eisenstein_rank([list(x) for x in p.rows + q.rows])
    return _PAIRING_BY_RANK[r]


@lru_cache(maxsize=None)
def pairing_table() -> tuple[tuple[int, ...], ...]:
    """Pairings among all 405 planes."""
    planes = all_planes()
    n = len(planes)
    t = [[0] * n for _ in range(n)]
    for i in range(n):
        t[i][i] = plane_pairing(planes[i], planes[i])
        for j in range(i + 1, n):
            t[i][j] = t[j][i] = plane_pairing(planes[i], planes[j])
    return tuple(tuple(r) for r in t)


def residual_plane(p: Plane, q: Plane) -> Plane:
    """Third plane in the cubic's section by the 3-space spanned by two planes meeting in a line."""
    if plane_pairing(p, q) != -1:
        raise NotALinePair("the planes do not meet in a line")
    span = [tuple(x.as_pair() for x in v) for v in p.spanning_vectors() + q.spanning_vectors()]
    found = []
    for r in all_planes():
        if same_plane(r, p) or same_plane(r, q):
            continue
        rs = [tuple(x.as_pair() for x in v) for v in r.spanning_vectors()]
        if kernels.eisenstein_rank([list(v) for v in span + rs]) == 4:
            found.append(r)
    if len(found) != 1:
        raise AssertionError(f"expected one residual plane, found {len(found)}")
    return found[0]


@dataclass(frozen=True)
class FermatLattice:
    gram: tuple[tuple[int, ...], ...]
    h2_coords: tuple[int, ...]
    plane_labels: tuple[str, ...]
    planes: tuple[Plane, ...]
    recovered: dict = field(default_factory=dict, compare=False)

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.gram, self.h2_coords, label="A(X_F)")


def _resolve_reference_planes() -> tuple[list[Plane], dict]:
    """Match the transcribed planes against all_planes(); repair entries not on the cubic.

    A transcribed plane that does not lie on the cubic is replaced by the unique
    plane whose pairings with the other planes reproduce its row of the
    reference Gram matrix.
    """
    planes: list[Plane | None] = []
    for i, forms in enumerate(ref.REFERENCE_PLANES):
        p = Plane.from_forms(forms, f"P{i + 1}")
        idx = find_plane(p) if p.lies_on_fermat() else None
        planes.append(None if idx is None else Plane(all_planes()[idx].rows, f"P{i + 1}"))
    recovered = {}
    known = [i for i, p in enumerate(planes) if p is not None]
    for i, p in enumerate(planes):
        if p is not None:
            continue
        row = ref.REFERENCE_GRAM[i]
        hits = [
            q for q in all_planes()
            if all(plane_pairing(q, planes[j]) == row[j] for j in known)
        ]
        if len(hits) != 1:
            raise ReferenceMismatch(f"P{i + 1}: {len(hits)} candidate planes match its Gram row")
        planes[i] = Plane(hits[0].rows, f"P{i + 1}")
        recovered[f"P{i + 1}"] = {"printed": str(Plane.from_forms(ref.REFERENCE_PLANES[i])), "used": str(hits[0])}
    return planes, recovered


@lru_cache(maxsize=None)
def fermat_lattice() -> FermatLattice:
    """Lattice spanned by the 21 reference planes, checked against the reference data."""
    planes, recovered = _resolve_reference_planes()
    gram = tuple(tuple(plane_pairing(p, q) for q in planes) for p in planes)
    if gram != ref.REFERENCE_GRAM:
        raise ReferenceMismatch("recomputed pairing matrix differs from the reference Gram matrix")
    inv = inverse_rational(gram)
    h2 = vecmat((Fraction(1),) * 21, inv)
    if any(x.denominator != 1 for x in h2):
        raise ReferenceMismatch("h^2 is not integral in the plane basis")
    h2 = tuple(int(x) for x in h2)
    if bilinear(gram, h2, h2) != 3 or h2 != ref.REFERENCE_H2:
        raise ReferenceMismatch("h^2 coordinates differ from the reference")
    labels = tuple(p.label for p in planes)
    return FermatLattice(gram, h2, labels, tuple(planes), recovered)


@lru_cache(maxsize=None)
def plane_classes() -> tuple[tuple[int, ...], ...]:
    """Coordinates of all 405 plane classes in the basis of the 21 reference planes."""
    fl = fermat_lattice()
    inv = inverse_rational(fl.gram)
    out = []
    for q in all_planes():
        p = tuple(plane_pairing(q, r) for r in fl.planes)
        c = vecmat(p, inv)
        if any(x.denominator != 1 for x in c):
            raise ReferenceMismatch(f"plane {q} has a non-integral class")
        out.append(tuple(int(x) for x in c))
    return tuple(out)


@dataclass(frozen=True)
class MaximalityReport:
    invariant_factors: tuple[int, ...]
    isotropic_elements: tuple[tuple[int, int], ...]
    nontrivial_isotropic_subgroups: int
    overlattice_index: int
    root: tuple[Fraction, ...]
    reference_root_ok: bool
    b_matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def ok(self) -> bool:
        return (
            self.invariant_factors == (3, 9)
            and self.isotropic_elements == ((0, 0), (0, 3), (0, 6))
            and self.nontrivial_isotropic_subgroups == 1
            and self.reference_root_ok
        )


def _dual(data) -> tuple[Fraction, ...]:
    num, den = data
    return tuple(Fraction(x, den) for x in num)


def verify_maximality(search_root: bool = True) -> MaximalityReport:
    """The span of the 21 planes has a single integral overlattice, and that one contains a root orthogonal to h^2."""
    fl = fermat_lattice()
    lat = Lattice(fl.gram)
    g = fl.gram
    eta, theta = _dual(ref.REFERENCE_ETA), _dual(ref.REFERENCE_THETA)
    for v in (eta, theta):
        if any(x.denominator != 1 for x in vecmat(v, g)):
            raise ReferenceMismatch("reference glue vector is not in the dual lattice")
    gens = (eta, theta)
    bmat = tuple(tuple(bilinear(g, x, y) % 1 for y in gens) for x in gens)
    if bmat != ((Fraction(2, 3), Fraction(1, 3)), (Fraction(1, 3), Fraction(5, 9))):
        raise ReferenceMismatch(f"glue form on the reference generators is {bmat}")
    group = disc_group(lat)
    if group.order != 27 or group.reduce(eta) == group.zero():
        raise ReferenceMismatch("unexpected discriminant group")
    iso = []
    for n, m in itertools.product(range(3), range(9)):
        x = tuple(n * a + m * b for a, b in zip(eta, theta))
        if bilinear(g, x, x).denominator == 1:
            iso.append((n, m))
    subs = [s for s in isotropic_subgroups(group, even=False) if s.order > 1]
    glue = tuple(3 * x for x in theta)
    over = overlattice_from_glue(lat, [glue], 3)
    e = tuple(Fraction(a) + c for a, c in zip(ref.REFERENCE_ROOT, glue))
    over.to_coords(e)
    ref_ok = bilinear(g, e, e) == 2 and bilinear(g, fl.h2_coords, e) == 0
    root = e
    if search_root:
        root = find_orthogonal_root(over, fl.h2_coords)
        if root is None:
            raise ReferenceMismatch("no root orthogonal to h^2 in the overlattice")
    return MaximalityReport(
        tuple(group.invariant_factors), tuple(iso), len(subs), over.index, root, ref_ok, bmat
    )


def find_orthogonal_root(over, h2: Sequence[int]) -> tuple[Fraction, ...] | None:
    """A norm-2 vector of the overlattice orthogonal to h^2, in the plane basis (early exit)."""
    h = over.to_coords(h2)
    sub = Sublattice(over.lattice, (h,))
    cb = complement_basis(sub)
    comp = over.lattice.in_basis(cb)
    for nv, x in kernels.iter_short_vectors(comp.gram, 2):
        if nv == 2:
            y = vecmat(x, cb)
            return tuple(vecmat(y, over.basis))
    return None


def four_squares(n: int) -> tuple[int, int, int, int]:
    """x^2 + y^2 + z^2 + u^2 = n with x >= y >= z >= u >= 0, x as large as possible."""
    if n < 0:
        raise ValueError("n must be non-negative")
    for x in range(isqrt(n), -1, -1):
        r = _three_squares(n - x * x, x)
        if r is not None:
            return (x,) + r
    raise AssertionError(f"no four-square representation of {n}")


def _three_squares(m: int, top: int) -> tuple[int, int, int] | None:
    for y in range(min(top, isqrt(m)), -1, -1):
        r = m - y * y
        for z in range(min(y, isqrt(r)), -1, -1):
            u2 = r - z * z
            u = isqrt(u2)
            if u * u == u2 and u <= z:
                return (y, z, u)
    return None


def ramanujan_rep(l: int) -> tuple[int, int, int, int] | None:
    """2x^2 + 2y^2 + 2z^2 + 3u^2 = l with u minimal, or None."""
    if l < 1:
        raise ValueError("l must be positive")
    for u in range(isqrt(l // 3) + 1):
        r = l - 3 * u * u
        if r % 2:
            continue
        m = r // 2
        for x in range(isqrt(m), -1, -1):
            t = _three_squares_any(m - x * x, x)
            if t is not None:
                return (x,) + t + (u,)
    return None


def _three_squares_any(m: int, top: int) -> tuple[int, int] | None:
    for y in range(min(top, isqrt(m)), -1, -1):
        z2 = m - y * y
        z = isqrt(z2)
        if z * z == z2 and z <= y:
            return (y, z)
    return None


def is_hassett(d: int) -> bool:
    return d > 6 and d % 6 in (0, 2)


def six_variable_solution(d: int) -> tuple[int, ...] | None:
    """(x1, ..., x5, y) with 12(x1^2+x2^2+x3^2+x4^2) + 18 x5^2 + 8 y^2 = d and gcd 1.

    Constructive: Lagrange or Ramanujan on the residual; None only for d = 14,
    which this form does not represent properly.
    """
    if not is_hassett(d):
        raise NotHassett(d)
    if d % 6 == 2:
        if d == 8:
            return (0, 0, 0, 0, 0, 1)
        if d == 14:
            return None
        rest = _multiple_of_six(d - 8)
        return rest[:5] + (1,)
    return _multiple_of_six(d)


def _multiple_of_six(d: int) -> tuple[int, ...]:
    k = d // 6
    if k % 2 == 0:
        if k == 2:
            return (1, 0, 0, 0, 0, 0)
        r = ramanujan_rep(k - 2)
        assert r is not None
        x2, x3, x4, x5 = r
        return (1, x2, x3, x4, x5, 0)
    x1, x2, x3, x4 = four_squares((k - 3) // 2)
    return (x1, x2, x3, x4, 1, 0)


RANK7_GRAM = (
    (3, 0, 0, 0, 0, 0, 1),
    (0, 4, 0, 0, 0, 0, 0),
    (0, 0, 4, 0, 0, 0, 0),
    (0, 0, 0, 4, 0, 0, 0),
    (0, 0, 0, 0, 4, 0, 0),
    (0, 0, 0, 0, 0, 6, 0),
    (1, 0, 0, 0, 0, 0, 3),
)
RANK7_MINOR_COLUMNS = (1, 2, 3, 4, 5, 6, 8)


@lru_cache(maxsize=None)
def rank7_basis() -> tuple[tuple[int, ...], ...]:
    """Rows h^2, a_1..a_5, b built from the auxiliary planes; checked primitive and of the expected Gram."""
    fl = fermat_lattice()
    c = ref.AUXILIARY_COORDS
    for name, forms in ref.AUXILIARY_PLANES.items():
        idx = find_plane(Plane.from_forms(forms))
        if idx is None or plane_classes()[idx] != c[name]:
            raise ReferenceMismatch(f"auxiliary plane {name} has unexpected coordinates")
    alphas = [tuple(a - b for a, b in zip(c[f"P{i}1"], c[f"P{i}2"])) for i in range(1, 6)]
    basis = (fl.h2_coords, *alphas, c["P"])
    minor = [[r[j - 1] for j in RANK7_MINOR_COLUMNS] for r in basis]
    if abs(det(minor)) != 1:
        raise ReferenceMismatch("rank-7 sublattice is not certified primitive")
    sub = Sublattice(Lattice(fl.gram), basis)
    if sub.gram != RANK7_GRAM:
        raise ReferenceMismatch("rank-7 sublattice has an unexpected Gram matrix")
    return as_matrix(basis)


@dataclass(frozen=True)
class DivisorWitness:
    d: int
    vector: tuple[int, ...]
    coefficients: tuple[int, ...] | None
    route: str


def fermat_in_divisor(d: int) -> DivisorWitness:
    """A primitive rank-2 sublattice <h^2, v> of discriminant d inside the Fermat lattice."""
    fl = fermat_lattice()
    sol = six_variable_solution(d)
    if sol is None:
        i, j = next((i, j) for i in range(21) for j in range(i + 1, 21) if fl.gram[i][j] == 0)
        v = tuple(h - int(k == i) - int(k == j) for k, h in enumerate(fl.h2_coords))
        route = f"h^2 - [P{i + 1}] - [P{j + 1}] for disjoint planes"
    else:
        basis = rank7_basis()
        v = tuple(sum(x * basis[t + 1][k] for t, x in enumerate(sol)) for k in range(21))
        route = "rank-7 form"
    h2 = fl.h2_coords
    disc = 3 * bilinear(fl.gram, v, v) - bilinear(fl.gram, h2, v) ** 2
    if disc != d or not is_primitive_rows([h2, v]):
        raise AssertionError(f"witness for d = {d} failed verification")
    return DivisorWitness(d, v, sol, route)


def hassett_values(n_max: int) -> list[int]:
    return [d for d in range(7, n_max + 1) if is_hassett(d)]


def all_divisors(n_max: int) -> dict[int, DivisorWitness]:
    return {d: fermat_in_divisor(d) for d in hassett_values(n_max)}

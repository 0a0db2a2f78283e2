"""Positive definite integral lattices.

Coordinates are row vectors in the lattice basis, so (x.y) = x G y^T and a
sublattice is given by the rows of its basis matrix.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from . import kernels
from .config import ISOMETRY_RANK_CAP, group_cap
from .errors import CapExceeded, NotGluing, NotPrimitive
from .exact import (
    Matrix,
    as_matrix,
    bilinear,
    complete_basis,
    det,
    elementary_divisors,
    gram_of,
    hnf,
    integer_kernel,
    inverse_rational,
    inverse_unimodular,
    is_primitive_rows,
    is_symmetric,
    matmul,
    saturation,
    snf_full,
    vecmat,
)

Vector = tuple[int, ...]
DualVector = tuple[Fraction, ...]


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class Lattice:
    gram: Matrix
    distinguished: Vector | None = None
    label: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        g = as_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        if not g or not is_symmetric(g):
            raise ValueError("Gram matrix must be square and symmetric")
        if det(g) == 0:
            raise ValueError("Gram matrix is degenerate")
        if self.distinguished is not None:
            o = tuple(int(x) for x in self.distinguished)
            object.__setattr__(self, "distinguished", o)
            if len(o) != len(g) or not is_distinguished(self, o):
                from .errors import NotDistinguished

                raise NotDistinguished(o)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def disc(self) -> int:
        return det(self.gram)

    def norm(self, v: Sequence[int]) -> int:
        return bilinear(self.gram, v, v)

    def pair(self, u: Sequence, v: Sequence):
        return bilinear(self.gram, u, v)

    def with_distinguished(self, o: Vector | None) -> "Lattice":
        return Lattice(self.gram, o, self.label)

    def in_basis(self, basis: Sequence[Sequence[int]]) -> "Lattice":
        """The lattice spanned by the given rows, with its own Gram matrix."""
        return Lattice(gram_of(basis, self.gram))

    def __repr__(self) -> str:
        extra = f", distinguished={self.distinguished}" if self.distinguished is not None else ""
        return f"Lattice({[list(r) for r in self.gram]}{extra})"


@dataclass(frozen=True)
class Sublattice:
    ambient: Lattice
    basis: Matrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", as_matrix(self.basis))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def lattice(self) -> Lattice:
        return self.ambient.in_basis(self.basis)

    @property
    def gram(self) -> Matrix:
        return self.lattice.gram


@dataclass(frozen=True)
class Overlattice:
    """Finite-index extension of ``base``; ``basis`` rows are in base coordinates."""

    base: Lattice
    glue_vectors: tuple[DualVector, ...]
    index: int
    basis: tuple[DualVector, ...]
    lattice: Lattice

    def to_coords(self, v: Sequence) -> Vector:
        """Coordinates in the overlattice basis of a vector given in base coordinates."""
        x = vecmat(tuple(Fraction(c) for c in v), self._inverse)
        if any(c.denominator != 1 for c in x):
            raise ValueError("vector does not lie in the overlattice")
        return tuple(int(c) for c in x)

    @cached_property
    def _inverse(self):
        return inverse_rational(self.basis)


def discriminant(lat: Lattice) -> int:
    return lat.disc


def parity(lat: Lattice) -> Parity:
    return Parity.EVEN if all(lat.gram[i][i] % 2 == 0 for i in range(lat.rank)) else Parity.ODD


def is_even(lat: Lattice) -> bool:
    return parity(lat) is Parity.EVEN


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _frac_mod(x: Fraction, m: int) -> Fraction:
    q = x / m
    return x - m * (q.numerator // q.denominator)


@dataclass(frozen=True)
class DiscGroup:
    """L^v / L as a product of cyclic groups of orders ``invariant_factors``.

    Elements are coefficient tuples c with 0 <= c_i < s_i standing for
    sum c_i * generators[i].
    """

    lattice: Lattice
    invariant_factors: tuple[int, ...]
    generators: tuple[DualVector, ...]
    b: tuple[tuple[Fraction, ...], ...]
    q: tuple[Fraction, ...] | None
    _reduction: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())

    @property
    def order(self) -> int:
        return reduce(lambda a, c: a * c, self.invariant_factors, 1)

    @property
    def length(self) -> int:
        return len(self.invariant_factors)

    def elements(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(s) for s in self.invariant_factors))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.length

    def add(self, x: Sequence[int], y: Sequence[int], k: int = 1) -> tuple[int, ...]:
        return tuple((a + k * c) % s for a, c, s in zip(x, y, self.invariant_factors))

    def vector(self, c: Sequence[int]) -> DualVector:
        n = self.lattice.rank
        out = [Fraction(0)] * n
        for ci, g in zip(c, self.generators):
            if ci:
                for j in range(n):
                    out[j] += ci * g[j]
        return tuple(out)

    def reduce(self, x: Sequence) -> tuple[int, ...]:
        """Class of a dual vector (rational row) as a coefficient tuple."""
        out = []
        for s, col in zip(self.invariant_factors, self._reduction):
            val = sum(Fraction(a) * c for a, c in zip(x, col)) * s
            if val.denominator != 1:
                raise ValueError("not a dual vector")
            out.append(int(val) % s)
        return tuple(out)

    def bvalue(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        k = self.length
        return _mod1(sum(x[i] * y[j] * self.b[i][j] for i in range(k) for j in range(k) if x[i] and y[j]))

    def qvalue(self, x: Sequence[int]) -> Fraction:
        """(x.x) mod 2 for even lattices, mod 1 otherwise."""
        v = self.vector(x)
        return _frac_mod(bilinear(self.lattice.gram, v, v), 2 if self.q is not None else 1)

    def element_order(self, x: Sequence[int]) -> int:
        return reduce(lcm, (s // gcd(s, c) for c, s in zip(x, self.invariant_factors)), 1)

    def span(self, gens: Sequence[Sequence[int]]) -> frozenset:
        elems = {self.zero()}
        frontier = [self.zero()]
        while frontier:
            new = []
            for e in frontier:
                for g in gens:
                    f = self.add(e, g)
                    if f not in elems:
                        elems.add(f)
                        new.append(f)
            frontier = new
        return frozenset(elems)


def disc_group(lat: Lattice) -> DiscGroup:
    u, d, _, ui, _ = snf_full(lat.gram)
    n = lat.rank
    facts, gens, cols = [], [], []
    for i in range(n):
        s = d[i][i]
        if s > 1:
            facts.append(s)
            gens.append(tuple(Fraction(u[i][j], s) for j in range(n)))
            cols.append(tuple(ui[j][i] for j in range(n)))
    g = lat.gram
    b = tuple(tuple(_mod1(bilinear(g, x, y)) for y in gens) for x in gens)
    q = tuple(_frac_mod(bilinear(g, x, x), 2) for x in gens) if is_even(lat) else None
    return DiscGroup(lat, tuple(facts), tuple(gens), b, q, tuple(cols))


@dataclass(frozen=True)
class Subgroup:
    generators: tuple[tuple[int, ...], ...]
    elements: frozenset

    @property
    def order(self) -> int:
        return len(self.elements)


def _isotropic_element(group: DiscGroup, x: Sequence[int], even: bool) -> bool:
    v = group.vector(x)
    val = bilinear(group.lattice.gram, v, v)
    return (val % 2 == 0) if even else val.denominator == 1


def isotropic_subgroups(group: DiscGroup, cap: int | None = None, even: bool | None = None) -> list[Subgroup]:
    """All subgroups on which the glue form vanishes (the trivial one included).

    For even lattices the quadratic form must vanish mod 2 (even overlattices);
    otherwise only integrality of the bilinear form is required.
    """
    cap = group_cap() if cap is None else cap
    if group.order > cap:
        raise CapExceeded(f"discriminant group of order {group.order} exceeds cap {cap}")
    if even is None:
        even = group.q is not None
    iso = [x for x in group.elements() if any(x) and _isotropic_element(group, x, even)]
    trivial = Subgroup((), frozenset({group.zero()}))
    seen = {trivial.elements: trivial}
    frontier = [trivial]
    while frontier:
        new = []
        for h in frontier:
            for x in iso:
                if x in h.elements:
                    continue
                if any(group.bvalue(x, g) != 0 for g in h.generators):
                    continue
                elems = frozenset(group.add(e, x, k) for e in h.elements for k in range(group.element_order(x)))
                if elems not in seen:
                    sub = Subgroup(h.generators + (x,), elems)
                    seen[elems] = sub
                    new.append(sub)
        frontier = new
    return sorted(seen.values(), key=lambda s: (s.order, sorted(s.elements)))


def _span_basis(rows: Sequence[Sequence[Fraction]]) -> tuple[DualVector, ...]:
    den = reduce(lcm, (Fraction(x).denominator for r in rows for x in r), 1)
    scaled = [[int(Fraction(x) * den) for x in r] for r in rows]
    return tuple(tuple(Fraction(x, den) for x in r) for r in hnf(scaled))


def overlattice_from_glue(lat: Lattice, glue: Sequence[DualVector], index: int | None = None) -> Overlattice:
    n = lat.rank
    unit = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    basis = _span_basis(unit + [tuple(Fraction(x) for x in g) for g in glue])
    gram = gram_of(basis, lat.gram)
    if any(x.denominator != 1 for r in gram for x in r):
        raise NotGluing("glue vectors do not define an integral lattice")
    new = Lattice(tuple(tuple(int(x) for x in r) for r in gram))
    if index is None:
        index = _isqrt_exact(abs(lat.disc) // abs(new.disc))
    return Overlattice(lat, tuple(tuple(Fraction(x) for x in g) for g in glue), index, basis, new)


def _isqrt_exact(n: int) -> int:
    from math import isqrt

    r = isqrt(n)
    if r * r != n:
        raise ValueError(f"{n} is not a square")
    return r


def overlattices(lat: Lattice, cap: int | None = None, even: bool | None = None) -> list[Overlattice]:
    """One overlattice per nontrivial isotropic subgroup of the glue group."""
    group = disc_group(lat)
    out = []
    for sub in isotropic_subgroups(group, cap, even):
        if sub.order == 1:
            continue
        glue = [group.vector(g) for g in sub.generators]
        out.append(overlattice_from_glue(lat, glue, sub.order))
    return out


def direct_sum(a: Lattice, b: Lattice) -> Lattice:
    n, m = a.rank, b.rank
    rows = [list(r) + [0] * m for r in a.gram] + [[0] * n + list(r) for r in b.gram]
    return Lattice(as_matrix(rows))


def glue(l1: Lattice, l2: Lattice, phi: Sequence[tuple[Sequence, Sequence]]) -> Lattice:
    """Glue along the graph of phi, given as pairs (x in L1^v, phi(x) in L2^v)."""
    g1, g2 = disc_group(l1), disc_group(l2)
    xs = [tuple(Fraction(c) for c in x) for x, _ in phi]
    ys = [tuple(Fraction(c) for c in y) for _, y in phi]
    try:
        cx = [g1.reduce(x) for x in xs]
        cy = [g2.reduce(y) for y in ys]
    except ValueError as exc:
        raise NotGluing(str(exc)) from None
    for i in range(len(xs)):
        for j in range(i, len(xs)):
            total = bilinear(l1.gram, xs[i], xs[j]) + bilinear(l2.gram, ys[i], ys[j])
            if total.denominator != 1:
                raise NotGluing("b1(x, y) != -b2(phi x, phi y)")
    h1, h2 = g1.span(cx), g2.span(cy)
    graph = {g1.zero() + g2.zero()}
    frontier = list(graph)
    pairs = [a + b for a, b in zip(cx, cy)]
    facts = g1.invariant_factors + g2.invariant_factors
    while frontier:
        nxt = []
        for e in frontier:
            for p in pairs:
                f = tuple((a + c) % s for a, c, s in zip(e, p, facts))
                if f not in graph:
                    graph.add(f)
                    nxt.append(f)
        frontier = nxt
    if not (len(graph) == len(h1) == len(h2)):
        raise NotGluing("phi is not an isomorphism of glue subgroups")
    total = direct_sum(l1, l2)
    glue_vecs = [x + y for x, y in zip(xs, ys)]
    if not glue_vecs:
        return total
    return overlattice_from_glue(total, glue_vecs, len(graph)).lattice


def short_vectors(lat: Lattice, bound: int) -> list[tuple[int, Vector]]:
    """(norm, v) for nonzero v with norm <= bound, first nonzero coordinate positive, sorted."""
    out = []
    for nv, v in kernels.short_vectors(lat.gram, bound):
        first = next(c for c in v if c)
        out.append((nv, v if first > 0 else tuple(-c for c in v)))
    out.sort(key=lambda t: t[1])
    return out


def vectors_up_to_norm(lat: Lattice, bound: int) -> list[Vector]:
    return [v for _, v in short_vectors(lat, bound)]


def has_roots(lat: Lattice) -> bool:
    return any(nv == 2 for nv, _ in kernels.short_vectors(lat.gram, 2))


def roots(lat: Lattice) -> list[Vector]:
    return [v for nv, v in short_vectors(lat, 2) if nv == 2]


def minimum(lat: Lattice) -> int:
    bound = min(lat.gram[i][i] for i in range(lat.rank))
    return min(nv for nv, _ in kernels.short_vectors(lat.gram, bound))


def norm_histogram(lat: Lattice, bound: int) -> dict[int, int]:
    hist: dict[int, int] = {}
    for nv, _ in kernels.short_vectors(lat.gram, bound):
        hist[nv] = hist.get(nv, 0) + 1
    return dict(sorted(hist.items()))


def is_distinguished(lat: Lattice, v: Sequence[int]) -> bool:
    """Norm 3 and even orthogonal complement, tested on a basis extension of v."""
    v = tuple(v)
    if gcd(*v) != 1:
        raise NotPrimitive(v)
    g = lat.gram
    if bilinear(g, v, v) != 3:
        return False
    basis = complete_basis(v)
    return all((bilinear(g, e, e) - bilinear(g, v, e)) % 2 == 0 for e in basis[1:])


def distinguished_elements(lat: Lattice) -> list[Vector]:
    """All distinguished elements up to sign."""
    return [v for nv, v in short_vectors(lat, 3) if nv == 3 and is_distinguished(lat, v)]


def complement_basis(sub: Sublattice) -> Matrix:
    pairing = matmul(sub.basis, sub.ambient.gram)
    return integer_kernel(pairing, sub.ambient.rank)


def orthogonal_complement(sub: Sublattice) -> Lattice:
    return sub.ambient.in_basis(complement_basis(sub))


def primitive_closure(sub: Sublattice) -> Sublattice:
    return Sublattice(sub.ambient, saturation(sub.basis))


def is_primitive(sub: Sublattice) -> bool:
    return is_primitive_rows(sub.basis)


def content_split(lat: Lattice) -> tuple[int, Lattice, int]:
    """N = N0(m) with N0 primitive; also m with its 3-part removed."""
    m = gcd(*(x for r in lat.gram for x in r))
    n0 = Lattice(tuple(tuple(x // m for x in r) for r in lat.gram))
    mp = m
    while mp % 3 == 0:
        mp //= 3
    return m, n0, mp


def pairwise_reduce(gram: Sequence[Sequence[int]], keep_first: bool = False) -> Matrix:
    """Unimodular C such that C G C^T has |2 g_ij| <= g_jj for all i != j.

    With keep_first the first basis vector is never modified.
    """
    n = len(gram)
    c = [[int(i == j) for j in range(n)] for i in range(n)]
    g = [list(r) for r in gram]
    changed = True
    while changed:
        changed = False
        for i in range(1 if keep_first else 0, n):
            for j in range(n):
                if i == j or 2 * abs(g[i][j]) <= g[j][j]:
                    continue
                q = (2 * g[i][j] + g[j][j]) // (2 * g[j][j])
                c[i] = [a - q * b for a, b in zip(c[i], c[j])]
                g = [list(r) for r in gram_of(c, gram)]
                changed = True
    return as_matrix(c)


def _generating_threshold(lat: Lattice, vecs: list[tuple[int, Vector]]) -> int:
    n = lat.rank
    for t in sorted({nv for nv, _ in vecs}):
        rows = [v for nv, v in vecs if nv <= t]
        h = hnf(rows)
        if len(h) == n and abs(det(h)) == 1:
            return t
    raise AssertionError("short vectors do not generate the lattice")


def canonical_form(lat: Lattice) -> tuple[Matrix, Matrix]:
    """Isometry-invariant Gram matrix and a basis (rows) realising it.

    Among all bases built from vectors whose norm is at most the smallest
    bound t such that vectors of norm <= t generate the lattice, choose the
    one minimising (G11; G22, G12; G33, G13, G23; ...) lexicographically.
    Two lattices are isometric iff their canonical Gram matrices agree.
    """
    n = lat.rank
    g = lat.gram
    red = pairwise_reduce(g)
    top = max(bilinear(g, r, r) for r in red)
    vecs = short_vectors(lat, top)
    t = _generating_threshold(lat, vecs)
    norms = sorted({nv for nv, _ in vecs if nv >= t})
    for t in norms:
        cands = []
        for nv, v in vecs:
            if nv <= t:
                cands.append((nv, v))
                cands.append((nv, tuple(-x for x in v)))
        result = _lexmin_basis(g, cands, n)
        if result is not None:
            basis = as_matrix(result)
            return gram_of(basis, g), basis
    raise AssertionError("no basis found among short vectors")


def _lexmin_basis(g: Matrix, cands: list[tuple[int, Vector]], n: int):
    best: list | None = None
    best_basis: list | None = None
    chosen: list[Vector] = []
    prefix: list[tuple] = []

    def rec(k: int) -> None:
        nonlocal best, best_basis
        options = sorted(
            ((nv,) + tuple(bilinear(g, c, v) for c in chosen), v) for nv, v in cands
        )
        for key, v in options:
            if best is not None and prefix + [key] > best[: k + 1]:
                break
            if not is_primitive_rows(chosen + [v]):
                continue
            chosen.append(v)
            prefix.append(key)
            if k + 1 == n:
                if best is None or prefix < best:
                    best = list(prefix)
                    best_basis = list(chosen)
            else:
                rec(k + 1)
            chosen.pop()
            prefix.pop()

    rec(0)
    return best_basis


def canonical_gram(lat: Lattice) -> Matrix:
    return canonical_form(lat)[0]


def _invariants_match(l1: Lattice, l2: Lattice) -> bool:
    if l1.rank != l2.rank or l1.disc != l2.disc:
        return False
    return elementary_divisors(l1.gram) == elementary_divisors(l2.gram)


def _search_images(
    target: Matrix,
    ambient: Lattice,
    fixed: Sequence[Vector],
    require_primitive: bool,
) -> list[Vector] | None:
    """Vectors t_i of ``ambient`` with (t_i.t_j) = target[i][j], extending ``fixed``."""
    n = len(target)
    top = max(target[i][i] for i in range(len(fixed), n)) if len(fixed) < n else 0
    by_norm: dict[int, list[Vector]] = {}
    if top:
        for nv, v in short_vectors(ambient, top):
            by_norm.setdefault(nv, []).extend([v, tuple(-x for x in v)])
    g = ambient.gram
    images = list(fixed)
    for i in range(len(images)):
        for j in range(i + 1):
            if bilinear(g, images[i], images[j]) != target[i][j]:
                return None
    if require_primitive and images and not is_primitive_rows(images):
        return None

    def rec(k: int) -> bool:
        if k == n:
            return True
        for v in by_norm.get(target[k][k], ()):
            pv = vecmat(v, g)
            if all(sum(a * b for a, b in zip(pv, images[j])) == target[k][j] for j in range(k)):
                images.append(v)
                if (not require_primitive or is_primitive_rows(images)) and rec(k + 1):
                    return True
                images.pop()
        return False

    return images if rec(len(images)) else None


def find_isometry(l1: Lattice, l2: Lattice, pins: tuple[Vector, Vector] | None = None) -> Matrix | None:
    """Integer T (rows are images of the basis of l1) with T G2 T^T = G1, or None.

    With pins = (v1, v2) the isometry also satisfies v1 T = v2.
    """
    if max(l1.rank, l2.rank) > ISOMETRY_RANK_CAP:
        raise CapExceeded(f"isometry search is capped at rank {ISOMETRY_RANK_CAP}")
    if not _invariants_match(l1, l2):
        return None
    fixed: list[Vector] = []
    if pins is not None:
        v1, v2 = tuple(pins[0]), tuple(pins[1])
        k = gcd(*v1)
        if any(x % k for x in v2):
            return None
        w1, w2 = tuple(x // k for x in v1), tuple(x // k for x in v2)
        c = complete_basis(w1)
        c = matmul(pairwise_reduce(gram_of(c, l1.gram), keep_first=True), c)
        fixed = [w2]
    elif l1.rank <= 6:
        c = canonical_form(l1)[1]
    else:
        c = pairwise_reduce(l1.gram)
    target = gram_of(c, l1.gram)
    images = _search_images(target, l2, fixed, require_primitive=False)
    if images is None:
        return None
    t = matmul(inverse_unimodular(c), images)
    assert gram_of(t, l2.gram) == l1.gram
    return as_matrix(t)


def find_primitive_embedding(m2: Lattice, o2: Vector, m1: Lattice, o1: Vector) -> Matrix | None:
    """Rows: images of the basis of m2 in m1, a primitive embedding with o2 -> o1."""
    if max(m1.rank, m2.rank) > ISOMETRY_RANK_CAP:
        raise CapExceeded(f"embedding search is capped at rank {ISOMETRY_RANK_CAP}")
    if m2.rank > m1.rank:
        return None
    c = complete_basis(tuple(o2))
    c = matmul(pairwise_reduce(gram_of(c, m2.gram), keep_first=True), c)
    target = gram_of(c, m2.gram)
    images = _search_images(target, m1, [tuple(o1)], require_primitive=True)
    if images is None:
        return None
    return as_matrix(matmul(inverse_unimodular(c), images))


def is_isometric(l1: Lattice, l2: Lattice) -> bool:
    return find_isometry(l1, l2) is not None

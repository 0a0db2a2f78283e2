"""Hassett divisors, components of their intersections, and divisor catalogs.

A component of an intersection of loci C_M is recorded by its lattice up to
isometry.  Any two distinguished elements of a lattice are exchanged by an
automorphism, so plain isometry of lattices is the right equivalence.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import isqrt
from typing import Callable, Iterable, Sequence

from . import fermat
from .config import INTERSECTION_RANK_CAP
from .errors import CapExceeded, NotDistinguished, NotHassett
from .exact import Matrix, as_matrix, det, gram_of, inverse_unimodular, is_positive_definite, is_primitive_rows, vecmat
from .lattice import (
    Lattice,
    Vector,
    canonical_form,
    disc_group,
    find_primitive_embedding,
    has_roots,
    is_distinguished,
    overlattices,
)
from .quadform import has_associated_k3, is_admissible, labellings, pointed_basis


def is_hassett_discriminant(d: int) -> bool:
    """d > 6 and d = 0 or 2 mod 6."""
    return fermat.is_hassett(d)


def _require_hassett(*ds: int) -> None:
    for d in ds:
        if not is_hassett_discriminant(d):
            raise NotHassett(d)


def cd_gram(d: int) -> Lattice:
    """The rank-2 lattice <o, v> of discriminant d, with o = (1, 0)."""
    _require_hassett(d)
    if d % 6 == 2:
        g = ((3, 1), (1, (d + 1) // 3))
    else:
        g = ((3, 0), (0, d // 3))
    return Lattice(g, (1, 0), label=f"K_{d}")


@dataclass(frozen=True)
class Provenance:
    kind: str
    tau: int | None = None
    index: int | None = None
    detail: tuple = ()

    def as_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.tau is not None:
            out["tau"] = self.tau
        if self.index is not None:
            out["index"] = self.index
        if self.detail:
            out["detail"] = list(self.detail)
        return out


@dataclass(frozen=True)
class Component:
    gram: Matrix
    distinguished: Vector
    disc: int
    provenance: Provenance
    source_gram: Matrix = field(compare=False)

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.gram, self.distinguished)

    @property
    def rank(self) -> int:
        return len(self.gram)


@dataclass(frozen=True)
class ComponentReport:
    inputs: tuple
    case: str
    components: tuple[Component, ...]
    families_examined: dict
    dedup_log: tuple[dict, ...]

    @property
    def discs(self) -> list[int]:
        return [c.disc for c in self.components]


def _component(lat: Lattice, o: Sequence[int], prov: Provenance) -> Component:
    g, basis = canonical_form(lat)
    o_new = vecmat(tuple(o), inverse_unimodular(basis))
    return Component(g, tuple(o_new), lat.disc, prov, lat.gram)


def _dedupe(cands: Iterable[Component]) -> tuple[tuple[Component, ...], tuple[dict, ...]]:
    kept: dict = {}
    log = []
    for c in cands:
        key = c.gram
        if key in kept:
            log.append({"merged": c.provenance.as_dict(), "into": kept[key].provenance.as_dict(), "disc": c.disc})
        else:
            kept[key] = c
    comps = sorted(kept.values(), key=lambda c: (c.disc, c.gram))
    return tuple(comps), tuple(log)


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


@dataclass(frozen=True)
class _Family:
    case: str
    d1: int
    d2: int
    n1: int
    n2: int
    nonnegative: bool

    def gram(self, tau: int) -> Matrix:
        n1, n2 = self.n1, self.n2
        if self.case == "i":
            return ((3, 1, 1), (1, 2 * n1 + 1, tau), (1, tau, 2 * n2 + 1))
        if self.case == "ii":
            return ((3, 1, 0), (1, 2 * n1 + 1, tau), (0, tau, 2 * n2))
        return ((3, 0, 0), (0, 2 * n1, tau), (0, tau, 2 * n2))


def _family(d1: int, d2: int) -> _Family:
    _require_hassett(d1, d2)
    if d1 == d2:
        raise ValueError("the two discriminants must differ")
    r1, r2 = d1 % 6, d2 % 6
    if r1 == 2 and r2 == 2:
        a, b = sorted((d1, d2))
        return _Family("i", a, b, (a - 2) // 6, (b - 2) // 6, False)
    if r1 != r2:
        a, b = (d1, d2) if r1 == 2 else (d2, d1)
        return _Family("ii", a, b, (a - 2) // 6, b // 6, True)
    a, b = sorted((d1, d2))
    return _Family("iii", a, b, a // 6, b // 6, True)


def tau_ranges(d1: int, d2: int) -> tuple[list[int], list[int]]:
    """Parameters giving a positive definite member, and those giving a root-free one."""
    fam = _family(d1, d2)
    g22 = fam.gram(0)[1][1]
    g33 = fam.gram(0)[2][2]
    t = isqrt(g22 * g33)
    lo = 0 if fam.nonnegative else -t
    t1 = [tau for tau in range(lo, t + 1) if det(fam.gram(tau)) > 0]
    t2 = [tau for tau in t1 if not has_roots(Lattice(fam.gram(tau)))]
    return t1, t2


def _qualifying_overlattices(lat: Lattice, o: Vector, keep: Sequence[Sequence[Vector]], cap: int | None):
    """Nontrivial overlattices keeping the given sublattices primitive, o distinguished, and no roots."""
    out = []
    for over in overlattices(lat, cap, even=False):
        new = over.lattice
        try:
            subs = [[over.to_coords(v) for v in rows] for rows in keep]
        except ValueError:
            continue
        if not all(is_primitive_rows(rows) for rows in subs):
            continue
        o_new = over.to_coords(o)
        if not is_distinguished(new, o_new) or has_roots(new):
            continue
        out.append((over, o_new))
    return out


def intersect_divisors(d1: int, d2: int, cap: int | None = None, threads: int = 1) -> ComponentReport:
    """Irreducible components of the intersection of two Hassett divisors, as rank-3 lattices."""
    fam = _family(d1, d2)
    t1, t2 = tau_ranges(d1, d2)
    o, mu, nu = (1, 0, 0), (0, 1, 0), (0, 0, 1)

    def work(tau: int) -> list[Component]:
        lat = Lattice(fam.gram(tau), o)
        comps = [_component(lat, o, Provenance("TauFamily", tau))]
        for over, o_new in _qualifying_overlattices(lat, o, [(o, mu), (o, nu)], cap):
            comps.append(_component(over.lattice, o_new, Provenance("Overlattice", tau, over.index)))
        return comps

    cands = [c for batch in _pmap(work, t2, threads) for c in batch]
    comps, log = _dedupe(cands)
    families = {"case": fam.case, "d1": fam.d1, "d2": fam.d2, "positive_definite": t1, "root_free": t2}
    return ComponentReport((d1, d2), fam.case, comps, families, log)


@dataclass(frozen=True)
class ComponentBound:
    case: str
    D: int
    lower: int
    upper: int


def rootfree_count_bounds(d1: int, d2: int) -> ComponentBound:
    """Closed-form interval for the number of root-free family members.

    The lower end always holds. In case i the upper end can be one short when d2 is
    much larger than d1, since the positive-definite range may then reach D + 2.
    """
    fam = _family(d1, d2)
    n1, n2 = fam.n1, fam.n2
    if fam.case == "i":
        D = isqrt((36 * n1 * n2 + 18 * n1 + 12 * n2 + 6) // 9) - 1
        return ComponentBound("i", D, 2 * D + 1, 2 * D + 3)
    if fam.case == "ii":
        D = isqrt((12 * n1 * n2 + 4 * n2) // 3) - 1
    else:
        D = isqrt(4 * n1 * n2) - 1
    return ComponentBound(fam.case, D, D + 1, D + 2)


def _extension_grams(gm: Matrix, d: int) -> Iterable[tuple[Matrix, tuple[int, ...]]]:
    """Gram matrices of <M, v> with <o, v> of discriminant d; gm has o first."""
    kd = cd_gram(d).gram
    ov, vv = kd[0][1], kd[1][1]
    r = len(gm)
    ranges = []
    for i in range(1, r):
        t = isqrt(vv * gm[i][i])
        if t * t == vv * gm[i][i]:
            t -= 1
        ranges.append(range(-t, t + 1))
    for cross in itertools.product(*ranges):
        col = (ov,) + cross
        g = tuple(tuple(gm[i]) + (col[i],) for i in range(r)) + (col + (vv,),)
        if is_positive_definite(g):
            yield g, cross


def intersect_lattice_divisor(m: Lattice, o: Sequence[int], d: int, cap: int | None = None,
                              threads: int = 1) -> ComponentReport:
    """Components of C_M intersected with the Hassett divisor C_d."""
    _require_hassett(d)
    o = tuple(o)
    if not is_distinguished(m, o):
        raise NotDistinguished(o)
    if has_roots(m):
        raise ValueError("the lattice has roots, so its locus is empty")
    if labellings(m, o, d):
        comp = _component(m, o, Provenance("Input"))
        return ComponentReport((m.gram, o, d), "contained", (comp,), {"contained": True}, ())
    if m.rank > INTERSECTION_RANK_CAP:
        raise CapExceeded(f"lattice-divisor intersection is capped at rank {INTERSECTION_RANK_CAP}")
    basis = pointed_basis(m, o)
    gm = gram_of(basis, m.gram)
    r = m.rank
    e = [tuple(int(i == j) for j in range(r + 1)) for i in range(r + 1)]
    o_ext, v_ext = e[0], e[r]
    exts = [(g, cross) for g, cross in _extension_grams(gm, d)]
    examined = len(exts)

    def work(item) -> list[Component]:
        g, cross = item
        lat = Lattice(g)
        if has_roots(lat):
            return []
        out = [_component(lat, o_ext, Provenance("Extension", detail=cross))]
        for over, o_new in _qualifying_overlattices(lat, o_ext, [e[:r], [o_ext, v_ext]], cap):
            out.append(_component(over.lattice, o_new, Provenance("Overlattice", index=over.index, detail=cross)))
        return out

    cands = [c for batch in _pmap(work, exts, threads) for c in batch]
    comps, log = _dedupe(cands)
    comps, log2 = _remove_embedded(comps)
    fam = {"rank": r + 1, "extensions_examined": examined}
    return ComponentReport((m.gram, o, d), "extension", comps, fam, log + log2)


def _remove_embedded(comps: Sequence[Component]) -> tuple[tuple[Component, ...], tuple[dict, ...]]:
    """Drop components whose locus lies inside another's (smaller rank embedding primitively into larger)."""
    keep = []
    log = []
    for c in comps:
        host = next(
            (h for h in comps if h.rank > c.rank
             and find_primitive_embedding(c.lattice, c.distinguished, h.lattice, h.distinguished) is not None),
            None,
        )
        if host is None:
            keep.append(c)
        else:
            log.append({"dropped": c.provenance.as_dict(), "contains": host.provenance.as_dict(), "disc": c.disc})
    return tuple(keep), tuple(log)


def intersect_many(ds: Sequence[int], cap: int | None = None, threads: int = 1) -> ComponentReport:
    """Components of C_{d1} cap C_{d2} cap ... by iterating over the components found so far."""
    if len(ds) < 2:
        raise ValueError("need at least two discriminants")
    _require_hassett(*ds)
    report = intersect_divisors(ds[0], ds[1], cap, threads)
    logs = list(report.dedup_log)
    for d in ds[2:]:
        cands = []
        for comp in report.components:
            sub = intersect_lattice_divisor(comp.lattice, comp.distinguished, d, cap, threads)
            cands.extend(sub.components)
            logs.extend(sub.dedup_log)
        comps, log = _dedupe(cands)
        comps, log2 = _remove_embedded(comps)
        logs.extend(log + log2)
        report = ComponentReport(tuple(ds), "iterated", comps, {"ranks": sorted({c.rank for c in comps})}, ())
    return ComponentReport(tuple(ds), report.case, report.components, report.families_examined, tuple(logs))


@dataclass(frozen=True)
class DivisorCatalogEntry:
    family: str
    parameters: tuple[int, ...]
    gram: Matrix
    disc: int
    formula_disc: int
    admissible: bool

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.gram, (1, 0, 0))


C8_EXCLUDED = {(3, 2), (4, 2), (4, 3)}


def divisor_catalog(which: str, n_max: int) -> list[DivisorCatalogEntry]:
    """Rank-3 divisors inside C_8 or C_18 with their admissibility by parameter pattern."""
    which = which.lower()
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    out = []
    if which == "c8":
        for tau in range(5):
            for n in range(2, n_max + 1):
                if (tau, n) in C8_EXCLUDED:
                    continue
                g = as_matrix(((3, 1, 0), (1, 3, tau), (0, tau, 2 * n)))
                adm = tau in (1, 3) or n % 2 == 1
                out.append(DivisorCatalogEntry("C8", (tau, n), g, det(g), 16 * n - 3 * tau * tau, adm))
    elif which == "c18":
        for i in (1, 2):
            for tau in range(4):
                for n in range(1, n_max + 1):
                    if i == 1:
                        g = ((3, 1, 0), (1, 2 * n + 1, tau), (0, tau, 6))
                        formula = 36 * n - 3 * tau * tau + 12
                        adm = True
                    else:
                        g = ((3, 0, 0), (0, 2 * n + 2, tau), (0, tau, 6))
                        formula = 36 * n - 3 * tau * tau + 36
                        adm = tau in (1, 2) or n % 3 == 0
                    g = as_matrix(g)
                    out.append(DivisorCatalogEntry("C18", (i, tau, n), g, det(g), formula, adm))
    else:
        raise ValueError("catalog must be c8 or c18")
    return out


def cross_validate_catalog(entries: Iterable[DivisorCatalogEntry]) -> list[tuple[DivisorCatalogEntry, bool]]:
    """Pairs (entry, general admissibility verdict) for every entry."""
    return [(e, is_admissible(e.lattice, (1, 0, 0), search_witness=False).admissible) for e in entries]


@dataclass(frozen=True)
class HypothesisReport:
    rank: int
    length: int
    distinguished: Vector | None
    root_free: bool
    branches: tuple[str, ...]
    conclusion: str

    @property
    def codimension(self) -> int | None:
        return self.rank - 1 if "irreducible" in self.branches else None


CONCLUSIONS = {
    "irreducible": "nonempty irreducible locus of codimension rank-1",
    "realizable": "realizable as the algebraic lattice of a cubic fourfold",
    "realizable-small-rank": "realizable as the algebraic lattice of a cubic fourfold (rank at most 11)",
    "none": "hypotheses not met",
}


def hypothesis_report(m: Lattice, o: Sequence[int] | None = None) -> HypothesisReport:
    """Which nonemptiness and realizability criteria apply to (M, o)."""
    from .lattice import distinguished_elements

    if o is None:
        o = m.distinguished
    if o is None:
        found = distinguished_elements(m) if is_positive_definite(m.gram) else []
        o = found[0] if found else None
    elif not is_distinguished(m, o):
        o = None
    r = m.rank
    ell = disc_group(m).length
    root_free = not has_roots(m)
    branches = []
    if o is not None and root_free and r >= 2:
        if r + ell <= 20:
            branches.append("irreducible")
        if r + ell < 23 and r <= 21:
            branches.append("realizable")
        if r <= 11:
            branches.append("realizable-small-rank")
    key = branches[0] if branches else "none"
    text = CONCLUSIONS[key].replace("rank-1", str(r - 1))
    return HypothesisReport(r, ell, tuple(o) if o is not None else None, root_free, tuple(branches), text)


ALL_DIVISOR_GRAM = (
    (3, 1, 1, 0, 0, 0, 0, 1),
    (1, 3, 1, 0, 0, 0, -2, 0),
    (1, 1, 3, 0, 0, 0, -2, 0),
    (0, 0, 0, 4, 0, 0, 0, 0),
    (0, 0, 0, 0, 4, 0, 0, 0),
    (0, 0, 0, 0, 0, 4, 0, 0),
    (0, -2, -2, 0, 0, 0, 6, 0),
    (1, 0, 0, 0, 0, 0, 0, 3),
)

# rows: o, then the images of the six-variable basis a_1..a_5, b
_ALL_DIVISOR_SUBBASIS = (
    (1, 0, 0, 0, 0, 0, 0, 0),
    (0, 1, -1, 0, 0, 0, 0, 0),
    (0, 0, 0, 1, 0, 0, 0, 0),
    (0, 0, 0, 0, 1, 0, 0, 0),
    (0, 0, 0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 0, 0, 1),
)


def all_divisor_lattice() -> Lattice:
    """Rank-8 root-free lattice containing labellings of every Hassett discriminant."""
    return Lattice(ALL_DIVISOR_GRAM, (1, 0, 0, 0, 0, 0, 0, 0), label="rank-8")


def all_divisor_witness(d: int) -> Vector:
    """v with <o, v> primitive of discriminant d in the rank-8 lattice."""
    lat = all_divisor_lattice()
    sol = fermat.six_variable_solution(d)
    if sol is None:
        v = (0, 1, 0, 0, 0, 0, 0, 1)
    else:
        rows = _ALL_DIVISOR_SUBBASIS[1:]
        v = tuple(sum(x * row[k] for x, row in zip(sol, rows)) for k in range(8))
    o = lat.distinguished
    disc = 3 * lat.norm(v) - lat.pair(o, v) ** 2
    if disc != d or not is_primitive_rows([o, v]):
        raise AssertionError(f"rank-8 witness for d = {d} failed verification")
    return v


def is_admissible_discriminant(d: int) -> bool:
    return has_associated_k3(d)

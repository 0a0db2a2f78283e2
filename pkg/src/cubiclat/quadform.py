"""Associated quadratic forms, representations and the admissibility test."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from . import kernels
from .config import MOD3_NVARS_CAP, PRIME_SEARCH_CAP
from .errors import CapExceeded, NotDistinguished, Unsatisfiable
from .exact import as_matrix, bilinear, complete_basis, gram_of, is_positive_definite, is_primitive_rows
from .lattice import Lattice, Sublattice, Vector, complement_basis, content_split, is_distinguished, is_even


@dataclass(frozen=True)
class QuadForm:
    """sum_{i<=j} a_ij x_i x_j, stored as an upper-triangular table."""

    coeffs: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        c = as_matrix(self.coeffs)
        n = len(c)
        if any(c[i][j] for i in range(n) for j in range(i)):
            raise ValueError("coefficient table must be upper triangular")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_gram2(cls, s: Sequence[Sequence[int]]) -> "QuadForm":
        """Form with x S x^T = 2 f(x); S must have even diagonal."""
        n = len(s)
        return cls(tuple(tuple(0 if j < i else (s[i][i] // 2 if i == j else s[i][j]) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "QuadForm":
        n = len(values)
        return cls(tuple(tuple(values[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def __call__(self, x: Sequence[int]) -> int:
        c = self.coeffs
        n = len(c)
        return sum(c[i][j] * x[i] * x[j] for i in range(n) for j in range(i, n))

    @property
    def gram2(self) -> tuple[tuple[int, ...], ...]:
        """Symmetric integer matrix S with x S x^T = 2 f(x)."""
        c = self.coeffs
        n = len(c)
        return tuple(
            tuple(2 * c[i][i] if i == j else (c[i][j] if i < j else c[j][i]) for j in range(n)) for i in range(n)
        )

    def content(self) -> int:
        return gcd(*(x for r in self.coeffs for x in r))

    def scaled(self, k: int) -> "QuadForm":
        return QuadForm(tuple(tuple(k * x for x in r) for r in self.coeffs))

    def divided(self, k: int) -> "QuadForm":
        return QuadForm(tuple(tuple(x // k for x in r) for r in self.coeffs))

    def is_positive_definite(self) -> bool:
        return is_positive_definite(self.gram2)

    def __str__(self) -> str:
        terms = []
        n = self.nvars
        for i in range(n):
            for j in range(i, n):
                a = self.coeffs[i][j]
                if a:
                    mono = f"x{i + 1}^2" if i == j else f"x{i + 1}*x{j + 1}"
                    terms.append(f"{a}*{mono}")
        return " + ".join(terms) if terms else "0"


class Mechanism(enum.Enum):
    NON_SPLIT_LAMBDA = "NonSplitLambda"
    SPLIT_LAMBDA_AND_MOD3 = "SplitLambdaAndMod3"
    WITNESS_FOUND = "WitnessFound"


@dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    lam: int
    split: bool
    witness: tuple[Vector, int] | None
    mechanism: Mechanism
    form: QuadForm
    primitive_form: QuadForm


def _check_distinguished(lat: Lattice, o: Sequence[int]) -> None:
    if not is_distinguished(lat, o):
        raise NotDistinguished(tuple(o))


def pointed_basis(lat: Lattice, o: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """A basis (rows) of the lattice whose first vector is o."""
    o = tuple(o)
    n = lat.rank
    if o == tuple(int(i == 0) for i in range(n)):
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return complete_basis(o)


def associated_form_with_basis(
    lat: Lattice, o: Sequence[int], basis: Sequence[Sequence[int]] | None = None
) -> tuple[QuadForm, tuple[Vector, ...]]:
    """f(x) = 3(w.w) - (o.w)^2 for w = sum x_i mu_i, plus the mu_i used."""
    _check_distinguished(lat, o)
    basis = pointed_basis(lat, o) if basis is None else as_matrix(basis)
    if tuple(basis[0]) != tuple(o):
        raise ValueError("basis must start with the distinguished element")
    g = gram_of(basis, lat.gram)
    n = len(g) - 1
    coeffs = tuple(
        tuple(
            0 if j < i else (3 * g[i + 1][i + 1] - g[0][i + 1] ** 2 if i == j
                             else 2 * (3 * g[i + 1][j + 1] - g[0][i + 1] * g[0][j + 1]))
            for j in range(n)
        )
        for i in range(n)
    )
    return QuadForm(coeffs), tuple(tuple(r) for r in basis[1:])


def associated_form(lat: Lattice, o: Sequence[int], basis: Sequence[Sequence[int]] | None = None) -> QuadForm:
    return associated_form_with_basis(lat, o, basis)[0]


def primitive_part(f: QuadForm) -> tuple[int, QuadForm]:
    lam = f.content()
    return lam, f.divided(lam)


def _flip(v: Vector) -> Vector:
    return tuple(-x for x in v)


def representations(f: QuadForm, d: int) -> list[Vector]:
    """All x with f(x) = d (f positive definite), sorted."""
    if d < 0:
        return []
    n = f.nvars
    if d == 0:
        return [(0,) * n]
    out = []
    for nv, v in kernels.short_vectors(f.gram2, 2 * d):
        if nv == 2 * d:
            out += [v, _flip(v)]
    return sorted(out)


def proper_representations(f: QuadForm, d: int) -> list[Vector]:
    return [v for v in representations(f, d) if gcd(*v) == 1]


def properly_represents(f: QuadForm, d: int) -> bool:
    return bool(proper_representations(f, d))


def has_associated_k3(d: int) -> bool:
    """4 does not divide d, 9 does not divide d, and no odd prime p = 2 mod 3 divides d."""
    if d < 1:
        return False
    if d % 4 == 0 or d % 9 == 0:
        return False
    m = d
    while m % 2 == 0:
        m //= 2
    p = 3
    while p * p <= m:
        if m % p == 0:
            if p % 3 == 2:
                return False
            while m % p == 0:
                m //= p
        p += 2
    return not (m > 1 and m % 3 == 2)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            return False
        p += 2
    return True


def splits_off(lat: Lattice, o: Sequence[int]) -> bool:
    """True iff the lattice is <o> plus its orthogonal complement."""
    comp = lat.in_basis(complement_basis(Sublattice(lat, (tuple(o),))))
    return lat.disc == 3 * comp.disc


def mod3_represents_one(g: QuadForm) -> bool:
    n = g.nvars
    if n > MOD3_NVARS_CAP:
        raise CapExceeded(f"mod-3 search is capped at {MOD3_NVARS_CAP} variables")
    return any(g(y) % 3 == 1 for y in itertools.product(range(3), repeat=n))


def nice_key(v: Vector) -> tuple:
    """Preference order for witnesses: small entries, few negatives, then lexicographic."""
    return (sum(abs(x) for x in v), sum(1 for x in v if x < 0), v)


def _values_up_to(f: QuadForm, bound: int, budget: int) -> list[tuple[int, Vector]] | None:
    vecs = kernels.short_vectors(f.gram2, 2 * bound, limit=budget + 1)
    if len(vecs) > budget:
        return None
    return [(nv // 2, v) for nv, v in vecs]


def represent_prime_1mod3(g: QuadForm, cap: int = PRIME_SEARCH_CAP, budget: int = 2 * 10**5):
    """Smallest prime p = 1 mod 3 represented by g, with a witness; None past the cap."""
    if not mod3_represents_one(g):
        raise Unsatisfiable("g never takes a value = 1 mod 3")
    bound = 16
    while True:
        bound = min(bound, cap)
        vals = _values_up_to(g, bound, budget)
        if vals is None:
            return None
        primes = sorted({val for val, _ in vals if val % 3 == 1 and is_prime(val)})
        if primes:
            p = primes[0]
            reps = [v for val, v in vals if val == p]
            reps += [_flip(v) for v in reps]
            return p, min(reps, key=nice_key)
        if bound >= cap:
            return None
        bound *= 4


def lambda_expected(lat: Lattice, o: Sequence[int], split: bool) -> int:
    """Content of the associated form predicted from the complement of o."""
    comp = lat.in_basis(complement_basis(Sublattice(lat, (tuple(o),))))
    m, n0, mp = content_split(comp)
    if split:
        return 6 * m if is_even(n0) else 3 * m
    return 2 * mp if is_even(n0) else mp


def find_witness(lat: Lattice, o: Sequence[int], f: QuadForm, mu: Sequence[Vector], lam: int,
                 cap_factor: int = 10**6, budget: int = 2 * 10**5) -> tuple[Vector, int] | None:
    """Least d satisfying the K3 condition with a labelling of disc d, searching f's values upward."""
    bound = max(8 * lam, 64)
    cap = cap_factor * lam
    while True:
        bound = min(bound, cap)
        vals = _values_up_to(f, bound, budget)
        if vals is None:
            return None
        good = sorted(
            ((val, v) for val, v in vals if gcd(*v) == 1 and has_associated_k3(val)),
            key=lambda t: (t[0], nice_key(t[1])),
        )
        if good:
            d = good[0][0]
            x = min((v for val, v in good if val == d), key=nice_key)
            x = min(x, _flip(x), key=nice_key)
            w = tuple(sum(xi * m[j] for xi, m in zip(x, mu)) for j in range(lat.rank))
            return w, d
        if bound >= cap:
            return None
        bound *= 4


def is_admissible(lat: Lattice, o: Sequence[int], search_witness: bool = True) -> AdmissibilityVerdict:
    """Decide whether (lat, o) has a labelling whose discriminant satisfies the K3 condition."""
    f, mu = associated_form_with_basis(lat, o)
    lam, g = primitive_part(f)
    split = splits_off(lat, o)
    expected = lambda_expected(lat, o, split)
    if expected != lam:
        raise AssertionError(f"content of associated form {lam} differs from predicted {expected}")
    if split:
        admissible = has_associated_k3(lam) and mod3_represents_one(g)
        mechanism = Mechanism.SPLIT_LAMBDA_AND_MOD3
    else:
        admissible = has_associated_k3(lam)
        mechanism = Mechanism.NON_SPLIT_LAMBDA
    witness = None
    if admissible and search_witness:
        witness = find_witness(lat, o, f, mu, lam)
        if witness is not None:
            w, d = witness
            assert labelling_disc(lat, o, w) == d and is_primitive_rows([tuple(o), w])
            mechanism = Mechanism.WITNESS_FOUND
    return AdmissibilityVerdict(admissible, lam, split, witness, mechanism, f, g)


def labelling_disc(lat: Lattice, o: Sequence[int], v: Sequence[int]) -> int:
    return 3 * bilinear(lat.gram, v, v) - bilinear(lat.gram, o, v) ** 2


def labellings(lat: Lattice, o: Sequence[int], d: int) -> list[Sublattice]:
    """All primitive rank-2 sublattices <o, v> of discriminant d."""
    f, mu = associated_form_with_basis(lat, o)
    out = []
    seen = set()
    for x in proper_representations(f, d):
        key = max(x, _flip(x))
        if key in seen:
            continue
        seen.add(key)
        w = tuple(sum(xi * m[j] for xi, m in zip(key, mu)) for j in range(lat.rank))
        out.append(Sublattice(lat, (tuple(o), w)))
    return out

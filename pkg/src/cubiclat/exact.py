"""Exact integer, rational and Eisenstein-integer linear algebra.

Matrices are tuples of row tuples holding Python ints (or Fractions where
noted).  Nothing in here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import SingularMinor

Matrix = tuple[tuple[int, ...], ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> Matrix:
    return tuple((0,) * n for _ in range(m))


def transpose(a: Sequence[Sequence]) -> tuple:
    return tuple(zip(*a)) if a else ()


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def vecmat(v: Sequence, a: Sequence[Sequence]) -> tuple:
    """Row vector times matrix."""
    return tuple(sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0])))


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def bilinear(g: Sequence[Sequence], u: Sequence, v: Sequence):
    """u G v^T."""
    return dot(vecmat(u, g), v)


def gram_of(basis: Sequence[Sequence], g: Sequence[Sequence]) -> tuple:
    """B G B^T for basis rows B."""
    return matmul(matmul(basis, g), transpose(basis))


def is_symmetric(a: Sequence[Sequence]) -> bool:
    n = len(a)
    return all(len(row) == n for row in a) and all(a[i][j] == a[j][i] for i in range(n) for j in range(i))


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - mik * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def leading_minors(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    return tuple(det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1))


def _swap_rows(m: list, i: int, j: int) -> None:
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: list, i: int, j: int) -> None:
    for row in m:
        row[i], row[j] = row[j], row[i]


class _SNF:
    """Working state for Smith form with both transforms and their inverses."""

    def __init__(self, a: Sequence[Sequence[int]]):
        self.m = len(a)
        self.n = len(a[0]) if a else 0
        self.d = [list(row) for row in a]
        self.u = [list(r) for r in identity(self.m)]
        self.ui = [list(r) for r in identity(self.m)]
        self.v = [list(r) for r in identity(self.n)]
        self.vi = [list(r) for r in identity(self.n)]

    def row_add(self, i: int, j: int, k: int) -> None:
        # row_i += k * row_j
        if k == 0:
            return
        for mat in (self.d, self.u):
            ri, rj = mat[i], mat[j]
            for c in range(len(ri)):
                ri[c] += k * rj[c]
        for row in self.ui:
            row[j] -= k * row[i]

    def col_add(self, i: int, j: int, k: int) -> None:
        # col_i += k * col_j
        if k == 0:
            return
        for mat in (self.d, self.v):
            for row in mat:
                row[i] += k * row[j]
        ri, rj = self.vi[j], self.vi[i]
        for c in range(self.n):
            ri[c] -= k * rj[c]

    def row_swap(self, i: int, j: int) -> None:
        if i != j:
            _swap_rows(self.d, i, j)
            _swap_rows(self.u, i, j)
            _swap_cols(self.ui, i, j)

    def col_swap(self, i: int, j: int) -> None:
        if i != j:
            _swap_cols(self.d, i, j)
            _swap_cols(self.v, i, j)
            _swap_rows(self.vi, i, j)

    def row_neg(self, i: int) -> None:
        self.d[i] = [-x for x in self.d[i]]
        self.u[i] = [-x for x in self.u[i]]
        for row in self.ui:
            row[i] = -row[i]

    def pivot(self, t: int) -> tuple[int, int] | None:
        best = None
        for i in range(t, self.m):
            row = self.d[i]
            for j in range(t, self.n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        return None if best is None else (best[1], best[2])

    def run(self) -> None:
        d = self.d
        for t in range(min(self.m, self.n)):
            while True:
                p = self.pivot(t)
                if p is None:
                    return
                self.row_swap(t, p[0])
                self.col_swap(t, p[1])
                piv = d[t][t]
                clean = True
                for i in range(t + 1, self.m):
                    q = d[i][t] // piv
                    self.row_add(i, t, -q)
                    clean = clean and d[i][t] == 0
                for j in range(t + 1, self.n):
                    q = d[t][j] // piv
                    self.col_add(j, t, -q)
                    clean = clean and d[t][j] == 0
                if not clean:
                    continue
                bad = next(
                    (i for i in range(t + 1, self.m) for j in range(t + 1, self.n) if d[i][j] % piv),
                    None,
                )
                if bad is None:
                    break
                self.row_add(t, bad, 1)
            if d[t][t] < 0:
                self.row_neg(t)


def snf_full(a: Sequence[Sequence[int]]):
    """Smith form with transforms: returns (U, D, V, U^-1, V^-1), U A V = D."""
    s = _SNF(a)
    s.run()
    return (as_matrix(s.u), as_matrix(s.d), as_matrix(s.v), as_matrix(s.ui), as_matrix(s.vi))


def snf(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form: unimodular U, V and diagonal D with U A V = D.

    Pivots are the smallest nonzero absolute entry of the remaining block,
    ties broken by row-major position; diagonal entries are nonnegative and
    successively divide each other.
    """
    u, d, v, _, _ = snf_full(a)
    return u, d, v


def elementary_divisors(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    _, d, _ = snf(a)
    return tuple(d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i])


def rank(a: Sequence[Sequence[int]]) -> int:
    return len(elementary_divisors(a)) if a and a[0] else 0


def rational_ldlt(g: Sequence[Sequence[int]]) -> tuple[RatMatrix, tuple[Fraction, ...]]:
    """G = L diag(D) L^T with L lower unitriangular, over Q."""
    n = len(g)
    low = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    dg: list[Fraction] = []
    for j in range(n):
        dj = Fraction(g[j][j]) - sum(low[j][k] ** 2 * dg[k] for k in range(j))
        if dj == 0:
            raise SingularMinor(j + 1)
        dg.append(dj)
        for i in range(j + 1, n):
            low[i][j] = (Fraction(g[i][j]) - sum(low[i][k] * low[j][k] * dg[k] for k in range(j))) / dj
    return tuple(tuple(r) for r in low), tuple(dg)


def is_positive_definite(g: Sequence[Sequence[int]]) -> bool:
    try:
        _, dg = rational_ldlt(g)
    except SingularMinor:
        return False
    return all(x > 0 for x in dg)


def hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row Hermite normal form; returns the nonzero rows (a basis of the row span)."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return ()
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[i0] = m[i0], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c]:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    return as_matrix(row for row in m[:r])


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis (rows) of {x in Z^n : A x^T = 0}; the result is saturated."""
    n = ncols if ncols is not None else len(a[0])
    if not a or not any(any(r) for r in a):
        return identity(n)
    _, d, v, _, _ = snf_full(a)
    r = sum(1 for i in range(min(len(d), n)) if d[i][i])
    vt = transpose(v)
    return tuple(vt[j] for j in range(r, n))


def saturation(rows: Sequence[Sequence[int]]) -> Matrix:
    """Basis of (Q-span of rows) intersected with Z^n."""
    _, d, _, _, vi = snf_full(rows)
    r = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])
    return tuple(vi[i] for i in range(r))


def is_primitive_rows(rows: Sequence[Sequence[int]]) -> bool:
    """True iff the rows are independent and span a saturated sublattice of Z^n."""
    ed = elementary_divisors(rows)
    return len(ed) == len(rows) and all(x == 1 for x in ed)


def complete_basis(v: Sequence[int]) -> Matrix:
    """Unimodular matrix whose first row is the primitive vector v."""
    if gcd(*v) != 1:
        from .errors import NotPrimitive

        raise NotPrimitive(tuple(v))
    u, _, _, _, vi = snf_full([list(v)])
    # u is (+-1); v = u^-1 e_1 V^-1, so the first row of V^-1 is +-v.
    rows = [list(r) for r in vi]
    if u[0][0] < 0:
        rows[0] = [-x for x in rows[0]]
    assert tuple(rows[0]) == tuple(v)
    return as_matrix(rows)


def inverse_rational(a: Sequence[Sequence]) -> RatMatrix:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            raise SingularMinor(c + 1)
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def inverse_unimodular(a: Sequence[Sequence[int]]) -> Matrix:
    inv = inverse_rational(a)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def solve_rational_left(b: Sequence[Sequence], y: Sequence) -> tuple[Fraction, ...]:
    """Solve x B = y for square nonsingular B."""
    return vecmat(tuple(Fraction(c) for c in y), inverse_rational(b))


def content(values: Iterable[int]) -> int:
    return gcd(*values)


class Eisenstein:
    """a + b*w with w a primitive cube root of unity, w^2 = -1 - w.

    Coefficients are usually ints; Fractions also work for field arithmetic.
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = a
        self.b = b

    @classmethod
    def coerce(cls, x) -> "Eisenstein":
        return x if isinstance(x, Eisenstein) else cls(x, 0)

    def __add__(self, other):
        o = Eisenstein.coerce(other)
        return Eisenstein(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Eisenstein(-self.a, -self.b)

    def __sub__(self, other):
        o = Eisenstein.coerce(other)
        return Eisenstein(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return Eisenstein.coerce(other) - self

    def __mul__(self, other):
        o = Eisenstein.coerce(other)
        bd = self.b * o.b
        return Eisenstein(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Eisenstein(1, 0)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self) -> "Eisenstein":
        return Eisenstein(self.a - self.b, -self.b)

    def norm(self):
        return self.a * self.a - self.a * self.b + self.b * self.b

    def exact_div(self, other) -> "Eisenstein":
        o = Eisenstein.coerce(other)
        num = self * o.conjugate()
        n = o.norm()
        if isinstance(n, int) and isinstance(num.a, int) and isinstance(num.b, int):
            if num.a % n or num.b % n:
                raise ArithmeticError(f"{self} is not divisible by {o}")
            return Eisenstein(num.a // n, num.b // n)
        return Eisenstein(Fraction(num.a) / n, Fraction(num.b) / n)

    __truediv__ = exact_div

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Eisenstein(other, 0)
        if not isinstance(other, Eisenstein):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __repr__(self) -> str:
        return f"Eisenstein({self.a}, {self.b})"

    def as_pair(self) -> tuple:
        return (self.a, self.b)


OMEGA = Eisenstein(0, 1)
OMEGA2 = Eisenstein(-1, -1)


def eisenstein_rank(rows: Sequence[Sequence[Eisenstein]]) -> int:
    """Rank over Q(w) by fraction-free elimination in Z[w]."""
    from . import kernels

    pairs = [[Eisenstein.coerce(x).as_pair() for x in row] for row in rows]
    return kernels.eisenstein_rank(pairs)


def eisenstein_block_embedding(rows: Sequence[Sequence[Eisenstein]]) -> Matrix:
    """Integer matrix of multiplication by each entry on the basis (1, w)."""
    out = []
    for row in rows:
        top, bottom = [], []
        for x in row:
            x = Eisenstein.coerce(x)
            top += [x.a, -x.b]
            bottom += [x.b, x.a - x.b]
        out += [top, bottom]
    return as_matrix(out)

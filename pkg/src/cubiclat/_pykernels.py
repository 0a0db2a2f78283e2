"""Pure-Python reference implementation of the enumeration and rank kernels.

The compiled module ``_kernels`` implements the same functions with 64-bit
arithmetic; this one is always exact and is used when the compiled module
is missing or when the 64-bit range checks fail.
"""
from __future__ import annotations

from math import isqrt
from typing import Iterator, Sequence


def bareiss_rows(gram: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Rows of the scaled Schur complements and the leading minors.

    rows[i][j] (j >= i) is the (i, j) entry after eliminating the first i
    variables fraction-free; delta[i] is the leading i x i minor.
    """
    n = len(gram)
    t = [list(r) for r in gram]
    delta = [1] * (n + 1)
    rows = []
    for i in range(n):
        rows.append([0] * i + t[i][i:])
        a = t[i][i]
        if a <= 0:
            raise ValueError("Gram matrix is not positive definite")
        delta[i + 1] = a
        if i + 1 < n:
            prev = delta[i]
            nt = [r[:] for r in t]
            for j in range(i + 1, n):
                tji = t[j][i]
                for k in range(i + 1, n):
                    nt[j][k] = (a * t[j][k] - tji * t[i][k]) // prev
            t = nt
    return rows, delta


def iter_short_vectors(gram: Sequence[Sequence[int]], bound: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    """Yield (norm, x) for nonzero x with x G x^T <= bound, one of each +-pair.

    The representative yielded has its last nonzero coordinate positive.
    """
    n = len(gram)
    if n == 0 or bound <= 0:
        return
    rows, delta = bareiss_rows(gram)
    x = [0] * n
    hi = [0] * n
    bb = [0] * n
    v = [0] * (n + 1)

    def open_level(i: int) -> None:
        a = rows[i][i]
        r = rows[i]
        b = 0
        for j in range(i + 1, n):
            b += r[j] * x[j]
        bb[i] = b
        rad = delta[i] * (a * bound - v[i + 1])
        if rad < 0:
            x[i], hi[i] = 1, 0
            return
        s = isqrt(rad)
        lo = -((s + b) // a)
        top = (s - b) // a
        if all(x[j] == 0 for j in range(i + 1, n)):
            lo = max(lo, 0)
        x[i], hi[i] = lo, top

    i = n - 1
    open_level(i)
    while True:
        if x[i] > hi[i]:
            i += 1
            if i == n:
                return
            x[i] += 1
            continue
        a = rows[i][i]
        y = a * x[i] + bb[i]
        v[i] = (y * y + delta[i] * v[i + 1]) // a
        if i == 0:
            if any(x):
                yield v[0], tuple(x)
            x[0] += 1
        else:
            i -= 1
            open_level(i)


def short_vectors(gram: Sequence[Sequence[int]], bound: int, limit: int = 0) -> list[tuple[int, tuple[int, ...]]]:
    out = []
    for item in iter_short_vectors(gram, bound):
        out.append(item)
        if limit and len(out) >= limit:
            break
    return out


def _mul(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    bd = x[1] * y[1]
    return (x[0] * y[0] - bd, x[0] * y[1] + x[1] * y[0] - bd)


def _div(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    a, b = _mul(x, (y[0] - y[1], -y[1]))
    n = y[0] * y[0] - y[0] * y[1] + y[1] * y[1]
    q0, r0 = divmod(a, n)
    q1, r1 = divmod(b, n)
    if r0 or r1:
        raise ArithmeticError("inexact division in Z[w]")
    return (q0, q1)


def eisenstein_rank(rows: Sequence[Sequence[tuple[int, int]]]) -> int:
    """Rank of a matrix over Z[w] (entries as (a, b) pairs) by Bareiss elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = (1, 0)
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if m[i][c] != (0, 0)), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            mic = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c + 1, ncols):
                num0 = _mul(piv, row_i[j])
                num1 = _mul(mic, row_r[j])
                row_i[j] = _div((num0[0] - num1[0], num0[1] - num1[1]), prev)
            row_i[c] = (0, 0)
        prev = piv
        r += 1
        if r == nrows:
            break
    return r

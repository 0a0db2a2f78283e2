"""Independent reference implementations used as test oracles."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd, isqrt


def naive_det(m) -> int:
    """Laplace expansion; only for small matrices."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * m[0][j] * naive_det(minor)
    return total


def gauss_inverse(m):
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def quad(g, x) -> int:
    n = len(g)
    return sum(g[i][j] * x[i] * x[j] for i in range(n) for j in range(n))


def box_vectors(g, bound: int) -> set[tuple[int, ...]]:
    """Nonzero x with x G x^T <= bound, up to sign.

    Scans the ellipsoid's bounding box in the first n-1 coordinates and
    solves the last one from the quadratic inequality.
    """
    n = len(g)
    inv = gauss_inverse(g)
    ranges = [range(-isqrt(int(bound * inv[j][j])) - 1, isqrt(int(bound * inv[j][j])) + 2) for j in range(n - 1)]
    a = g[n - 1][n - 1]
    out = set()
    for head in itertools.product(*ranges):
        lin = sum(g[i][n - 1] * head[i] for i in range(n - 1))
        c = quad([r[: n - 1] for r in g[: n - 1]], head) if n > 1 else 0
        disc = lin * lin - a * (c - bound)
        if disc < 0:
            continue
        r = isqrt(disc)
        lo, hi = (-lin - r) // a - 1, (-lin + r) // a + 1
        for t in range(lo, hi + 1):
            x = head + (t,)
            if any(x) and quad(g, x) <= bound:
                out.add(max(x, tuple(-v for v in x)))
    return out


def random_pd_gram(rng: random.Random, n: int, spread: int = 3):
    while True:
        a = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        if naive_det(a) != 0:
            return tuple(tuple(sum(a[i][k] * a[j][k] for k in range(n)) for j in range(n)) for i in range(n))


def random_distinguished_rank3(rng: random.Random):
    """Gram with o = e1 distinguished: (o.o) = 3 and (e.e) = (o.e) mod 2 for the other basis vectors."""
    while True:
        a, b = rng.randint(-4, 4), rng.randint(-4, 4)
        c = rng.randint(1, 20)
        f = rng.randint(1, 20)
        if (c - a) % 2:
            c += 1
        if (f - b) % 2:
            f += 1
        e = rng.randint(-6, 6)
        g = ((3, a, b), (a, c, e), (b, e, f))
        if all(naive_det([r[:k] for r in g[:k]]) > 0 for k in (1, 2, 3)):
            return g


def minors2_gcd(u, v) -> int:
    g = 0
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            g = gcd(g, u[i] * v[j] - u[j] * v[i])
    return g


def has_k3_condition(d: int) -> bool:
    """Trial-division check: 4, 9 and odd primes = 2 mod 3 do not divide d."""
    if d % 4 == 0 or d % 9 == 0:
        return False
    return not any(d % p == 0 for p in range(5, d + 1, 6) if all(p % q for q in range(2, isqrt(p) + 1)))

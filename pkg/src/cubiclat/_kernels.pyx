# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration and Eisenstein-rank kernels (64-bit arithmetic).

Callers must go through ``cubiclat.kernels``, which checks that every
intermediate fits in 63 bits before dispatching here.
"""
from libc.stdlib cimport malloc, realloc, free
from libc.stdint cimport int64_t
from libc.math cimport sqrtl

from cubiclat._pykernels import bareiss_rows


cdef inline int64_t _isqrt(int64_t r) nogil:
    cdef int64_t s
    if r <= 0:
        return 0
    s = <int64_t> sqrtl(<long double> r)
    while s * s > r:
        s -= 1
    while (s + 1) * (s + 1) <= r:
        s += 1
    return s


cdef inline int64_t _floordiv(int64_t a, int64_t b) nogil:
    cdef int64_t q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef int64_t _enumerate(int n, int64_t* rows, int64_t* delta, int64_t bound,
                        int64_t limit, int64_t** out, int64_t* cap) nogil:
    cdef int64_t* x = <int64_t*> malloc(n * sizeof(int64_t))
    cdef int64_t* hi = <int64_t*> malloc(n * sizeof(int64_t))
    cdef int64_t* bb = <int64_t*> malloc(n * sizeof(int64_t))
    cdef int64_t* v = <int64_t*> malloc((n + 1) * sizeof(int64_t))
    cdef int64_t count = 0
    cdef int i, j, k, zero_above, nonzero, opening
    cdef int64_t a, b, rad, s, lo, top, y
    cdef int64_t* grown
    if x == NULL or hi == NULL or bb == NULL or v == NULL:
        free(x); free(hi); free(bb); free(v)
        return -1
    for j in range(n):
        x[j] = 0
    v[n] = 0
    i = n - 1
    opening = 1
    while True:
        if opening:
            a = rows[i * n + i]
            b = 0
            zero_above = 1
            for j in range(i + 1, n):
                b += rows[i * n + j] * x[j]
                if x[j] != 0:
                    zero_above = 0
            bb[i] = b
            rad = delta[i] * (a * bound - v[i + 1])
            if rad < 0:
                x[i] = 1
                hi[i] = 0
            else:
                s = _isqrt(rad)
                lo = -_floordiv(s + b, a)
                top = _floordiv(s - b, a)
                if zero_above and lo < 0:
                    lo = 0
                x[i] = lo
                hi[i] = top
            opening = 0
        if x[i] > hi[i]:
            i += 1
            if i == n:
                break
            x[i] += 1
            continue
        a = rows[i * n + i]
        y = a * x[i] + bb[i]
        v[i] = (y * y + delta[i] * v[i + 1]) / a
        if i == 0:
            nonzero = 0
            for j in range(n):
                if x[j] != 0:
                    nonzero = 1
                    break
            if nonzero:
                if (count + 1) * (n + 1) > cap[0]:
                    grown = <int64_t*> realloc(out[0], 2 * cap[0] * sizeof(int64_t))
                    if grown == NULL:
                        count = -1
                        break
                    out[0] = grown
                    cap[0] = 2 * cap[0]
                k = count * (n + 1)
                out[0][k] = v[0]
                for j in range(n):
                    out[0][k + 1 + j] = x[j]
                count += 1
                if limit > 0 and count >= limit:
                    break
            x[0] += 1
        else:
            i -= 1
            opening = 1
    free(x); free(hi); free(bb); free(v)
    return count


def short_vectors(gram, long long bound, long long limit=0):
    """Same contract as ``_pykernels.short_vectors``."""
    cdef int n = len(gram)
    cdef int i, j
    cdef int64_t count
    cdef int64_t cap = 64 * (n + 1)
    cdef int64_t* rows
    cdef int64_t* delta
    cdef int64_t* out
    if n == 0 or bound <= 0:
        return []
    prow, pdelta = bareiss_rows(gram)
    rows = <int64_t*> malloc(n * n * sizeof(int64_t))
    delta = <int64_t*> malloc((n + 1) * sizeof(int64_t))
    out = <int64_t*> malloc(cap * sizeof(int64_t))
    if rows == NULL or delta == NULL or out == NULL:
        free(rows); free(delta); free(out)
        raise MemoryError()
    for i in range(n):
        for j in range(n):
            rows[i * n + j] = prow[i][j]
    for i in range(n + 1):
        delta[i] = pdelta[i]
    with nogil:
        count = _enumerate(n, rows, delta, bound, limit, &out, &cap)
    result = []
    if count >= 0:
        for i in range(count):
            result.append((out[i * (n + 1)], tuple([out[i * (n + 1) + 1 + j] for j in range(n)])))
    free(rows); free(delta); free(out)
    if count < 0:
        raise MemoryError()
    return result


cdef inline void _emul(int64_t a, int64_t b, int64_t c, int64_t d, int64_t* ra, int64_t* rb) nogil:
    cdef int64_t bd = b * d
    ra[0] = a * c - bd
    rb[0] = a * d + b * c - bd


def eisenstein_rank(rows):
    """Same contract as ``_pykernels.eisenstein_rank``."""
    cdef int m = len(rows)
    if m == 0:
        return 0
    cdef int n = len(rows[0])
    cdef int64_t* ea = <int64_t*> malloc(m * n * sizeof(int64_t))
    cdef int64_t* eb = <int64_t*> malloc(m * n * sizeof(int64_t))
    cdef int i, j, c, p, r = 0
    cdef int64_t pa = 1, pb = 0, qa, qb, xa, xb, ya, yb, na, nb, norm, ta, tb
    if ea == NULL or eb == NULL:
        free(ea); free(eb)
        raise MemoryError()
    for i in range(m):
        for j in range(n):
            ea[i * n + j] = rows[i][j][0]
            eb[i * n + j] = rows[i][j][1]
    with nogil:
        for c in range(n):
            p = -1
            for i in range(r, m):
                if ea[i * n + c] != 0 or eb[i * n + c] != 0:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                for j in range(n):
                    ta = ea[p * n + j]; ea[p * n + j] = ea[r * n + j]; ea[r * n + j] = ta
                    tb = eb[p * n + j]; eb[p * n + j] = eb[r * n + j]; eb[r * n + j] = tb
            qa = ea[r * n + c]
            qb = eb[r * n + c]
            norm = pa * pa - pa * pb + pb * pb
            for i in range(r + 1, m):
                for j in range(c + 1, n):
                    _emul(qa, qb, ea[i * n + j], eb[i * n + j], &xa, &xb)
                    _emul(ea[i * n + c], eb[i * n + c], ea[r * n + j], eb[r * n + j], &ya, &yb)
                    _emul(xa - ya, xb - yb, pa - pb, -pb, &na, &nb)
                    ea[i * n + j] = na / norm
                    eb[i * n + j] = nb / norm
                ea[i * n + c] = 0
                eb[i * n + c] = 0
            pa = qa
            pb = qb
            r += 1
            if r == m:
                break
    free(ea); free(eb)
    return r

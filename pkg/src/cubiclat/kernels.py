"""Backend selection for the hot loops.

The compiled module is used when it imports and when a cheap a-priori
bound shows that 64-bit arithmetic cannot overflow; otherwise the exact
pure-Python kernels run.  Set CUBICLAT_PURE_PYTHON=1 to force the fallback.
"""
from __future__ import annotations

import os
from fractions import Fraction
from math import isqrt
from typing import Iterator, Sequence

from . import _pykernels

_LIMIT = 1 << 61

try:
    if os.environ.get("CUBICLAT_PURE_PYTHON"):
        raise ImportError("pure Python forced")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def _fits_int64(gram: Sequence[Sequence[int]], bound: int) -> bool:
    if bound >= _LIMIT:
        return False
    from .exact import inverse_rational

    try:
        rows, delta = _pykernels.bareiss_rows(gram)
    except ValueError:
        return False
    n = len(gram)
    for i in range(n):
        if bound * delta[i] * delta[i + 1] >= _LIMIT:
            return False
    inv = inverse_rational(gram)
    xmax = [isqrt(int(Fraction(bound) * inv[j][j])) + 1 for j in range(n)]
    for i in range(n):
        b = sum(abs(rows[i][j]) * xmax[j] for j in range(i, n))
        if b >= 1 << 30:
            return False
    return True


def short_vectors(gram: Sequence[Sequence[int]], bound: int, limit: int = 0, backend: str | None = None):
    """All nonzero x with x G x^T <= bound as (norm, x), one per +-pair.

    Representatives have their last nonzero coordinate positive; order is
    the enumeration order (callers sort).
    """
    use = backend or BACKEND
    if use == "compiled" and _compiled is not None and _fits_int64(gram, bound):
        return _compiled.short_vectors(gram, bound, limit)
    return _pykernels.short_vectors(gram, bound, limit)


def iter_short_vectors(gram: Sequence[Sequence[int]], bound: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    """Lazy variant, always pure Python (for early-exit searches)."""
    return _pykernels.iter_short_vectors(gram, bound)


def _eisenstein_fits(rows) -> bool:
    if not rows:
        return True
    k = min(len(rows), len(rows[0]))
    m2 = max((a * a - a * b + b * b) for row in rows for a, b in row)
    h2 = (len(rows[0]) * max(m2, 1)) ** k
    # intermediates are bounded by a product of three minors
    return 64 * h2 ** 3 < _LIMIT * _LIMIT


def eisenstein_rank(rows, backend: str | None = None) -> int:
    use = backend or BACKEND
    if use == "compiled" and _compiled is not None and _eisenstein_fits(rows):
        return _compiled.eisenstein_rank(rows)
    return _pykernels.eisenstein_rank(rows)

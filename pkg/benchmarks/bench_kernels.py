"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are checked to return identical results before timing.
"""
import argparse
import random
import sys
import timeit

from cubiclat import _pykernels, kernels
from cubiclat.fermat import all_planes


def _gram_cases():
    rng = random.Random(7)
    cases = []
    for n in (4, 6, 8):
        while True:
            b = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
            for i in range(n):
                b[i][i] = rng.choice((2, 3))
            g = [[sum(b[i][k] * b[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
            if all(g[i][i] > 0 for i in range(n)) and _pykernels.bareiss_rows(g):
                break
        bound = 3 * max(g[i][i] for i in range(n))
        cases.append((f"short_vectors rank {n}, bound {bound}", g, bound))
    return cases


def _eisenstein_cases():
    planes = all_planes()
    rng = random.Random(8)
    pairs = [rng.sample(range(len(planes)), 2) for _ in range(400)]
    return [[planes[i].rows + planes[j].rows for i, j in pairs]]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    if kernels._compiled is None:
        print("compiled kernels unavailable; nothing to compare", file=sys.stderr)
        return 1

    rows = []
    for label, g, bound in _gram_cases():
        assert sorted(kernels.short_vectors(g, bound, backend="compiled")) == \
            sorted(kernels.short_vectors(g, bound, backend="python"))
        t = {be: min(timeit.repeat(lambda: kernels.short_vectors(g, bound, backend=be),
                                   number=1, repeat=args.repeat))
             for be in ("python", "compiled")}
        rows.append((label, t))

    (batch,) = _eisenstein_cases()
    assert [kernels.eisenstein_rank(m, backend="compiled") for m in batch] == \
        [kernels.eisenstein_rank(m, backend="python") for m in batch]
    t = {be: min(timeit.repeat(lambda: [kernels.eisenstein_rank(m, backend=be) for m in batch],
                               number=1, repeat=args.repeat))
         for be in ("python", "compiled")}
    rows.append((f"eisenstein_rank x{len(batch)} plane pairs", t))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'python':>10}  {'compiled':>10}  speedup")
    for label, t in rows:
        print(f"{label:<{width}}  {t['python'] * 1e3:8.2f}ms  {t['compiled'] * 1e3:8.2f}ms  "
              f"{t['python'] / t['compiled']:6.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

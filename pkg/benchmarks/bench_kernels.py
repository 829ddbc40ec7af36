"""Compare the compiled kernels with the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--quick]

Each case is run on both backends, the results are checked for equality and
the best-of-N wall time is reported with the speedup.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from emlab import _pykernels

try:
    from emlab import _kernels
except ImportError:
    _kernels = None

CAP = 2**20


def cases(quick: bool):
    rng = np.random.default_rng(0)
    n_fold = 20_000 if quick else 200_000
    n_col = 120 if quick else 300
    const = np.zeros(n_col * (n_col - 1) // 2, dtype=np.int32)
    rand10 = rng.integers(0, 4, 45, dtype=np.int32)
    elems10 = list(range(4, 14))
    # finite tails are consumed in one move, so fold cost is per call and per
    # omega step; many short windows is the realistic load
    starts = range(4, 4 + n_fold // 100)
    yield f"fold_range  w^2.3, {len(starts)} windows", lambda k: [
        k.fold_range([2], [3], a, a + 400, CAP) for a in starts]
    lists = [list(range(a, a + 60)) for a in starts]
    yield f"fold        w.5 + 3, {len(lists)} lists", lambda k: [k.fold([1, 0], [5, 3], e, CAP) for e in lists]
    yield f"fallow_violation  constant, n={n_col}", lambda k: k.fallow_violation(const, n_col)
    yield f"transitive_violation  constant, n={n_col}", lambda k: k.transitive_violation(const, n_col)
    yield "search_fallow_large  w, n=10", lambda k: k.search_fallow_large(rand10, 10, elems10, [1], [1], CAP)
    hi = 4**6 if quick else 4**8
    yield f"first_unsolvable  {{4..8}}, 3, ranks<{hi}", lambda k: k.first_unsolvable(
        5, 4, [4, 5, 6, 7, 8], [0], [3], CAP, 0, hi)
    rows = rng.integers(0, 8, (5, 200)).tolist()
    yield "argmax_packed  5 x 200", lambda k: k.argmax_packed(rows, 200)
    yield "sweep_fallow  u=2, vcap=3, horizon=5" if quick else "sweep_fallow  u=3, vcap=1, horizon=5", (
        (lambda k: k.sweep_fallow(2, 3, 5)) if quick else (lambda k: k.sweep_fallow(3, 1, 5)))


def best_of(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def normalize(v):
    if isinstance(v, (tuple, list, np.ndarray)):
        return [normalize(x) for x in v]
    return int(v) if isinstance(v, (int, np.integer)) else v


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    print(f"{'case':44s} {'python':>10s} {'cython':>10s} {'speedup':>9s}")
    ok = True
    for label, fn in cases(args.quick):
        tp, rp = best_of(lambda: fn(_pykernels), args.repeat)
        tc, rc = best_of(lambda: fn(_kernels), args.repeat)
        same = normalize(rp) == normalize(rc)
        ok &= same
        flag = "" if same else "  MISMATCH"
        print(f"{label:44s} {tp:10.4f} {tc:10.4f} {tp / max(tc, 1e-9):8.1f}x{flag}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

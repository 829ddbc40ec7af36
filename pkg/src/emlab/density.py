"""Exact and randomized checks of EM-alpha-largeness and EM-m-density.

Colorings of ``[X]^2`` into ``min X`` colors are numbered by mixed-radix
rank (pair slot 0 least significant), so an exact run over ranks
``[lo, hi)`` can be split into shards and resumed.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import _backend
from .certificate import Certificate
from .colorings import PairColoring
from .errors import BudgetExceeded, PreconditionError
from .finset import FinSet
from .largeness import is_alpha_large, residue
from .ordinal import DEFAULT_CAP, OMEGA, Ordinal, as_ordinal, to_arrays

DEFAULT_BUDGET = 2**30


def resolve_budget(budget: int | None = None) -> int:
    """Explicit budget, else ``EMLAB_BUDGET``, else the default."""
    if budget is None:
        budget = int(os.environ.get("EMLAB_BUDGET", DEFAULT_BUDGET))
    if budget <= 0:
        raise ValueError("enumeration budget must be positive")
    return budget


def coloring_space(n: int, k: int) -> int:
    """Number of colorings of the pairs of an n-set into k colors."""
    return k ** (n * (n - 1) // 2)


def shard_range(total: int, shard: tuple[int, int]) -> tuple[int, int]:
    i, count = shard
    if not 0 <= i < count:
        raise ValueError(f"bad shard {i}/{count}")
    return total * i // count, total * (i + 1) // count


def _as_set(X) -> FinSet:
    return X if isinstance(X, FinSet) else FinSet(tuple(X))


def _coloring_evidence(X: FinSet, rank: int) -> dict:
    P = PairColoring.from_rank(X, X.min(), rank)
    return {"clause": 1, "rank": rank, "coloring": P.to_json()["pairs"]}


# --- rank scanning -------------------------------------------------------


def _scan(args) -> int:
    """Worker: first unsolvable rank in a range, -1 if none."""
    n, k, elems, exps, coefs, lo, hi = args
    kern = _backend.for_values(max(elems))
    return kern.first_unsolvable(n, k, elems, exps, coefs, DEFAULT_CAP, lo, hi)


def first_unsolvable(X: FinSet, alpha: Ordinal, lo: int, hi: int, workers: int = 1) -> int | None:
    """Least rank in ``[lo, hi)`` whose coloring has no fallow alpha-large subset."""
    exps, coefs = to_arrays(alpha)
    base = (len(X), X.min(), list(X.elements), list(exps), list(coefs))
    if workers <= 1 or hi - lo < 2 * workers:
        r = _scan(base + (lo, hi))
        return None if r < 0 else r
    cuts = [lo + (hi - lo) * i // workers for i in range(workers + 1)]
    jobs = [base + (a, b) for a, b in zip(cuts, cuts[1:])]
    with ProcessPoolExecutor(workers) as ex:
        hits = [r for r in ex.map(_scan, jobs) if r >= 0]
    return min(hits) if hits else None


def _sample_colorings(X: FinSet, rng: np.random.Generator, samples: int) -> Iterator[np.ndarray]:
    p = len(X) * (len(X) - 1) // 2
    for _ in range(samples):
        yield rng.integers(0, X.min(), p, dtype=np.int32)


def _has_fallow_large(X: FinSet, values, alpha: Ordinal) -> bool:
    exps, coefs = to_arrays(alpha)
    kern = _backend.for_values(X.max())
    mask = kern.search_fallow_large(
        np.ascontiguousarray(values, dtype=np.int32), len(X), list(X.elements),
        list(exps), list(coefs), DEFAULT_CAP,
    )
    return mask >= 0


def _rank_of(values, k: int) -> int:
    r = 0
    for v in reversed([int(x) for x in values]):
        r = r * k + v
    return r


# --- EM-alpha-largeness --------------------------------------------------


def check_em_alpha_large(
    X,
    alpha,
    mode: str = "exact",
    seed: int = 0,
    samples: int = 1000,
    budget: int | None = None,
    shard: tuple[int, int] = (0, 1),
    workers: int = 1,
) -> Certificate:
    """Does every coloring of ``[X]^2`` into ``min X`` colors admit a fallow
    alpha-large subset? Exact mode enumerates the rank range of ``shard``;
    randomized mode samples and never answers true."""
    X = _as_set(X)
    alpha = as_ordinal(alpha)
    if not len(X) or X.min() <= 3:
        raise PreconditionError("EM-largeness needs min X > 3")
    cert = Certificate(
        op="density.em-alpha-large",
        inputs={"set": X, "alpha": str(alpha)},
        subject=X,
        query={"kind": "em-alpha-large", "parameter": str(alpha)},
        mode=mode,
    )
    total = coloring_space(len(X), X.min())
    if mode == "exact":
        if total > resolve_budget(budget):
            raise BudgetExceeded(f"{total} colorings exceed the enumeration budget")
        lo, hi = shard_range(total, shard)
        rank = first_unsolvable(X, alpha, lo, hi, workers)
        if rank is None:
            cert.evidence = {"exhausted": [[lo, hi]], "total": total}
            cert.verdict = True if (lo, hi) == (0, total) else None
        else:
            cert.verdict = False
            cert.evidence = _coloring_evidence(X, rank)
    elif mode == "randomized":
        rng = np.random.default_rng(seed)
        cert.seed, cert.samples = seed, samples
        for s, values in enumerate(_sample_colorings(X, rng, samples)):
            if not _has_fallow_large(X, values, alpha):
                cert.verdict = False
                cert.evidence = {**_coloring_evidence(X, _rank_of(values, X.min())), "sample": s}
                break
        else:
            cert.evidence = {"clean_samples": samples}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    cert.verified = cert.verdict is not None
    return cert


# --- EM-m-density ----------------------------------------------------------


def valid_partitions(X: tuple, alt_reading: bool = False) -> Iterator[list[tuple]]:
    """Consecutive partitions ``Z_0 < ... < Z_l-1`` of X with ``l <= min Z_0``
    (or ``l <= |Z_0|`` under ``alt_reading``), fewest blocks first."""
    n = len(X)
    for ncuts in range(n):
        if not alt_reading and ncuts + 1 > X[0]:
            return
        for cuts in itertools.combinations(range(1, n), ncuts):
            bounds = (0, *cuts, n)
            part = [X[bounds[i] : bounds[i + 1]] for i in range(ncuts + 1)]
            if alt_reading and len(part) > len(part[0]):
                continue
            yield part


def count_partitions(X: tuple, alt_reading: bool = False) -> int:
    n = len(X)
    if alt_reading:
        return sum(1 for _ in valid_partitions(X, True))
    return sum(math.comb(n - 1, l - 1) for l in range(1, min(n, X[0]) + 1))


def _random_partition(X: tuple, rng: np.random.Generator, alt_reading: bool) -> list[tuple] | None:
    n = len(X)
    top = n if alt_reading else min(n, X[0])
    l = int(rng.integers(1, top + 1))
    cuts = sorted(rng.choice(np.arange(1, n), size=l - 1, replace=False).tolist()) if l > 1 else []
    bounds = (0, *cuts, n)
    part = [X[bounds[i] : bounds[i + 1]] for i in range(l)]
    if alt_reading and l > len(part[0]):
        return None
    return part


class DensityChecker:
    """Exact density verdicts with a per-run memo."""

    def __init__(self, budget: int | None = None, alt_reading: bool = False, workers: int = 1):
        self.budget = resolve_budget(budget)
        self.alt_reading = alt_reading
        self.workers = workers
        self.memo: dict[tuple[tuple, int], bool] = {}

    def dense(self, X: tuple, m: int) -> bool:
        X = tuple(X)
        key = (X, m)
        if key not in self.memo:
            self.memo[key] = self._dense(X, m)
        return self.memo[key]

    def _dense(self, X: tuple, m: int) -> bool:
        if m == 0:
            return bool(X) and X[0] > 3 and is_alpha_large(X, OMEGA)
        if not X or X[0] <= 3:
            return False
        if self.clause2(X, m) is not None:
            return False
        return self.clause1(X, m) is None

    def clause2(self, X: tuple, m: int):
        """First partition with no block dense at level m-1, or None."""
        for part in valid_partitions(X, self.alt_reading):
            if not any(self.dense(b, m - 1) for b in part):
                return part
        return None

    def clause1(self, X: tuple, m: int, lo: int = 0, hi: int | None = None):
        """First coloring rank in [lo, hi) with no fallow subset dense at
        level m-1, or None."""
        S = FinSet(X)
        total = coloring_space(len(X), X[0])
        if total > self.budget:
            raise BudgetExceeded(f"{total} colorings of {S} exceed the enumeration budget")
        hi = total if hi is None else hi
        if m == 1:
            return first_unsolvable(S, OMEGA, lo, hi, self.workers)
        dense_subsets = self.dense_subsets(X, m - 1)
        for rank in range(lo, hi):
            if not self.solvable(X, PairColoring.from_rank(S, X[0], rank).values, dense_subsets):
                return rank
        return None

    def dense_subsets(self, X: tuple, m: int) -> list[tuple[int, ...]]:
        """Index tuples of the subsets of X dense at level m, largest first."""
        out = []
        for r in range(len(X), 0, -1):
            for idx in itertools.combinations(range(len(X)), r):
                if self.dense(tuple(X[i] for i in idx), m):
                    out.append(idx)
        return out

    @staticmethod
    def solvable(X: tuple, values, dense_subsets) -> bool:
        """Is the packed coloring fallow on one of the given index subsets?"""
        for idx in dense_subsets:
            ok = True
            for a, b, c in itertools.combinations(idx, 3):
                ac = values[c * (c - 1) // 2 + a]
                if ac != values[b * (b - 1) // 2 + a] and ac != values[c * (c - 1) // 2 + b]:
                    ok = False
                    break
            if ok:
                return True
        return False


def _base_evidence(X: FinSet) -> dict:
    if not len(X) or X.min() <= 3:
        return {"clause": "base", "reason": "min X <= 3"}
    return {"clause": "base", "reason": "not w-large", "residue": str(residue(X, OMEGA))}


def check_em_dense(
    X,
    m: int,
    mode: str = "exact",
    seed: int = 0,
    samples: int = 1000,
    budget: int | None = None,
    alt_reading: bool = False,
    shard: tuple[int, int] = (0, 1),
    workers: int = 1,
) -> Certificate:
    """Is X EM-m-dense? Clause 2 (partitions) is always checked exactly and
    first; the top-level clause-1 coloring scan is exact over the shard's
    rank range or sampled in randomized mode. Sub-verdicts are exact."""
    X = _as_set(X)
    if m < 0:
        raise ValueError("m must be a natural number")
    cert = Certificate(
        op="density.em-dense",
        inputs={"set": X, "m": m, "alt_reading": alt_reading},
        subject=X,
        query={"kind": "em-m-dense", "parameter": m},
        mode=mode,
    )
    if mode not in ("exact", "randomized"):
        raise ValueError(f"unknown mode {mode!r}")
    if m == 0:
        cert.verdict = len(X) > 0 and X.min() > 3 and is_alpha_large(X, OMEGA)
        if not cert.verdict:
            cert.evidence = _base_evidence(X)
        cert.verified = True
        return cert
    if not len(X) or X.min() <= 3:
        raise PreconditionError("density above level 0 needs min X > 3")

    checker = DensityChecker(budget, alt_reading, workers)
    els = X.elements
    part = checker.clause2(els, m)
    if part is not None:
        cert.verdict = False
        cert.evidence = {"clause": 2, "partition": [list(b) for b in part]}
    elif mode == "exact":
        total = coloring_space(len(X), X.min())
        lo, hi = shard_range(total, shard)
        rank = checker.clause1(els, m, lo, hi)
        if rank is None:
            cert.evidence = {"exhausted": [[lo, hi]], "total": total}
            cert.verdict = True if (lo, hi) == (0, total) else None
        else:
            cert.verdict = False
            cert.evidence = _coloring_evidence(X, rank)
    else:
        cert.seed, cert.samples = seed, samples
        found = _sample_clause1(checker, X, m, np.random.default_rng(seed), samples)
        cert.evidence = found if found is not None else {"clean_samples": samples}
        cert.verdict = False if found is not None else None
    cert.verified = cert.verdict is not None
    return cert


def _sample_clause1(checker: DensityChecker, X: FinSet, m: int, rng, samples: int):
    dense_subsets = checker.dense_subsets(X.elements, m - 1) if m >= 2 else None
    for s, values in enumerate(_sample_colorings(X, rng, samples)):
        if m == 1:
            ok = _has_fallow_large(X, values, OMEGA)
        else:
            ok = checker.solvable(X.elements, values, dense_subsets)
        if not ok:
            return {**_coloring_evidence(X, _rank_of(values, X.min())), "sample": s}
    return None


@dataclass(frozen=True)
class Refutation:
    clause: int
    evidence: dict
    sample: int

    def to_json(self) -> dict:
        return {"clause": self.clause, "sample": self.sample, **self.evidence}


def refute_density(
    X, m: int, samples: int, seed: int = 0, alt_reading: bool = False, budget: int | None = None
) -> Refutation | None:
    """Search for a counterexample to EM-m-density.

    Up to ``samples`` partitions are tried (all of them, in order, when there
    are at most ``samples``; otherwise random ones), then ``samples`` random
    colorings. ``None`` means nothing was found, which is no verdict.
    """
    X = _as_set(X)
    if m < 1:
        raise PreconditionError("refute_density needs m >= 1")
    if not len(X) or X.min() <= 3:
        raise PreconditionError("density above level 0 needs min X > 3")
    if samples <= 0:
        return None
    rng = np.random.default_rng(seed)
    checker = DensityChecker(budget, alt_reading)
    els = X.elements
    if count_partitions(els, alt_reading) <= samples:
        parts = enumerate(valid_partitions(els, alt_reading))
    else:
        parts = ((s, _random_partition(els, rng, alt_reading)) for s in range(samples))
    for s, part in parts:
        if part is not None and not any(checker.dense(b, m - 1) for b in part):
            return Refutation(2, {"partition": [list(b) for b in part]}, s)
    found = _sample_clause1(checker, X, m, rng, samples)
    if found is not None:
        sample = found.pop("sample")
        found.pop("clause")
        return Refutation(1, found, sample)
    return None


# --- merging and re-validation --------------------------------------------


def _evidence_key(ev: dict):
    clause = ev.get("clause")
    if clause == "base":
        return (0, 0)
    if clause == 2:
        return (1, 0)
    return (2, ev.get("rank", 0))


def merge_certificates(certs: list[Certificate]) -> Certificate:
    """Combine shard certificates of one query. Any false wins (least
    evidence key); otherwise true iff the exhausted ranges cover everything."""
    if not certs:
        raise ValueError("nothing to merge")
    first = certs[0]
    out = Certificate(
        op=first.op, inputs=first.inputs, subject=first.subject, query=first.query,
        mode=first.mode, seed=first.seed, samples=first.samples, started=first.started,
    )
    falses = [c for c in certs if c.verdict is False]
    if falses:
        best = min(falses, key=lambda c: _evidence_key(c.evidence))
        out.verdict, out.evidence = False, best.evidence
    else:
        ranges = sorted(r for c in certs for r in (c.evidence or {}).get("exhausted", []))
        total = max((c.evidence or {}).get("total", 0) for c in certs)
        pos = 0
        for lo, hi in ranges:
            if lo > pos:
                break
            pos = max(pos, hi)
        merged = []
        for lo, hi in ranges:
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        out.evidence = {"exhausted": merged, "total": total} if ranges else first.evidence
        out.verdict = True if ranges and pos >= total else None
    out.verified = out.verdict is not None
    return out


def revalidate(cert: Certificate) -> list[str]:
    """Re-check a false verdict's evidence with the independent validators."""
    from . import validate

    if cert.verdict is not False:
        return []
    X = tuple(cert.subject)
    ev = cert.evidence
    kind = cert.query["kind"]
    if ev.get("clause") == "base":
        problems = []
        if validate.naive_dense(X, 0):
            problems.append("set is dense at level 0")
        return problems
    if ev.get("clause") == 2:
        return validate.validate_partition_evidence(
            X, ev["partition"], cert.query["parameter"], cert.inputs.get("alt_reading", False)
        )
    if kind == "em-alpha-large":
        terms = as_ordinal(cert.query["parameter"]).terms
        return validate.validate_coloring_evidence(X, ev["coloring"], target_terms=terms)
    return validate.validate_coloring_evidence(
        X, ev["coloring"], m=cert.query["parameter"],
        alt_reading=cert.inputs.get("alt_reading", False),
    )

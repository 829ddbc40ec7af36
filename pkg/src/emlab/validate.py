"""Independent re-checkers for density evidence.

Deliberately naive and self-contained: nothing here imports the searchers,
the kernels or the ordinal module, so a bug there cannot hide a bogus
counterexample. Ordinals are plain ``[(exp, coef), ...]`` lists in CNF order.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

OMEGA_TERMS = ((1, 1),)


def naive_step(terms, m):
    terms = list(terms)
    if not terms:
        return terms
    e, c = terms.pop()
    if c > 1:
        terms.append((e, c - 1))
    if e > 0 and m > 0:
        terms.append((e - 1, m))
    return terms


def naive_large(elements, terms) -> bool:
    terms = list(terms)
    for x in sorted(elements):
        if not terms:
            return True
        terms = naive_step(terms, x)
    return not terms


def naive_fallow(color, elements) -> bool:
    """``color(x, y)`` with ``x < y``; checks every triple."""
    for x, y, z in combinations(sorted(elements), 3):
        if color(x, z) not in (color(x, y), color(y, z)):
            return False
    return True


def naive_dense(elements: tuple, m: int, alt_reading: bool = False) -> bool:
    """Density by literal enumeration of every coloring and partition."""
    return _dense(tuple(sorted(elements)), m, alt_reading)


@lru_cache(maxsize=None)
def _dense(X: tuple, m: int, alt: bool) -> bool:
    if m == 0:
        return bool(X) and X[0] > 3 and naive_large(X, OMEGA_TERMS)
    if not X or X[0] <= 3:
        return False
    for part in _partitions(X, alt):
        if not any(_dense(block, m - 1, alt) for block in part):
            return False
    pairs = list(combinations(X, 2))
    k = X[0]
    for code in range(k ** len(pairs)):
        col = {}
        for p in pairs:
            code, col[p] = divmod(code, k)
        if not _some_fallow_dense(X, col, m - 1, alt):
            return False
    return True


def _some_fallow_dense(X, col, m, alt) -> bool:
    for r in range(len(X), 0, -1):
        for Y in combinations(X, r):
            if _dense(Y, m, alt) and naive_fallow(lambda a, b: col[(a, b)], Y):
                return True
    return False


def _partitions(X, alt):
    n = len(X)
    for cuts_n in range(n):
        for cuts in combinations(range(1, n), cuts_n):
            bounds = (0,) + cuts + (n,)
            part = [X[bounds[i] : bounds[i + 1]] for i in range(len(bounds) - 1)]
            bound = len(part[0]) if alt else part[0][0]
            if len(part) <= bound:
                yield part


def validate_partition_evidence(X, partition, m: int, alt_reading: bool = False) -> list[str]:
    """Problems with a claimed clause-2 counterexample; empty means valid."""
    X = tuple(sorted(X))
    blocks = [tuple(b) for b in partition]
    problems = []
    if not blocks or any(not b for b in blocks):
        return ["empty partition or block"]
    if tuple(x for b in blocks for x in b) != X:
        problems.append("blocks do not cover X in order")
    for a, b in zip(blocks, blocks[1:]):
        if max(a) >= min(b):
            problems.append("blocks are not consecutive")
    bound = len(blocks[0]) if alt_reading else min(blocks[0])
    if len(blocks) > bound:
        problems.append(f"{len(blocks)} blocks exceed the bound {bound}")
    for b in blocks:
        if naive_dense(b, m - 1, alt_reading):
            problems.append(f"block {list(b)} is dense at level {m - 1}")
    return problems


def validate_coloring_evidence(X, pairs, target_terms=None, m: int | None = None,
                               alt_reading: bool = False) -> list[str]:
    """Problems with a claimed clause-1 counterexample.

    ``pairs`` is ``[[x, y, c], ...]``. With ``target_terms`` the claim is
    that no fallow subset is large for that ordinal; with ``m`` that no
    fallow subset is dense at level ``m - 1``.
    """
    X = tuple(sorted(X))
    col = {(x, y): c for x, y, c in pairs}
    problems = []
    if set(col) != set(combinations(X, 2)):
        problems.append("coloring is not total on X")
        return problems
    if any(not 0 <= c < X[0] for c in col.values()):
        problems.append("colors outside [0, min X)")
    for r in range(len(X), -1, -1):
        for Y in combinations(X, r):
            if not naive_fallow(lambda a, b: col[(a, b)], Y):
                continue
            if target_terms is not None and naive_large(Y, target_terms):
                problems.append(f"{list(Y)} is fallow and large")
                return problems
            if m is not None and Y and _dense(Y, m - 1, alt_reading):
                problems.append(f"{list(Y)} is fallow and dense")
                return problems
    return problems

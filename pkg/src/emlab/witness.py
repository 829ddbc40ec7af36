"""Constructive extractors: fallow chains, stabilization, groupings, EM witnesses.

The hypotheses these constructions are usually stated under run through
``w^3``-sparseness, whose gaps are far too large to materialize. Each
function therefore enforces only what its own algorithm consumes and checks
its output before returning it; :func:`nominal_preconditions` evaluates the
textbook hypotheses for the record.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .colorings import PairColoring, _pair_indices, is_fallow, is_transitive, pair_rank
from .errors import (
    ChainStalled,
    GroupingShortfall,
    InsufficientInput,
    NotSubset,
    PreconditionError,
    ResourceLimit,
    SplitFailed,
    VerificationFailed,
)
from .finset import FinSet
from .largeness import fold, is_alpha_large, is_alpha_sparse, large_prefix, residue
from .ordinal import OMEGA, Ordinal, as_ordinal

log = logging.getLogger(__name__)


def _as_set(X) -> FinSet:
    return X if isinstance(X, FinSet) else FinSet(tuple(X))


def _require_subset(X: FinSet, P: PairColoring) -> None:
    if not X.issubset(P.ground):
        raise NotSubset("set is not contained in the coloring's ground")


def _maybe(fn):
    try:
        return fn()
    except ResourceLimit:
        return None


# --- the w-large base case -----------------------------------------------


def fallow_base_witness(X, P: PairColoring, strict: bool = True) -> FinSet:
    """Min-homogeneous chain ``a_0 < ... < a_a`` with ``a = min X``.

    Each ``a_i`` is the least survivor, and the survivors shrink to the
    largest color class of ``P(a_i, .)`` (least color on ties). With
    ``strict`` the input must exceed ``(a+1)^(a+1)`` elements, which the
    pigeonhole principle turns into a guaranteed ``a + 1`` picks.
    """
    X = _as_set(X)
    a = X.min()
    if P.colors > a:
        raise PreconditionError(f"coloring uses {P.colors} colors, more than min X = {a}")
    _require_subset(X, P)
    if strict and len(X) <= (a + 1) ** (a + 1):
        raise InsufficientInput(f"|X| = {len(X)} <= (a+1)^(a+1) = {(a + 1) ** (a + 1)}")

    pool = np.asarray(X.elements, dtype=np.int64)
    picks: list[int] = []
    for i in range(a + 1):
        if pool.size == 0:
            msg = f"chain stalled after {len(picks)} of {a + 1} picks"
            if strict:
                raise VerificationFailed(msg)
            raise ChainStalled(msg, partial=FinSet(tuple(picks)))
        ai = int(pool[0])
        picks.append(ai)
        if i == a:
            break
        rest = pool[1:]
        if rest.size == 0:
            pool = rest
            continue
        cols = P.row(ai, rest)
        best = int(np.argmax(np.bincount(cols, minlength=P.colors)))
        pool = rest[cols == best]

    Y = FinSet(tuple(picks))
    problems = _check_base(Y, P, a)
    if problems:
        raise VerificationFailed(f"base witness {Y} failed: {problems}")
    return Y


def _check_base(Y: FinSet, P: PairColoring, a: int) -> list[str]:
    problems = []
    if len(Y) != a + 1:
        problems.append(f"size {len(Y)} != {a + 1}")
    if Y.min() != a:
        problems.append("min Y != min X")
    if not is_alpha_large(Y, OMEGA):
        problems.append("not w-large")
    els = Y.elements
    for i in range(len(els) - 1):
        row = P.row(els[i], els[i + 1 :])
        if row.min() != row.max():
            problems.append(f"not min-homogeneous at {els[i]}")
    if not is_fallow(P, Y):
        problems.append("not fallow")
    if not is_transitive(P, Y):
        problems.append("not transitive")
    return problems


# --- stabilization -------------------------------------------------------


def stabilize(
    X,
    anchors,
    P: PairColoring,
    n: int,
    direction: str = "anchors-below",
    c: int | None = None,
) -> FinSet:
    """Shrink ``X \\ {min X}`` until every anchor sees a single color on it.

    Runs ``c^2`` binary rounds; round ``i = j1*c + j2`` splits on whether
    ``P(anchor_j1, y) == j2`` and keeps a side that is
    ``w^n . 4^(c^2-i-1)``-large, preferring the equal side.
    ``c`` defaults to the number of anchors.
    """
    X = _as_set(X)
    anchors = _as_set(anchors)
    if direction not in ("anchors-below", "anchors-above"):
        raise ValueError(f"unknown direction {direction!r}")
    c = len(anchors) if c is None else c
    if len(anchors) > c:
        raise PreconditionError(f"{len(anchors)} anchors but c = {c}")
    _require_subset(X, P)
    _require_subset(anchors, P)
    if anchors and X:
        if direction == "anchors-below" and anchors.max() >= X.min():
            raise PreconditionError("anchors must lie below X")
        if direction == "anchors-above" and anchors.min() <= X.max():
            raise PreconditionError("anchors must lie above X")

    Y = np.asarray(X.elements[1:], dtype=np.int64)
    rows = {x: P.row(x, Y) for x in anchors}
    if any(r.size and r.max() >= c for r in rows.values()):
        raise PreconditionError(f"anchor colors must be below c = {c}")

    keep = np.ones(Y.size, dtype=bool)
    for i in range(c * c):
        j1, j2 = divmod(i, c)
        if j1 >= len(anchors):
            continue
        demand = Ordinal.omega_power(n, 4 ** (c * c - i - 1))
        hit = rows[anchors[j1]] == j2
        eq = keep & hit
        ne = keep & ~hit
        if is_alpha_large(Y[eq].tolist(), demand):
            keep = eq
        elif is_alpha_large(Y[ne].tolist(), demand):
            keep = ne
        else:
            raise SplitFailed(
                f"round {i}: neither side is {demand}-large",
                round_index=i,
                partial=FinSet(tuple(Y[keep].tolist())),
            )

    out = FinSet(tuple(Y[keep].tolist()))
    for x in anchors:
        if len(set(rows[x][keep].tolist())) > 1:
            raise VerificationFailed(f"anchor {x} sees several colors on the output")
    return out


# --- groupings -----------------------------------------------------------


@dataclass(frozen=True)
class Grouping:
    blocks: tuple[FinSet, ...]
    alpha: Ordinal
    beta: Ordinal

    @property
    def maxes(self) -> FinSet:
        return FinSet(tuple(b.max() for b in self.blocks))

    def to_json(self) -> dict:
        return {
            "blocks": [list(b) for b in self.blocks],
            "alpha": str(self.alpha),
            "beta": str(self.beta),
        }


@dataclass(frozen=True)
class Violation:
    condition: int
    detail: dict

    def to_json(self) -> dict:
        return {"condition": self.condition, **self.detail}


def verify_grouping(g: Grouping, P: PairColoring) -> list[Violation]:
    """Check the four grouping conditions; an empty list means valid.

    1. blocks are ordered, ``max F_i < min F_j``;
    2. every block is alpha-large;
    3. the set of block maxima is beta-large;
    4. all pairs between two blocks share one color.
    """
    for b in g.blocks:
        _require_subset(b, P)
    out: list[Violation] = []
    blocks = g.blocks
    for i, b in enumerate(blocks):
        if not len(b):
            out.append(Violation(1, {"block": i, "reason": "empty block"}))
    nonempty = [i for i, b in enumerate(blocks) if len(b)]
    for a, i in enumerate(nonempty):
        for j in nonempty[a + 1 :]:
            if blocks[i].max() >= blocks[j].min():
                out.append(Violation(1, {"blocks": [i, j]}))
    for i in nonempty:
        res = residue(blocks[i], g.alpha)
        if not res.is_zero:
            out.append(Violation(2, {"block": i, "residue": str(res)}))
    maxes = FinSet.of(blocks[i].max() for i in nonempty)
    res = residue(maxes, g.beta)
    if not res.is_zero:
        out.append(Violation(3, {"residue": str(res)}))
    if any(v.condition == 1 for v in out):
        for a, i in enumerate(nonempty):
            for j in nonempty[a + 1 :]:
                cols = _cross(P, blocks[i], blocks[j])
                if cols.min() != cols.max():
                    x, y = _differing_pair(P, blocks[i], blocks[j])
                    out.append(Violation(4, {"blocks": [i, j], "pairs": [x, y]}))
    else:
        for i, j in _incoherent_block_pairs(P, [blocks[i] for i in nonempty]):
            bi, bj = nonempty[i], nonempty[j]
            x, y = _differing_pair(P, blocks[bi], blocks[bj])
            out.append(Violation(4, {"blocks": [bi, bj], "pairs": [x, y]}))
    return out


def _incoherent_block_pairs(P: PairColoring, blocks) -> list[tuple[int, int]]:
    """Block pairs (ordered, disjoint blocks) whose cross colors are not all equal.

    One vectorized pass over every cross-block pair of the union.
    """
    if len(blocks) < 2:
        return []
    els = np.concatenate([np.asarray(b.elements, dtype=np.int64) for b in blocks])
    labels = np.repeat(np.arange(len(blocks)), [len(b) for b in blocks])
    idx = P.indices(els)
    i, j = _pair_indices(len(els))
    cross = labels[i] != labels[j]
    i, j = i[cross], j[cross]
    cols = P.values[pair_rank(idx[i], idx[j])]
    key = labels[i] * len(blocks) + labels[j]
    order = np.argsort(key, kind="stable")
    key, cols = key[order], cols[order]
    starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
    lo = np.minimum.reduceat(cols, starts)
    hi = np.maximum.reduceat(cols, starts)
    return [divmod(int(k), len(blocks)) for k in key[starts[lo != hi]]]


def _cross(P: PairColoring, lower: FinSet, upper: FinSet) -> np.ndarray:
    """Colors of all pairs ``(x, y)``, x in lower, y in upper, as a matrix."""
    xi = P.indices(lower.elements)[:, None]
    yi = P.indices(upper.elements)[None, :]
    return P.values[pair_rank(xi, yi)]


def _differing_pair(P, Fi, Fj):
    first = (Fi[0], Fj[0])
    c0 = P(*first)
    for x in Fi:
        for y in Fj:
            if P(x, y) != c0:
                return list(first), [x, y]
    raise AssertionError("no differing pair")


def _carve(X: FinSet, P: PairColoring, alpha: Ordinal, beta: Ordinal) -> Grouping:
    """Carve minimal alpha-large blocks left to right until the maxima are
    beta-large. After each block the pool keeps only elements that see one
    color from the whole block, and among those the biggest color class."""
    pool = np.asarray(X.elements, dtype=np.int64)
    blocks: list[FinSet] = []
    while not (blocks and is_alpha_large([b.max() for b in blocks], beta)):
        block = large_prefix(pool.tolist(), alpha)
        if block is None:
            raise GroupingShortfall(
                f"pool exhausted after {len(blocks)} blocks",
                partial=Grouping(tuple(blocks), alpha, beta),
            )
        blocks.append(block)
        rest = pool[len(block) :]
        if rest.size == 0:
            pool = rest
            continue
        mat = np.stack([P.row(x, rest) for x in block])
        uniform = (mat == mat[0]).all(axis=0)
        survivors = rest[uniform]
        vals = mat[0][uniform]
        if survivors.size == 0:
            pool = survivors
            continue
        best = int(np.argmax(np.bincount(vals, minlength=P.colors)))
        pool = survivors[vals == best]
    return Grouping(tuple(blocks), alpha, beta)


def build_grouping(X, P: PairColoring, n: int, k: int, level_gap: int = 6) -> Grouping:
    """An ``(w^n, w^k)``-grouping for ``P`` on ``X``.

    ``k = 0`` is a single minimal block and ``k = 1`` carves directly. For
    ``k >= 2`` an ``(w^(n + level_gap*(k-1)), w)``-grouping is built first and
    every group after the first is refined into an ``(w^n, w^(k-1))``-grouping;
    the first group and all refinements are concatenated.
    """
    X = _as_set(X)
    if P.colors > X.min():
        raise PreconditionError(f"coloring uses {P.colors} colors, more than min X = {X.min()}")
    _require_subset(X, P)
    alpha = Ordinal.omega_power(n)
    beta = Ordinal.omega_power(k)
    if k == 0:
        block = large_prefix(X, alpha)
        if block is None:
            raise GroupingShortfall(f"X is not {alpha}-large", partial=Grouping((), alpha, beta))
        g = Grouping((block,), alpha, beta)
    elif k == 1:
        g = _carve(X, P, alpha, beta)
    else:
        outer = build_grouping(X, P, n + level_gap * (k - 1), 1, level_gap)
        blocks = [outer.blocks[0]]
        for Yi in outer.blocks[1:]:
            try:
                blocks.extend(build_grouping(Yi, P, n, k - 1, level_gap).blocks)
            except GroupingShortfall as exc:
                if exc.partial is not None:
                    blocks.extend(exc.partial.blocks)
                raise GroupingShortfall(
                    f"refining a group failed: {exc}",
                    partial=Grouping(tuple(blocks), alpha, beta),
                ) from exc
        g = Grouping(tuple(blocks), alpha, beta)
    problems = verify_grouping(g, P)
    if any(v.condition == 3 for v in problems):
        raise GroupingShortfall("block maxima are not large enough", partial=g)
    if problems:
        raise VerificationFailed(f"grouping failed its own check: {problems}")
    return g


# --- EM witnesses ----------------------------------------------------------

BaseStrategy = Callable[[FinSet, PairColoring], FinSet]


def genuine_base(strict: bool = True) -> BaseStrategy:
    return lambda M, P: fallow_base_witness(M, P, strict=strict)


def paper_grouping_exponents(n: int) -> tuple[int, int]:
    """Block and max-set exponents used at level ``n >= 2``."""
    return 18 * (n - 2) + 4, 3


def em_witness(
    X,
    P: PairColoring,
    n: int,
    base: BaseStrategy | None = None,
    strict: bool = True,
    grouping_exponents: Callable[[int], tuple[int, int]] = paper_grouping_exponents,
) -> FinSet:
    """A ``w^n``-large ``H`` on which ``P`` is fallow.

    ``n = 1`` is :func:`fallow_base_witness`. For ``n >= 2``: build a
    grouping, let ``base`` pick a fallow subset of the block maxima, recurse
    into each selected block for a ``w^(n-1)``-large fallow ``Z_j`` and return
    ``{max Z_0} | Z_1 | ... | Z_l``.
    """
    X = _as_set(X)
    if n < 1:
        raise PreconditionError("em_witness needs n >= 1")
    if n == 1:
        return fallow_base_witness(X, P, strict=strict)
    if base is None:
        base = genuine_base(strict)

    bn, bk = grouping_exponents(n)
    g = build_grouping(X, P, bn, bk)
    S = _as_set(base(g.maxes, P))
    selected = [b for b in g.blocks if b.max() in S]
    if len(selected) != len(S):
        raise VerificationFailed("base strategy returned elements that are not block maxima")
    zs = [
        em_witness(b, P, n - 1, base=base, strict=strict, grouping_exponents=grouping_exponents)
        for b in selected
    ]
    if not zs:
        raise GroupingShortfall("base strategy selected no groups", partial=g)
    H = FinSet.of([zs[0].max()] + [x for z in zs[1:] for x in z])
    target = Ordinal.omega_power(n)
    fallow = is_fallow(P, H)
    if not fallow or not is_alpha_large(H, target):
        raise VerificationFailed(
            f"assembled H failed: fallow={fallow.ok} {fallow.triple}, "
            f"residue={residue(H, target)}"
        )
    return H


# --- records ---------------------------------------------------------------


def nominal_preconditions(op: str, X, n: int | None = None, c: int | None = None) -> dict:
    """Textbook hypotheses of each construction, evaluated where decidable
    (``None`` where the check itself exceeds resource caps)."""
    X = _as_set(X)
    out: dict = {}
    if not len(X):
        return out
    out["min_X_gt_3"] = X.min() > 3
    if op == "base":
        out["w^3-large"] = _maybe(lambda: is_alpha_large(X, Ordinal.omega_power(3)))
    elif op == "stabilize":
        out["w^3-sparse"] = _maybe(lambda: is_alpha_sparse(X, Ordinal.omega_power(3)))
        out[f"w^{n + 1}-large"] = _maybe(lambda: is_alpha_large(X, Ordinal.omega_power(n + 1)))
        if c is not None:
            out["4^(c^2) <= min X"] = 4 ** (c * c) <= X.min()
    elif op == "grouping":
        out["w^3-sparse"] = _maybe(lambda: is_alpha_sparse(X, Ordinal.omega_power(3)))
    elif op == "em":
        out[f"w^{18 * n}-large"] = _maybe(lambda: is_alpha_large(X, Ordinal.omega_power(18 * n)))
    return out

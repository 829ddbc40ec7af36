"""alpha-largeness, alpha-sparseness and the structural lemmas built on them.

A finite set ``X = {x_0 < ... < x_l-1}`` is alpha-large when stepping alpha
through its elements in order, ``alpha[x_0][x_1]...``, reaches 0.
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _backend
from .errors import InsufficientLargeness, PreconditionError, ResourceLimit
from .finset import FinSet, Interval
from .ordinal import (
    DEFAULT_CAP,
    UNBOUNDED,
    ZERO,
    Ordinal,
    as_ordinal,
    from_arrays,
    make_sum,
    step,
    to_arrays,
)

log = logging.getLogger(__name__)

DEFAULT_DIGIT_BUDGET = 100_000

_LOG2_10 = math.log2(10)


def _cap(cap):
    return DEFAULT_CAP if cap is None else cap


def fold(X, alpha: Ordinal, cap=None) -> tuple[int, Ordinal]:
    """Step ``alpha`` through ``X``.

    Returns ``(consumed, residue)``. ``consumed`` is the length of the
    shortest alpha-large prefix of ``X`` or -1 if there is none, and
    ``residue`` is what remains of alpha after all of ``X``.
    """
    alpha = as_ordinal(alpha)
    exps, coefs = to_arrays(alpha)
    cap = _cap(cap)
    if isinstance(X, Interval):
        k = _backend.for_values(X.end)
        consumed, re, rc = k.fold_range(exps, coefs, X.start, X.end, cap)
    else:
        els = X.elements if isinstance(X, FinSet) else tuple(X)
        k = _backend.for_values(els[-1] if els else 0)
        consumed, re, rc = k.fold(exps, coefs, els, cap)
    return consumed, from_arrays(re, rc)


def residue(X, alpha, cap=None) -> Ordinal:
    """``alpha[x_0]...[x_l-1]``; zero exactly when X is alpha-large."""
    return fold(X, alpha, cap)[1]


def is_alpha_large(X, alpha, cap=None) -> bool:
    return fold(X, alpha, cap)[0] >= 0


def is_alpha_sparse(X: FinSet, alpha, cap=None) -> bool:
    """``min X > 3`` and every gap ``[x, y)`` between neighbours is alpha-large.

    Neighbouring pairs suffice: a wider gap contains a narrower one.
    The empty set is sparse.
    """
    alpha = as_ordinal(alpha)
    els = tuple(X)
    if not els:
        return True
    if els[0] <= 3:
        return False
    return all(is_alpha_large(Interval(x, y), alpha, cap) for x, y in zip(els, els[1:]))


# --- least endpoints -------------------------------------------------------


def _budget_check(value: int, digit_budget: int) -> None:
    if value.bit_length() > digit_budget * _LOG2_10 + 1:
        raise ResourceLimit(f"endpoint exceeds {digit_budget} decimal digits")


def _pow2_guard(exponent: int, digit_budget: int) -> None:
    if exponent > digit_budget * _LOG2_10 + 64:
        raise ResourceLimit(f"2^{exponent} exceeds {digit_budget} decimal digits")


def omega_sq_endpoint(a: int, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> int:
    """``L(w^2, a) = 2^a (a + 2) - 2``."""
    _pow2_guard(a, digit_budget)
    v = (1 << a) * (a + 2) - 2
    _budget_check(v, digit_budget)
    return v


def least_large_endpoint(alpha, a: int, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> int:
    """The least ``N >= a - 1`` such that ``{a, ..., N}`` is alpha-large.

    Trailing terms are consumed first with closed forms for exponents below
    3; higher exponents fall back to stepping, which for ``w^3`` and above
    hits the digit budget almost immediately.
    """
    alpha = as_ordinal(alpha)
    if a <= 3:
        raise PreconditionError("least_large_endpoint needs a > 3")
    terms = list(alpha.terms)
    start = a  # next element to feed
    while terms:
        e, c = terms[-1]
        if e == 0:
            start += c
            terms.pop()
        elif e == 1:
            _pow2_guard(c, digit_budget)
            start = (1 << c) * (start + 1) - 1
            terms.pop()
        elif e == 2:
            for _ in range(c):
                start = omega_sq_endpoint(start, digit_budget) + 1
            terms.pop()
        else:
            if c == 1:
                terms.pop()
            else:
                terms[-1] = (e, c - 1)
            terms.append((e - 1, start))
            start += 1
        _budget_check(start, digit_budget)
    return start - 1


def endpoint_by_stepping(
    alpha, a: int, digit_budget: int = DEFAULT_DIGIT_BUDGET, collapse_finite: bool = True
) -> int:
    """Least endpoint by the bare recurrence ``L(alpha, a) = L(alpha[a], a+1)``.

    With ``collapse_finite`` a trailing finite term ``+k`` is consumed in one
    move (``k`` successor steps ignore their arguments), which is what makes
    ``w^2.2`` reachable; otherwise every element is stepped literally.
    """
    alpha = as_ordinal(alpha)
    x = a
    while not alpha.is_zero:
        if collapse_finite and alpha.terms[-1][0] == 0:
            x += alpha.terms[-1][1]
            alpha = Ordinal(alpha.terms[:-1])
        else:
            alpha = step(alpha, x, cap=UNBOUNDED)
            x += 1
        _budget_check(x, digit_budget)
    return x - 1


# --- lemma constructions ---------------------------------------------------


def decompose_large(X: FinSet, parts: Sequence, cap=None) -> list[FinSet]:
    """Split X into consecutive blocks, block i being alpha_i-large.

    ``parts`` lists the summands trailing-first, i.e. the sum is
    ``alpha_k-1 + ... + alpha_0`` and block 0 holds the smallest elements.
    Each block is the shortest large prefix of what remains; leftovers are
    appended to the last block.
    """
    parts = [as_ordinal(p) for p in parts]
    total = make_sum(reversed(parts))
    if not parts:
        return []
    els = tuple(X)
    if not is_alpha_large(els, total, cap):
        raise InsufficientLargeness(f"X is not {total}-large")
    blocks = []
    pos = 0
    for p in parts:
        consumed, _ = fold(els[pos:], p, cap)
        if consumed < 0:  # excluded by the lemma once X is sum-large
            raise InsufficientLargeness(f"remainder is not {p}-large")
        blocks.append(els[pos : pos + consumed])
        pos += consumed
    blocks[-1] = blocks[-1] + els[pos:]
    return [FinSet(b) for b in blocks]


@dataclass
class UnionSplitReport:
    side: int | None
    large: tuple[bool, bool]
    target: Ordinal
    preconditions: dict = field(default_factory=dict)
    lemma_falsified: bool = False

    @property
    def found(self) -> bool:
        return self.side is not None

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "large": list(self.large),
            "target": str(self.target),
            "preconditions": self.preconditions,
            "lemma_falsified": self.lemma_falsified,
        }


def _try(fn):
    try:
        return fn()
    except ResourceLimit:
        return None


def union_split(Y0: FinSet, Y1: FinSet, n: int, k: int, cap=None) -> UnionSplitReport:
    """Report which of ``Y0``, ``Y1`` is ``w^n.k``-large (side 0 on ties).

    The hypotheses (union ``w^n.4k``-large and ``w^3``-sparse) are evaluated
    and recorded, not enforced; ``None`` marks a hypothesis too big to decide.
    """
    target = Ordinal.omega_power(n, k)
    verdicts = (is_alpha_large(Y0, target, cap), is_alpha_large(Y1, target, cap))
    union = FinSet(Y0).union(FinSet(Y1))
    pre = {
        "union_large": _try(lambda: is_alpha_large(union, Ordinal.omega_power(n, 4 * k), cap)),
        "union_sparse": _try(lambda: is_alpha_sparse(union, Ordinal.omega_power(3), cap)),
    }
    side = 0 if verdicts[0] else 1 if verdicts[1] else None
    falsified = side is None and pre["union_large"] is True and pre["union_sparse"] is True
    if falsified:
        log.error("union_split: neither side large under satisfied hypotheses: %s, %s", Y0, Y1)
    return UnionSplitReport(side, verdicts, target, pre, falsified)


def sparsify(X: FinSet, n: int, m: int, cap=None) -> FinSet:
    """Greedily thin X to a ``w^m``-sparse set, stopping once it is ``w^n``-large.

    Keeps ``min X`` and then each next element whose gap from the last kept
    one is ``w^m``-large.
    """
    els = tuple(X)
    if not els or els[0] <= 3:
        raise PreconditionError("sparsify needs min X > 3")
    gap = Ordinal.omega_power(m)
    goal = Ordinal.omega_power(n)
    kept = [els[0]]
    while not is_alpha_large(kept, goal, cap):
        last = kept[-1]
        # [last, y) is large iff y - last >= (length of the shortest large
        # prefix of [last, max X]); find that length once per gap.
        consumed, _ = fold(Interval(last, els[-1] + 1), gap, cap)
        if consumed < 0:
            raise InsufficientLargeness(f"greedy kept set {kept} is not {goal}-large")
        i = bisect.bisect_left(els, last + max(consumed, 1))
        if i == len(els):
            raise InsufficientLargeness(f"greedy kept set {kept} is not {goal}-large")
        kept.append(els[i])
    return FinSet(tuple(kept))


def large_prefix(X: Iterable[int], alpha, cap=None) -> FinSet | None:
    """Shortest alpha-large prefix of X, or None."""
    els = tuple(X)
    consumed, _ = fold(els, alpha, cap)
    return None if consumed < 0 else FinSet(els[:consumed])


__all__ = [
    "ZERO",
    "UnionSplitReport",
    "decompose_large",
    "endpoint_by_stepping",
    "fold",
    "is_alpha_large",
    "is_alpha_sparse",
    "large_prefix",
    "least_large_endpoint",
    "omega_sq_endpoint",
    "residue",
    "sparsify",
    "union_split",
]

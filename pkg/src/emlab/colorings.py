"""Colorings of pairs: storage, fallow/transitive predicates and derived colorings.

A :class:`PairColoring` stores one color per pair of ground elements in a
packed triangular array; the pair of ground *indices* ``i < j`` sits at
``j*(j-1)//2 + i``. Colors are ``0 .. colors-1``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np

from . import _backend
from .errors import ColorOutOfRange, GroundMismatch, NotSubset
from .finset import FinSet, finset_from_json


def pair_rank(i, j):
    return j * (j - 1) // 2 + i


def _pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays (i, j) for every packed slot, in slot order."""
    j = np.repeat(np.arange(n, dtype=np.int64), np.arange(n, dtype=np.int64))
    i = np.arange(len(j), dtype=np.int64) - (j * (j - 1)) // 2
    return i, j


class PairColoring:
    """A total coloring of ``[ground]^2`` with ``colors`` colors."""

    __slots__ = ("ground", "colors", "values", "_pos", "_arr")

    def __init__(self, ground, colors: int, values):
        self.ground = ground if isinstance(ground, FinSet) else FinSet(tuple(ground))
        if colors < 1:
            raise ValueError("a coloring needs at least one color")
        self.colors = int(colors)
        n = len(self.ground)
        vals = np.ascontiguousarray(values, dtype=np.int32)
        if vals.shape != (n * (n - 1) // 2,):
            raise ValueError(f"expected {n * (n - 1) // 2} packed values, got {vals.shape}")
        if vals.size and (vals.min() < 0 or vals.max() >= self.colors):
            raise ColorOutOfRange(f"values must lie in [0, {self.colors})")
        vals.setflags(write=False)
        self.values = vals
        self._pos = None
        self._arr = None

    # -- construction ------------------------------------------------------

    @classmethod
    def constant(cls, ground, colors: int, value: int = 0) -> PairColoring:
        ground = ground if isinstance(ground, FinSet) else FinSet(tuple(ground))
        n = len(ground)
        return cls(ground, colors, np.full(n * (n - 1) // 2, value, dtype=np.int32))

    @classmethod
    def from_function(cls, ground, colors: int, fn: Callable[[int, int], int]) -> PairColoring:
        ground = ground if isinstance(ground, FinSet) else FinSet(tuple(ground))
        els = ground.elements
        vals = [fn(els[i], els[j]) for j in range(len(els)) for i in range(j)]
        return cls(ground, colors, vals)

    @classmethod
    def from_vectorized(cls, ground, colors: int, fn) -> PairColoring:
        """``fn(xs, ys)`` receives numpy arrays of the smaller/larger elements."""
        ground = ground if isinstance(ground, FinSet) else FinSet(tuple(ground))
        els = np.asarray(ground.elements, dtype=np.int64)
        i, j = _pair_indices(len(els))
        return cls(ground, colors, np.asarray(fn(els[i], els[j])))

    @classmethod
    def random(cls, ground, colors: int, rng: np.random.Generator) -> PairColoring:
        ground = ground if isinstance(ground, FinSet) else FinSet(tuple(ground))
        n = len(ground)
        return cls(ground, colors, rng.integers(0, colors, n * (n - 1) // 2, dtype=np.int32))

    @classmethod
    def from_rank(cls, ground, colors: int, rank: int) -> PairColoring:
        """Coloring number ``rank`` in mixed-radix order (slot 0 least significant)."""
        ground = ground if isinstance(ground, FinSet) else FinSet(tuple(ground))
        n = len(ground)
        vals = []
        for _ in range(n * (n - 1) // 2):
            rank, d = divmod(rank, colors)
            vals.append(d)
        return cls(ground, colors, vals)

    def rank(self) -> int:
        r = 0
        for v in reversed(self.values.tolist()):
            r = r * self.colors + v
        return r

    # -- access ------------------------------------------------------------

    def index(self, x: int) -> int:
        if self._pos is None:
            self._pos = {v: i for i, v in enumerate(self.ground.elements)}
        try:
            return self._pos[x]
        except KeyError:
            raise NotSubset(f"{x} is not in the ground set") from None

    def indices(self, xs) -> np.ndarray:
        """Ground positions of many elements at once."""
        if self._arr is None:
            self._arr = np.asarray(self.ground.elements, dtype=np.int64)
        xs = np.asarray(xs, dtype=np.int64)
        pos = np.searchsorted(self._arr, xs)
        if xs.size and (pos.max() >= self._arr.size or not np.array_equal(self._arr[pos], xs)):
            raise NotSubset("some elements are not in the ground set")
        return pos

    def __call__(self, x: int, y: int) -> int:
        if x == y:
            raise ValueError("a pair needs two distinct elements")
        if x > y:
            x, y = y, x
        return int(self.values[pair_rank(self.index(x), self.index(y))])

    color = __call__

    def pairs(self) -> Iterator[tuple[int, int, int]]:
        els = self.ground.elements
        for j in range(len(els)):
            for i in range(j):
                yield els[i], els[j], int(self.values[pair_rank(i, j)])

    def restrict(self, S) -> PairColoring:
        S = S if isinstance(S, FinSet) else FinSet(tuple(S))
        idx = self.indices(S.elements)
        i, j = _pair_indices(len(idx))
        return PairColoring(S, self.colors, self.values[pair_rank(idx[i], idx[j])])

    def row(self, x: int, ys: Sequence[int]) -> np.ndarray:
        """Colors ``c(x, y)`` for each ``y`` in ``ys`` (either side of x)."""
        xi = self.index(x)
        yi = self.indices(ys)
        lo = np.minimum(xi, yi)
        hi = np.maximum(xi, yi)
        return self.values[pair_rank(lo, hi)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairColoring):
            return NotImplemented
        return (
            self.ground == other.ground
            and self.colors == other.colors
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self) -> str:
        return f"PairColoring(ground={self.ground!r}, colors={self.colors})"

    # -- wire form ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "ground": list(self.ground.elements),
            "colors": self.colors,
            "pairs": [[x, y, c] for x, y, c in self.pairs()],
        }

    @classmethod
    def from_json(cls, obj) -> PairColoring:
        if isinstance(obj, str):
            obj = json.loads(obj)
        ground = finset_from_json(obj["ground"])
        colors = int(obj["colors"])
        n = len(ground)
        pos = {v: i for i, v in enumerate(ground.elements)}
        vals = [-1] * (n * (n - 1) // 2)
        for x, y, c in obj["pairs"]:
            if x >= y or x not in pos or y not in pos:
                raise ValueError(f"bad pair [{x}, {y}]")
            r = pair_rank(pos[x], pos[y])
            if vals[r] != -1:
                raise ValueError(f"pair [{x}, {y}] listed twice")
            vals[r] = c
        if -1 in vals:
            raise ValueError("coloring is not total on the ground set")
        return cls(ground, colors, vals)


class TripleCheck(NamedTuple):
    """Verdict of a triple-wise predicate plus the least violating triple."""

    ok: bool
    triple: tuple[int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _subset(c: PairColoring, S) -> PairColoring:
    if S is None:
        return c
    S = S if isinstance(S, FinSet) else FinSet(tuple(S))
    if not S.issubset(c.ground):
        raise NotSubset("S is not contained in the ground set")
    return c.restrict(S)


def _check(c: PairColoring, S, which: str) -> TripleCheck:
    sub = _subset(c, S)
    n = len(sub.ground)
    fn = getattr(_backend.kernels, which)
    hit = fn(sub.values, n)
    if hit is None:
        return TripleCheck(True)
    els = sub.ground.elements
    return TripleCheck(False, tuple(els[t] for t in hit))


def is_fallow(c: PairColoring, S=None) -> TripleCheck:
    """``c(x, z)`` is one of ``c(x, y)``, ``c(y, z)`` for all ``x < y < z`` in S."""
    return _check(c, S, "fallow_violation")


def is_transitive(c: PairColoring, S=None) -> TripleCheck:
    """``c(x, y) = c(y, z)`` forces ``c(x, z)`` to the same color."""
    return _check(c, S, "transitive_violation")


def encode_family(family: Sequence[PairColoring]) -> PairColoring:
    """Pack 2-colorings ``c_0 .. c_a`` into one coloring whose bit i is ``c_i``."""
    if not family:
        raise ValueError("empty family")
    ground = family[0].ground
    for member in family:
        if member.ground != ground:
            raise GroundMismatch("family members must share a ground set")
        if member.colors != 2:
            raise GroundMismatch("family members must be 2-colorings")
    acc = np.zeros_like(family[0].values)
    for i, member in enumerate(family):
        acc |= member.values << i
    return PairColoring(ground, 2 ** len(family), acc)


def indicator(c: PairColoring, i: int) -> PairColoring:
    """The 2-coloring that is 1 exactly where ``c`` is ``i``."""
    if not 0 <= i < c.colors:
        raise ColorOutOfRange(f"color {i} outside [0, {c.colors})")
    return PairColoring(c.ground, 2, (c.values == i).astype(np.int32))


def bit(c: PairColoring, i: int) -> PairColoring:
    """Bit ``i`` of every color, as a 2-coloring (inverse of :func:`encode_family`)."""
    return PairColoring(c.ground, 2, (c.values >> i) & 1)


# --- stability -------------------------------------------------------------


@dataclass(frozen=True)
class StabilityEntry:
    x: int
    limit_color: int | None
    witness: int | None
    stable: bool


@dataclass(frozen=True)
class StabilityProfile:
    horizon: int
    entries: tuple[StabilityEntry, ...]

    def __getitem__(self, x: int) -> StabilityEntry:
        for e in self.entries:
            if e.x == x:
                return e
        raise KeyError(x)

    def to_json(self) -> dict:
        return {
            "horizon": self.horizon,
            "entries": [
                {"x": e.x, "limit_color": e.limit_color, "witness": e.witness, "stable": e.stable}
                for e in self.entries
            ],
        }


def stability_profile(c: PairColoring, horizon: int) -> StabilityProfile:
    """Finite-horizon shadow of stability.

    For each ``x`` the witness is the least ground element ``m > x`` with
    ``c(x, n)`` constant for ground ``n`` in ``[m, horizon]``. A tail of a
    single point is always constant and proves nothing, so ``x`` counts as
    stable only when its constant tail holds at least two points or covers
    the whole row.
    """
    if horizon > c.ground.max():
        raise ValueError("horizon exceeds the ground set")
    els = c.ground.elements
    tail_end = max(i for i, v in enumerate(els) if v <= horizon)
    entries = []
    for xi, x in enumerate(els):
        if xi >= tail_end:
            entries.append(StabilityEntry(x, None, None, False))
            continue
        last = int(c.values[pair_rank(xi, tail_end)])
        m = tail_end
        while m - 1 > xi and int(c.values[pair_rank(xi, m - 1)]) == last:
            m -= 1
        if m < tail_end or m == xi + 1:
            entries.append(StabilityEntry(x, last, els[m], True))
        else:
            entries.append(StabilityEntry(x, None, None, False))
    return StabilityProfile(horizon, tuple(entries))


# --- triple coloring ------------------------------------------------------


def triple_coloring(c: PairColoring) -> dict[tuple[int, int, int], int]:
    """``c'(x, y, z) = 1`` iff ``c`` is transitive on ``{x, y, z}``, i.e.
    ``c(x,y) != c(y,z)`` or all three pairs share a color."""
    out = {}
    for x, y, z in itertools.combinations(c.ground.elements, 3):
        a, b, d = c(x, y), c(y, z), c(x, z)
        out[(x, y, z)] = 1 if a != b or a == b == d else 0
    return out


def zero_homogeneous_quadruples(c: PairColoring) -> list[tuple[int, int, int, int]]:
    """4-sets all of whose triples get triple-color 0."""
    t = triple_coloring(c)
    return [
        q
        for q in itertools.combinations(c.ground.elements, 4)
        if all(t[tr] == 0 for tr in itertools.combinations(q, 3))
    ]

"""Finite-horizon window minima, the argmax coloring and the r_a trajectory.

For a table ``h(x, z)`` (``x < u``, ``z < horizon``) the window minimum is
``q_{a,b}(x) = min_{a <= z < b} h(x, z)`` and ``f(a, b)`` is the largest
``x`` maximizing it. Whether ``f`` is fallow is measured, not assumed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend
from .colorings import PairColoring
from .errors import BoxTooSmall, ColorOutOfRange, WindowOutOfRange
from .finset import FinSet

DEFAULT_VALUE_CAP = 2**16


@dataclass(frozen=True)
class ValueTable:
    u: int
    horizon: int
    rows: tuple[tuple[int, ...], ...]
    cap: int = DEFAULT_VALUE_CAP

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.u < 1:
            raise ValueError("a value table needs u >= 1")
        if len(rows) != self.u or any(len(r) != self.horizon for r in rows):
            raise ValueError(f"expected {self.u} rows of length {self.horizon}")
        if any(v < 0 or v > self.cap for r in rows for v in r):
            raise ColorOutOfRange(f"values must lie in [0, {self.cap}]")

    def __call__(self, x: int, z: int) -> int:
        return self.rows[x][z]

    @classmethod
    def from_function(cls, u: int, horizon: int, fn, cap: int = DEFAULT_VALUE_CAP) -> ValueTable:
        return cls(u, horizon, tuple(tuple(fn(x, z) for z in range(horizon)) for x in range(u)), cap)

    @classmethod
    def random(cls, u: int, horizon: int, rng: np.random.Generator, vmax: int = 3) -> ValueTable:
        return cls(u, horizon, rng.integers(0, vmax + 1, (u, horizon)).tolist())

    @classmethod
    def from_rank(cls, u: int, horizon: int, vcap: int, rank: int) -> ValueTable:
        """Table number ``rank`` with entry ``(x, z)`` at base-(vcap+1) digit ``z*u + x``."""
        rows = [[0] * horizon for _ in range(u)]
        for z in range(horizon):
            for x in range(u):
                rank, rows[x][z] = divmod(rank, vcap + 1)
        return cls(u, horizon, rows)

    def to_json(self) -> dict:
        return {"u": self.u, "horizon": self.horizon, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, obj) -> ValueTable:
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["u"]), int(obj["horizon"]), obj["rows"], int(obj.get("cap", DEFAULT_VALUE_CAP)))


def qmin(h: ValueTable, a: int, b: int) -> list[int]:
    """``q_{a,b}(x)`` for every row ``x``."""
    if not 0 <= a < b <= h.horizon:
        raise WindowOutOfRange(f"window [{a}, {b}) outside [0, {h.horizon}]")
    return [min(r[a:b]) for r in h.rows]


def argmax_coloring(h: ValueTable) -> PairColoring:
    """``f(a, b)`` on ground ``[0, horizon)``, ties to the largest row."""
    kern = _backend.for_values(h.cap)
    packed = kern.argmax_packed([list(r) for r in h.rows], h.horizon)
    return PairColoring(FinSet(tuple(range(h.horizon))), h.u, packed)


def _full_matrix(f: PairColoring) -> np.ndarray:
    n = len(f.ground)
    F = np.zeros((n, n), dtype=np.int32)
    iu = np.triu_indices(n, 1)
    F[iu] = f.values[iu[1] * (iu[1] - 1) // 2 + iu[0]]
    return F + F.T


def fallow_scan(h: ValueTable) -> list[tuple[int, int, int]]:
    """Every triple ``a < b < c`` with ``f(a, c)`` outside ``{f(a, b), f(b, c)}``."""
    F = _full_matrix(argmax_coloring(h))
    n = h.horizon
    out = []
    for b in range(1, n - 1):
        ab = F[:b, b][:, None]  # f(a, b)
        bc = F[b, b + 1 :][None, :]  # f(b, c)
        ac = F[:b, b + 1 :]  # f(a, c)
        bad = (ac != ab) & (ac != bc)
        for a, c in zip(*np.nonzero(bad)):
            out.append((int(a), b, int(c) + b + 1))
    out.sort()
    return out


@dataclass(frozen=True)
class StabilityResult:
    a: int
    horizon: int
    stable: bool
    witness: int
    limit: int

    def to_json(self) -> dict:
        return {"a": self.a, "horizon": self.horizon, "stable": self.stable,
                "witness": self.witness, "limit": self.limit}


def stability_scan(h: ValueTable, a: int) -> StabilityResult:
    """Least ``D`` with ``f(a, b)`` constant for ``b`` in ``[D, horizon)``.

    ``stable`` when that constant tail has at least two points or covers the
    whole row; a lone last value proves nothing about a limit.
    """
    if not 0 <= a < h.horizon - 1:
        raise WindowOutOfRange(f"need a < horizon - 1, got a={a}")
    f = argmax_coloring(h)
    row = [f(a, b) for b in range(a + 1, h.horizon)]
    D = h.horizon - 1
    while D - 1 > a and row[D - 1 - (a + 1)] == row[-1]:
        D -= 1
    stable = D < h.horizon - 1 or D == a + 1
    return StabilityResult(a, h.horizon, stable, D, row[-1])


def exhaustive_sweep(u: int, vcap: int, horizon: int) -> dict:
    """Fallowness of ``f`` over every ``u x horizon`` table with entries in
    ``[0, vcap]``: counts plus the first violating table, if any."""
    kern = _backend.kernels
    tables, violating, first = kern.sweep_fallow(u, vcap, horizon)
    return {
        "u": u,
        "vcap": vcap,
        "horizon": horizon,
        "tables": tables,
        "violating": violating,
        "first_violating": None if first < 0 else ValueTable.from_rank(u, horizon, vcap, first).to_json(),
    }


def candidate_table() -> ValueTable:
    """The three-row table whose argmax coloring breaks fallowness on {0,1,2}:
    ``q_{0,2} = (0, 2, 0)`` puts ``f(0,2) = 1`` between ``f(0,1) = 0`` and
    ``f(1,2) = 2``."""
    return ValueTable(3, 3, ((3, 0, 0), (2, 2, 0), (0, 3, 0)))


# --- theta tables ----------------------------------------------------------


@dataclass(frozen=True)
class ThetaTable:
    """Boolean ``theta(a, b, y, z)`` over the box ``[0,A) x [0,B) x [0,Y) x [0,Z)``."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=bool)
        if arr.ndim != 4:
            raise ValueError("theta table must be four-dimensional")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def bounds(self) -> tuple[int, int, int, int]:
        return tuple(int(s) for s in self.data.shape)

    @classmethod
    def constant(cls, bounds: Sequence[int], value: bool) -> ThetaTable:
        return cls(np.full(tuple(bounds), bool(value)))

    @classmethod
    def from_function(cls, bounds: Sequence[int], fn) -> ThetaTable:
        A, B, Y, Z = bounds
        arr = np.zeros((A, B, Y, Z), dtype=bool)
        for idx in np.ndindex(A, B, Y, Z):
            arr[idx] = bool(fn(*idx))
        return cls(arr)

    def to_json(self) -> dict:
        return {"bounds": list(self.bounds), "data": self.data.astype(int).ravel().tolist()}

    @classmethod
    def from_json(cls, obj) -> ThetaTable:
        if isinstance(obj, str):
            obj = json.loads(obj)
        bounds = tuple(int(v) for v in obj["bounds"])
        data = np.asarray(obj["data"], dtype=bool)
        if data.size != int(np.prod(bounds)):
            raise ValueError(f"theta data has {data.size} entries, box needs {int(np.prod(bounds))}")
        return cls(data.reshape(bounds))


@dataclass(frozen=True)
class RTrajectory:
    a: int
    zmax: int
    r: tuple[int, ...]  # r_a(z) for z = 0..zmax
    q: tuple[tuple[int, ...], ...]  # q_a(b, z) for b = 0..zmax, z = 0..zmax+1

    def to_json(self) -> dict:
        return {"a": self.a, "zmax": self.zmax, "r": list(self.r), "q": [list(row) for row in self.q]}


def r_trajectory(theta: ThetaTable, a: int) -> RTrajectory:
    """Evaluate ``q_a(b, z)`` and ``r_a(z)`` wherever the box allows.

    ``q_a(b, z)`` is the least ``y <= z`` such that every ``b' <= b`` has some
    ``y' <= y`` with ``theta(a, b', y', z')`` false for all ``z' <= z``, and
    ``z`` when there is none. ``r_a(z)`` is the least ``b <= z`` with
    ``q_a(b, z) < q_a(b, z+1)``, else ``z``. Computing ``r_a(z)`` reads
    ``b <= z``, ``y <= z+1`` and ``z' <= z+1``, so ``z`` runs up to
    ``min(B-1, Y-2, Z-2)``.
    """
    A, B, Y, Z = theta.bounds
    if not 0 <= a < A:
        raise BoxTooSmall(f"a={a} outside [0, {A})")
    zmax = min(B - 1, Y - 2, Z - 2)
    if zmax < 0:
        raise BoxTooSmall(f"box {theta.bounds} too small for any z")
    T = theta.data[a, : zmax + 1, : zmax + 2, : zmax + 2]
    clear = np.logical_and.accumulate(~T, axis=2)  # all z' <= z false
    some_y = np.logical_or.accumulate(clear, axis=1)  # some y' <= y
    every_b = np.logical_and.accumulate(some_y, axis=0)  # every b' <= b
    q = np.empty((zmax + 1, zmax + 2), dtype=np.int64)
    for z in range(zmax + 2):
        ok = every_b[:, : z + 1, z]
        q[:, z] = np.where(ok.any(axis=1), ok.argmax(axis=1), z)
    r = []
    for z in range(zmax + 1):
        up = np.nonzero(q[: z + 1, z] < q[: z + 1, z + 1])[0]
        r.append(int(up[0]) if up.size else z)
    return RTrajectory(a, zmax, tuple(r), tuple(tuple(int(v) for v in row) for row in q))

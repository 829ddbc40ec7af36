"""Finite sets of naturals as strictly increasing tuples, plus lazy intervals."""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True)
class FinSet:
    elements: tuple[int, ...] = ()

    def __post_init__(self):
        els = self.elements
        if not isinstance(els, tuple):
            object.__setattr__(self, "elements", els := tuple(els))
        for i, x in enumerate(els):
            if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                raise ValueError(f"elements must be naturals, got {x!r}")
            if i and els[i - 1] >= x:
                raise ValueError("elements must be strictly increasing")

    @classmethod
    def of(cls, items: Iterable[int]) -> FinSet:
        """Build from any iterable, sorting and de-duplicating."""
        return cls(tuple(sorted(set(items))))

    @classmethod
    def range(cls, lo: int, hi: int) -> FinSet:
        """``{lo, ..., hi}`` inclusive, matching the JSON interval shorthand."""
        return cls(tuple(range(lo, hi + 1)))

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        i = bisect.bisect_left(self.elements, x)
        return i < len(self.elements) and self.elements[i] == x

    def __getitem__(self, i):
        if isinstance(i, slice):
            return FinSet(self.elements[i])
        return self.elements[i]

    def __repr__(self) -> str:
        els = self.elements
        if len(els) > 8 and els[-1] - els[0] == len(els) - 1:
            return f"FinSet({{{els[0]}..{els[-1]}}})"
        return "FinSet({" + ", ".join(map(str, els)) + "})"

    def min(self) -> int:
        if not self.elements:
            raise ValueError("minimum of the empty set")
        return self.elements[0]

    def max(self) -> int:
        if not self.elements:
            raise ValueError("maximum of the empty set")
        return self.elements[-1]

    def issubset(self, other: FinSet) -> bool:
        return all(x in other for x in self.elements)

    def union(self, other: FinSet) -> FinSet:
        return FinSet.of(self.elements + tuple(other))

    def without_min(self) -> FinSet:
        return FinSet(self.elements[1:])

    def to_json(self) -> list[int]:
        return list(self.elements)


@dataclass(frozen=True)
class Interval:
    """The half-open interval ``[start, end)`` without materializing it."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"bad interval [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.start, self.end))

    def min(self) -> int:
        if self.end == self.start:
            raise ValueError("minimum of the empty set")
        return self.start

    def materialize(self) -> FinSet:
        return FinSet(tuple(range(self.start, self.end)))


def finset_from_json(obj) -> FinSet:
    """Accept ``[x, ...]`` or ``{"from": a, "to": b}`` (inclusive), or a JSON string of either."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, dict):
        try:
            return FinSet.range(int(obj["from"]), int(obj["to"]))
        except KeyError as exc:
            raise ValueError(f"interval shorthand needs 'from' and 'to': {obj}") from exc
    if isinstance(obj, list):
        return FinSet(tuple(obj))
    raise ValueError(f"not a set: {obj!r}")

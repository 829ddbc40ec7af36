"""Cantor normal form notation for ordinals below omega^omega.

An ordinal is stored as a tuple of ``(exponent, coefficient)`` pairs with
strictly decreasing exponents and positive coefficients; zero is the empty
tuple. The text form uses ``w`` for omega and ``.`` for the coefficient::

    0        zero
    7        finite
    w        omega
    w.2+5    omega*2 + 5
    w^3.4+w  omega^3*4 + omega
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CanonicalityError, NotCNFOrder, ParseError, ResourceLimit

DEFAULT_CAP = 10**6

#: Pass as ``cap`` to disable the coefficient bound (arbitrary precision).
UNBOUNDED = math.inf

Term = tuple[int, int]


@dataclass(frozen=True)
class Ordinal:
    terms: tuple[Term, ...] = ()

    def __post_init__(self):
        prev = None
        for e, c in self.terms:
            if e < 0 or c < 1:
                raise CanonicalityError(f"bad term ({e}, {c})")
            if prev is not None and e >= prev:
                raise CanonicalityError(f"exponents not strictly decreasing: {self.terms}")
            prev = e

    @classmethod
    def finite(cls, k: int) -> Ordinal:
        if k < 0:
            raise ValueError("negative ordinal")
        return cls(((0, k),)) if k else ZERO

    @classmethod
    def omega_power(cls, n: int, k: int = 1) -> Ordinal:
        """``w^n . k``."""
        return cls(((n, k),)) if k else ZERO

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    @property
    def degree(self) -> int:
        """Leading exponent (0 for finite ordinals)."""
        return self.terms[0][0] if self.terms else 0

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)!r})"

    def __lt__(self, other: Ordinal) -> bool:
        return compare(self, other) < 0

    def __le__(self, other: Ordinal) -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other: Ordinal) -> bool:
        return compare(self, other) > 0

    def __ge__(self, other: Ordinal) -> bool:
        return compare(self, other) >= 0

    def __add__(self, other: Ordinal) -> Ordinal:
        return make_sum([self, other])


ZERO = Ordinal()
ONE = Ordinal(((0, 1),))
OMEGA = Ordinal(((1, 1),))


def _check_cap(value: int, cap) -> None:
    if value > (DEFAULT_CAP if cap is None else cap):
        raise ResourceLimit(f"value {value} exceeds the configured cap")


_TERM = re.compile(r"^(?:w(?:\^(\d+))?(?:\.(\d+))?|(\d+))$")


def parse_ordinal(text: str, cap=None) -> Ordinal:
    """Parse the ASCII grammar ``term ('+' term)*``.

    Zero-coefficient terms are dropped, adjacent equal exponents are merged,
    and an increasing exponent (``1+w``) raises :class:`CanonicalityError`.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    compact = "".join(text.split())
    if not compact:
        raise ParseError("empty ordinal expression")
    terms: list[Term] = []
    for piece in compact.split("+"):
        m = _TERM.match(piece)
        if not m:
            raise ParseError(f"malformed term {piece!r} in {text!r}")
        exp_s, coef_s, nat_s = m.groups()
        if nat_s is not None:
            e, c = 0, int(nat_s)
        else:
            e = 1 if exp_s is None else int(exp_s)
            c = 1 if coef_s is None else int(coef_s)
        _check_cap(e, cap)
        _check_cap(c, cap)
        if c == 0:
            continue
        if terms and e > terms[-1][0]:
            raise CanonicalityError(f"{text!r}: exponent {e} follows a smaller exponent")
        if terms and e == terms[-1][0]:
            merged = terms[-1][1] + c
            _check_cap(merged, cap)
            terms[-1] = (e, merged)
        else:
            terms.append((e, c))
    return Ordinal(tuple(terms))


def format_ordinal(alpha: Ordinal) -> str:
    if not alpha.terms:
        return "0"
    out = []
    for e, c in alpha.terms:
        if e == 0:
            out.append(str(c))
            continue
        s = "w" if e == 1 else f"w^{e}"
        out.append(s if c == 1 else f"{s}.{c}")
    return "+".join(out)


def as_ordinal(value) -> Ordinal:
    """Coerce an Ordinal, grammar string or natural into an Ordinal."""
    if isinstance(value, Ordinal):
        return value
    if isinstance(value, str):
        return parse_ordinal(value)
    if isinstance(value, int) and value >= 0:
        return Ordinal.finite(value)
    raise TypeError(f"cannot interpret {value!r} as an ordinal")


def step(alpha: Ordinal, m: int, cap=None) -> Ordinal:
    """The fundamental-sequence step ``alpha[m]``.

    ``0[m] = 0``, ``(b+1)[m] = b`` and ``(b + w^n)[m] = b + w^(n-1).m``.
    """
    if not alpha.terms:
        return alpha
    *head, (e, c) = alpha.terms
    if c > 1:
        head.append((e, c - 1))
    if e > 0 and m > 0:
        _check_cap(m, cap)
        head.append((e - 1, m))
    return Ordinal(tuple(head))


def compare(alpha: Ordinal, beta: Ordinal) -> int:
    """-1, 0 or 1 as alpha is less than, equal to or greater than beta."""
    a, b = alpha.terms, beta.terms
    return (a > b) - (a < b)


def make_sum(parts: Iterable[Ordinal]) -> Ordinal:
    """Sum ordinals written in CNF order, merging equal exponents.

    Raises :class:`NotCNFOrder` if a part's leading exponent exceeds the
    trailing exponent of what precedes it (which would absorb it).
    """
    terms: list[Term] = []
    for part in parts:
        for e, c in part.terms:
            if terms and e > terms[-1][0]:
                raise NotCNFOrder(f"exponent {e} after exponent {terms[-1][0]}")
            if terms and e == terms[-1][0]:
                terms[-1] = (e, terms[-1][1] + c)
            else:
                terms.append((e, c))
    return Ordinal(tuple(terms))


def to_arrays(alpha: Ordinal) -> tuple[Sequence[int], Sequence[int]]:
    """Split into parallel exponent and coefficient lists (kernel input)."""
    return [e for e, _ in alpha.terms], [c for _, c in alpha.terms]


def from_arrays(exps: Sequence[int], coefs: Sequence[int]) -> Ordinal:
    return Ordinal(tuple((int(e), int(c)) for e, c in zip(exps, coefs)))

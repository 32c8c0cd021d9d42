"""Degree lattice N^k and its extension by per-coordinate 'unbounded'.

Degrees are immutable coordinate vectors.  meet/join distribute over
addition and (guarded) subtraction; subtraction that would leave N^k is a
hard error, never a silent clamp.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DegreeOutOfRangeError


@dataclass(frozen=True, order=False)
class Degree:
    coords: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.coords, tuple):
            object.__setattr__(self, "coords", tuple(self.coords))
        if any((not isinstance(c, int)) or c < 0 for c in self.coords):
            raise DegreeOutOfRangeError(f"degree coordinates must be non-negative ints: {self.coords}")

    @staticmethod
    def of(*coords: int) -> "Degree":
        return Degree(tuple(coords))

    @staticmethod
    def zero(rank: int) -> "Degree":
        return Degree((0,) * rank)

    @staticmethod
    def ones(rank: int, scale: int = 1) -> "Degree":
        return Degree((scale,) * rank)

    @staticmethod
    def basis(rank: int, color: int) -> "Degree":
        # colors are 1-based throughout
        if not 1 <= color <= rank:
            raise DegreeOutOfRangeError(f"color {color} outside 1..{rank}")
        return Degree(tuple(1 if c == color else 0 for c in range(1, rank + 1)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def get(self, color: int) -> int:
        return self.coords[color - 1]

    def total(self) -> int:
        return sum(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        return Degree(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        out = tuple(a - b for a, b in zip(self.coords, other.coords))
        if any(c < 0 for c in out):
            raise DegreeOutOfRangeError(f"degree subtraction underflow: {self.coords} - {other.coords}")
        return Degree(out)

    def meet(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        return Degree(tuple(min(a, b) for a, b in zip(self.coords, other.coords)))

    def join(self, other: "Degree") -> "Degree":
        self._check_rank(other)
        return Degree(tuple(max(a, b) for a, b in zip(self.coords, other.coords)))

    def __le__(self, other: "Degree") -> bool:
        self._check_rank(other)
        return all(a <= b for a, b in zip(self.coords, other.coords))

    def __ge__(self, other: "Degree") -> bool:
        return other.__le__(self)

    def _check_rank(self, other: "Degree") -> None:
        if self.rank != other.rank:
            raise DegreeOutOfRangeError(f"rank mismatch: {self.coords} vs {other.coords}")

    def __repr__(self) -> str:
        return f"Degree{self.coords}"


def box(limit: Degree) -> Iterable[Degree]:
    """All degrees m with 0 <= m <= limit, in lexicographic order."""
    def rec(prefix, i):
        if i == limit.rank:
            yield Degree(tuple(prefix))
            return
        for c in range(limit.coords[i] + 1):
            yield from rec(prefix + [c], i + 1)

    yield from rec([], 0)


UNBOUNDED = None  # marker for an infinite coordinate of an ExtDegree


@dataclass(frozen=True)
class ExtDegree:
    """Element of (N u {unbounded})^k; the degree type of boundary paths."""

    coords: tuple[int | None, ...]

    def __post_init__(self):
        if not isinstance(self.coords, tuple):
            object.__setattr__(self, "coords", tuple(self.coords))
        for c in self.coords:
            if c is not UNBOUNDED and ((not isinstance(c, int)) or c < 0):
                raise DegreeOutOfRangeError(f"bad extended degree coordinate: {c!r}")

    @staticmethod
    def from_degree(d: Degree) -> "ExtDegree":
        return ExtDegree(d.coords)

    @staticmethod
    def unbounded(rank: int) -> "ExtDegree":
        return ExtDegree((UNBOUNDED,) * rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def get(self, color: int) -> int | None:
        return self.coords[color - 1]

    def is_finite(self) -> bool:
        return all(c is not UNBOUNDED for c in self.coords)

    def meet(self, d: Degree) -> Degree:
        # meet with a finite degree always lands back in N^k
        if self.rank != d.rank:
            raise DegreeOutOfRangeError(f"rank mismatch: {self.coords} vs {d.coords}")
        return Degree(tuple(b if a is UNBOUNDED else min(a, b) for a, b in zip(self.coords, d.coords)))

    def __ge__(self, d: Degree) -> bool:
        if self.rank != d.rank:
            raise DegreeOutOfRangeError(f"rank mismatch: {self.coords} vs {d.coords}")
        return all(a is UNBOUNDED or a >= b for a, b in zip(self.coords, d.coords))

    def __repr__(self) -> str:
        shown = tuple("inf" if c is UNBOUNDED else c for c in self.coords)
        return f"ExtDegree{shown}"

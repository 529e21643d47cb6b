"""Box lattice over R^d: intervals, joins, point abstraction, partitions.

Boxes are d-tuples of intervals ordered by componentwise containment; the
atoms are point boxes, so every finite vector embeds into the lattice.
Endpoints may be +/-inf.  Interval left ends are always closed (or -inf);
right ends may be open, which is exactly what partition cells and
cell-shaped transition labels need.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence


class StraddlesPartition(ValueError):
    """A box spans a partition cut and has no single class."""


@dataclass(frozen=True)
class Interval:
    """Closed-below interval [lo, hi] or [lo, hi) when ``hi_open``."""

    lo: float
    hi: float
    hi_open: bool = False

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("NaN interval endpoint")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if self.hi_open and (self.lo == self.hi or math.isinf(self.hi)):
            raise ValueError("degenerate open right end")

    def contains(self, x: float) -> bool:
        return self.lo <= x and (x < self.hi or (x == self.hi and not self.hi_open))

    def contains_interval(self, other: "Interval") -> bool:
        if other.lo < self.lo:
            return False
        if other.hi < self.hi:
            return True
        return other.hi == self.hi and (not self.hi_open or other.hi_open)

    def join(self, other: "Interval") -> "Interval":
        lo = min(self.lo, other.lo)
        if self.hi > other.hi:
            hi, hi_open = self.hi, self.hi_open
        elif other.hi > self.hi:
            hi, hi_open = other.hi, other.hi_open
        else:
            hi, hi_open = self.hi, self.hi_open and other.hi_open
        return Interval(lo, hi, hi_open)

    @property
    def bounded(self) -> bool:
        return not (math.isinf(self.lo) or math.isinf(self.hi))

    def mid(self) -> float:
        if not self.bounded:
            raise ValueError(f"midpoint of unbounded interval {self}")
        return (self.lo + self.hi) / 2.0

    def __str__(self):
        return f"[{self.lo}, {self.hi}{')' if self.hi_open else ']'}"


class _Bottom:
    """The least element of the box lattice (no dimension)."""

    __slots__ = ()

    def __repr__(self):
        return "BOTTOM"

    @property
    def is_bottom(self) -> bool:
        return True


BOTTOM = _Bottom()


@dataclass(frozen=True)
class Box:
    """Product of one interval per dimension."""

    dims: tuple[Interval, ...]

    def __post_init__(self):
        if len(self.dims) < 1:
            raise ValueError("box needs at least one dimension")

    @property
    def is_bottom(self) -> bool:
        return False

    @property
    def dim(self) -> int:
        return len(self.dims)

    @classmethod
    def from_point(cls, x: Sequence[float]) -> "Box":
        vals = [float(v) for v in x]
        if not vals or not all(math.isfinite(v) for v in vals):
            raise ValueError(f"point abstraction needs finite components, got {x!r}")
        return cls(tuple(Interval(v, v) for v in vals))

    @classmethod
    def from_bounds(cls, bounds: Iterable[tuple[float, float]]) -> "Box":
        return cls(tuple(Interval(float(lo), float(hi)) for lo, hi in bounds))

    def contains_point(self, x: Sequence[float]) -> bool:
        if len(x) != len(self.dims):
            raise ValueError(f"dimension mismatch: {len(x)} vs {len(self.dims)}")
        return all(iv.contains(v) for iv, v in zip(self.dims, x))

    @property
    def bounded(self) -> bool:
        return all(iv.bounded for iv in self.dims)

    def __str__(self):
        return " x ".join(str(iv) for iv in self.dims)


BoxLike = Box | _Bottom


def join(a: BoxLike, b: BoxLike) -> BoxLike:
    """Least upper bound; BOTTOM is the identity."""
    if a.is_bottom:
        return b
    if b.is_bottom:
        return a
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return Box(tuple(ia.join(ib) for ia, ib in zip(a.dims, b.dims)))


def leq(a: BoxLike, b: BoxLike) -> bool:
    """Componentwise containment order; BOTTOM below everything."""
    if a.is_bottom:
        return True
    if b.is_bottom:
        return False
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return all(ib.contains_interval(ia) for ia, ib in zip(a.dims, b.dims))


def abstract(x: Sequence[float]) -> Box:
    """Point box of a finite vector (an atom of the lattice)."""
    return Box.from_point(x)


def mid(b: BoxLike) -> list[float]:
    """Componentwise center; defined for bounded non-bottom boxes only."""
    if b.is_bottom:
        raise ValueError("midpoint of BOTTOM")
    return [iv.mid() for iv in b.dims]


@dataclass(frozen=True)
class Partition:
    """Grid partition of the atoms, given by per-dimension cut points.

    Each dimension with cuts c1 < ... < ck is split into the cells
    (-inf, c1), [c1, c2), ..., [ck, +inf); the class index of a cell tuple
    is its lexicographic (row-major) index.  No cuts means one class.
    """

    cuts: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        for dim_cuts in self.cuts:
            if any(not math.isfinite(c) for c in dim_cuts):
                raise ValueError("cut points must be finite")
            if any(a >= b for a, b in zip(dim_cuts, dim_cuts[1:])):
                raise ValueError("cut points must be strictly increasing")

    @classmethod
    def from_lists(cls, cuts: Sequence[Sequence[float]]) -> "Partition":
        return cls(tuple(tuple(float(c) for c in dim) for dim in cuts))

    @property
    def dim(self) -> int:
        return len(self.cuts)

    @property
    def class_count(self) -> int:
        n = 1
        for dim_cuts in self.cuts:
            n *= len(dim_cuts) + 1
        return n

    def class_of_point(self, x: Sequence[float]) -> int:
        if len(x) != self.dim:
            raise ValueError(f"dimension mismatch: {len(x)} vs {self.dim}")
        idx = 0
        for dim_cuts, v in zip(self.cuts, x):
            idx = idx * (len(dim_cuts) + 1) + bisect_right(dim_cuts, v)
        return idx

    def class_of(self, b: Box) -> int:
        """Class index of a box, or StraddlesPartition if it crosses a cut."""
        if b.is_bottom:
            raise ValueError("BOTTOM has no partition class")
        if b.dim != self.dim:
            raise ValueError(f"dimension mismatch: {b.dim} vs {self.dim}")
        idx = 0
        for dim_cuts, iv in zip(self.cuts, b.dims):
            lo_cell = bisect_right(dim_cuts, iv.lo)
            # an open right end only reaches values strictly below hi
            hi_cell = (
                bisect_left(dim_cuts, iv.hi) if iv.hi_open else bisect_right(dim_cuts, iv.hi)
            )
            if lo_cell != hi_cell:
                raise StraddlesPartition(f"box {b} straddles a cut in {dim_cuts}")
            idx = idx * (len(dim_cuts) + 1) + lo_cell
        return idx

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump({"cuts": [list(c) for c in self.cuts]}, f, sort_keys=True)
            f.write("\n")

    @classmethod
    def load(cls, path) -> "Partition":
        with open(path) as f:
            data = json.load(f)
        return cls.from_lists(data["cuts"])

    def cell_box(self, index: int) -> Box:
        """The maximal box of a class (cells are right-open at finite cuts)."""
        if not 0 <= index < self.class_count:
            raise ValueError(f"class index {index} out of range")
        ivs = []
        rem = index
        for dim_cuts in reversed(self.cuts):
            k = len(dim_cuts) + 1
            rem, cell = divmod(rem, k)
            lo = -math.inf if cell == 0 else dim_cuts[cell - 1]
            if cell == len(dim_cuts):
                ivs.append(Interval(lo, math.inf))
            else:
                ivs.append(Interval(lo, dim_cuts[cell], hi_open=True))
        return Box(tuple(reversed(ivs)))


def class_of(b: Box, p: Partition) -> int:
    return p.class_of(b)

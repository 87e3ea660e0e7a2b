"""Trajectories, subtrajectory ranges and matching sequences.

Public indices are 1-based and inclusive, ``traj.sub(i, j)`` is the run of
points ``p_i .. p_j``. Internally everything is a numpy array indexed from 0.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .exceptions import (
    EmptyTrajectory,
    IndexOutOfRange,
    LengthMismatch,
    MixedPointKinds,
    NonFiniteCoordinate,
    NonMonotoneSequence,
)

__all__ = [
    "Planar",
    "Symbol",
    "Trajectory",
    "EmptyView",
    "SubtrajRange",
    "MatchingSequence",
    "make_trajectory",
    "PLANAR",
    "SYMBOL",
]

PLANAR = "planar"
SYMBOL = "symbol"


@dataclass(frozen=True)
class Planar:
    x: float
    y: float


@dataclass(frozen=True)
class Symbol:
    label: Hashable


def _coerce_point(p):
    if isinstance(p, (Planar, Symbol)):
        return p
    if isinstance(p, str):
        return Symbol(p)
    if isinstance(p, (Sequence, np.ndarray)) and len(p) == 2 and all(
        isinstance(v, (Real, np.number)) for v in p
    ):
        return Planar(float(p[0]), float(p[1]))
    raise TypeError(f"cannot interpret {p!r} as a point")


class Trajectory:
    """An immutable, nonempty sequence of points of a single kind.

    Planar trajectories keep their coordinates in a read-only ``(n, 2)``
    float array (``coords``); symbolic ones keep a tuple of labels
    (``labels``). Build them with :func:`make_trajectory`.
    """

    __slots__ = ("id", "kind", "_coords", "_labels")

    def __init__(self, id, kind, coords=None, labels=None):
        self.id = id
        self.kind = kind
        self._coords = coords
        self._labels = labels

    def __len__(self):
        if self.kind == PLANAR:
            return self._coords.shape[0]
        return len(self._labels)

    def __repr__(self):
        return f"Trajectory(id={self.id!r}, kind={self.kind}, n={len(self)})"

    def __eq__(self, other):
        if not isinstance(other, Trajectory):
            return NotImplemented
        if self.id != other.id or self.kind != other.kind:
            return False
        if self.kind == PLANAR:
            return np.array_equal(self._coords, other._coords)
        return self._labels == other._labels

    __hash__ = None

    @property
    def coords(self):
        if self.kind != PLANAR:
            raise TypeError("symbolic trajectory has no coordinates")
        return self._coords

    @property
    def labels(self):
        if self.kind != SYMBOL:
            raise TypeError("planar trajectory has no labels")
        return self._labels

    @property
    def points(self):
        if self.kind == PLANAR:
            return [Planar(float(x), float(y)) for x, y in self._coords]
        return [Symbol(lab) for lab in self._labels]

    def point(self, i):
        """The ``i``-th point, 1-based."""
        n = len(self)
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"point index {i} outside [1, {n}]")
        if self.kind == PLANAR:
            x, y = self._coords[i - 1]
            return Planar(float(x), float(y))
        return Symbol(self._labels[i - 1])

    def sub(self, start, end):
        """Subtrajectory ``[start, end]`` (1-based, inclusive).

        ``start > end`` yields an :class:`EmptyView`; the empty trajectory
        exists only in that form.
        """
        n = len(self)
        if start > end:
            if not (1 <= start <= n + 1 and 0 <= end <= n):
                raise IndexOutOfRange(f"range [{start}, {end}] invalid for n={n}")
            return EmptyView(self.id, self.kind)
        if not 1 <= start <= end <= n:
            raise IndexOutOfRange(f"range [{start}, {end}] invalid for n={n}")
        if self.kind == PLANAR:
            return Trajectory(self.id, PLANAR, coords=self._coords[start - 1 : end])
        return Trajectory(self.id, SYMBOL, labels=self._labels[start - 1 : end])

    def with_id(self, new_id):
        return Trajectory(new_id, self.kind, coords=self._coords, labels=self._labels)


class EmptyView:
    """The empty trajectory, only ever produced by ``Trajectory.sub(i, j)``
    with ``i > j``."""

    __slots__ = ("id", "kind")

    def __init__(self, id=None, kind=PLANAR):
        self.id = id
        self.kind = kind

    def __len__(self):
        return 0

    def __repr__(self):
        return f"EmptyView(id={self.id!r})"


def make_trajectory(id, points) -> Trajectory:
    """Validate ``points`` and build a :class:`Trajectory`.

    ``points`` may hold :class:`Planar` / :class:`Symbol` objects, ``(x, y)``
    pairs, or strings (taken as symbol labels). A numeric ``(n, 2)`` array is
    accepted directly.
    """
    if isinstance(points, np.ndarray) and points.ndim == 2 and points.shape[1] == 2:
        if points.shape[0] == 0:
            raise EmptyTrajectory(f"trajectory {id!r} has no points")
        coords = np.array(points, dtype=np.float64)
        if not np.isfinite(coords).all():
            raise NonFiniteCoordinate(f"trajectory {id!r} has a non-finite coordinate")
        coords.setflags(write=False)
        return Trajectory(id, PLANAR, coords=coords)

    pts = [_coerce_point(p) for p in points]
    if not pts:
        raise EmptyTrajectory(f"trajectory {id!r} has no points")
    kinds = {type(p) for p in pts}
    if len(kinds) > 1:
        raise MixedPointKinds(f"trajectory {id!r} mixes planar and symbolic points")
    if kinds == {Symbol}:
        return Trajectory(id, SYMBOL, labels=tuple(p.label for p in pts))
    coords = np.array([(p.x, p.y) for p in pts], dtype=np.float64)
    if not np.isfinite(coords).all():
        raise NonFiniteCoordinate(f"trajectory {id!r} has a non-finite coordinate")
    coords.setflags(write=False)
    return Trajectory(id, PLANAR, coords=coords)


@dataclass(frozen=True, order=True)
class SubtrajRange:
    start: int
    end: int

    def __post_init__(self):
        if not 1 <= self.start <= self.end:
            raise IndexOutOfRange(f"invalid range [{self.start}, {self.end}]")

    def __len__(self):
        return self.end - self.start + 1

    def check(self, n):
        if self.end > n:
            raise IndexOutOfRange(f"range [{self.start}, {self.end}] exceeds n={n}")
        return self


@dataclass(frozen=True)
class MatchingSequence:
    """Nondecreasing 1-based data indices ``a_1 .. a_m``, one per query point."""

    a: tuple

    def __init__(self, a: Iterable[int]):
        a = tuple(int(v) for v in a)
        if not a:
            raise EmptyTrajectory("matching sequence is empty")
        if a[0] < 1:
            raise IndexOutOfRange(f"matching index {a[0]} below 1")
        if any(x > y for x, y in zip(a, a[1:])):
            raise NonMonotoneSequence(f"matching sequence {list(a)} decreases")
        object.__setattr__(self, "a", a)

    def __len__(self):
        return len(self.a)

    def __iter__(self):
        return iter(self.a)

    def __getitem__(self, k):
        return self.a[k]

    def check(self, m, n):
        if len(self.a) != m:
            raise LengthMismatch(f"sequence has {len(self.a)} entries, query has {m}")
        if self.a[-1] > n:
            raise IndexOutOfRange(f"matching index {self.a[-1]} exceeds n={n}")
        return self

"""CSV ingestion and synthetic workloads.

Planar files have the header ``traj_id,seq,x,y``; symbolic files
``traj_id,seq,label``. Rows of one trajectory appear in increasing ``seq``
order; trajectories may interleave and keep the order of first appearance.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import PLANAR, make_trajectory
from .exceptions import EmptyTrajectory, NonMonotoneSeq, ParseError

__all__ = [
    "Dataset",
    "RandomWalk",
    "Clustered",
    "GeneratorSpec",
    "load_csv",
    "save_csv",
    "generate",
]

PLANAR_HEADER = ["traj_id", "seq", "x", "y"]
SYMBOL_HEADER = ["traj_id", "seq", "label"]


@dataclass
class Dataset:
    trajectories: list
    source: object = None

    def __post_init__(self):
        ids = [t.id for t in self.trajectories]
        if len(set(ids)) != len(ids):
            raise ValueError("trajectory ids must be unique")

    def __len__(self):
        return len(self.trajectories)

    def __iter__(self):
        return iter(self.trajectories)

    def __getitem__(self, k):
        return self.trajectories[k]

    def by_id(self, traj_id):
        for t in self.trajectories:
            if t.id == traj_id:
                return t
        raise KeyError(traj_id)

    @property
    def stats(self):
        lengths = [len(t) for t in self.trajectories]
        if not lengths:
            return {"count": 0, "min": 0, "avg": 0.0, "max": 0}
        return {
            "count": len(lengths),
            "min": min(lengths),
            "avg": sum(lengths) / len(lengths),
            "max": max(lengths),
        }


def load_csv(path) -> Dataset:
    """Read a dataset; errors carry the 1-based file line number."""
    path = Path(path)
    groups = {}
    last_seq = {}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyTrajectory(f"{path} is empty")
        header = [h.strip().lower() for h in header]
        if header == PLANAR_HEADER:
            planar = True
        elif header == SYMBOL_HEADER:
            planar = False
        else:
            raise ParseError(f"unexpected header {header}", line=1)
        width = len(header)
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != width:
                raise ParseError(f"expected {width} fields, got {len(row)}", line=line)
            tid = row[0].strip()
            try:
                seq = int(row[1])
            except ValueError:
                raise ParseError(f"seq {row[1]!r} is not an integer", line=line) from None
            if tid in last_seq:
                if seq == last_seq[tid]:
                    raise ParseError(f"duplicate seq {seq} for trajectory {tid!r}", line=line)
                if seq < last_seq[tid]:
                    raise NonMonotoneSeq(f"seq {seq} after {last_seq[tid]} in trajectory {tid!r}", line=line)
            last_seq[tid] = seq
            if planar:
                try:
                    x, y = float(row[2]), float(row[3])
                except ValueError:
                    raise ParseError("coordinates must be numbers", line=line) from None
                if not (math.isfinite(x) and math.isfinite(y)):
                    raise ParseError("coordinates must be finite", line=line)
                groups.setdefault(tid, []).append((x, y))
            else:
                groups.setdefault(tid, []).append(row[2])
    if not groups:
        raise EmptyTrajectory(f"{path} holds no trajectory points")
    if planar:
        trajs = [make_trajectory(t, np.array(p, dtype=np.float64)) for t, p in groups.items()]
    else:
        trajs = [make_trajectory(t, p) for t, p in groups.items()]
    return Dataset(trajs, source=str(path))


def save_csv(dataset, path):
    """Write a dataset; floats use ``repr`` so a reload is bit-exact."""
    trajs = list(dataset)
    planar = not trajs or trajs[0].kind == PLANAR
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PLANAR_HEADER if planar else SYMBOL_HEADER)
        for t in trajs:
            if planar:
                for s, (x, y) in enumerate(t.coords, start=1):
                    w.writerow([t.id, s, repr(float(x)), repr(float(y))])
            else:
                for s, lab in enumerate(t.labels, start=1):
                    w.writerow([t.id, s, lab])


@dataclass(frozen=True)
class RandomWalk:
    """Isotropic gaussian steps of scale ``sigma`` from a uniform start."""

    sigma: float = 1.0


@dataclass(frozen=True)
class Clustered:
    """Walks anchored near one of ``centers`` (a count, or explicit points).

    Starts scatter around the chosen centre with scale ``spread``; steps use
    ``spread / 4``.
    """

    centers: object = 5
    spread: float = 1.0


@dataclass(frozen=True)
class GeneratorSpec:
    seed: int = 0
    count: int = 100
    length: tuple = (50, 200)
    model: object = field(default_factory=RandomWalk)
    bbox: tuple = (0.0, 0.0, 100.0, 100.0)

    def __post_init__(self):
        lo, hi = self.length
        if lo < 1 or hi < lo:
            raise ValueError(f"length range must satisfy 1 <= lo <= hi, got {self.length}")
        if self.count < 0:
            raise ValueError("count must be nonnegative")


def generate(spec: GeneratorSpec) -> Dataset:
    """Deterministic synthetic planar dataset with ids ``"0" .. "count-1"``."""
    rng = np.random.default_rng(spec.seed)
    x0, y0, x1, y1 = spec.bbox
    lo, hi = spec.length
    model = spec.model
    if isinstance(model, Clustered):
        if isinstance(model.centers, int):
            centers = rng.uniform((x0, y0), (x1, y1), size=(model.centers, 2))
        else:
            centers = np.asarray(model.centers, dtype=np.float64).reshape(-1, 2)
    trajs = []
    for k in range(spec.count):
        n = int(rng.integers(lo, hi + 1))
        if isinstance(model, Clustered):
            c = centers[rng.integers(len(centers))]
            start = c + rng.normal(0.0, model.spread, 2)
            steps = rng.normal(0.0, model.spread / 4, (n - 1, 2))
        else:
            start = rng.uniform((x0, y0), (x1, y1))
            steps = rng.normal(0.0, model.sigma, (n - 1, 2))
        pts = np.vstack([start, start + np.cumsum(steps, axis=0)])
        trajs.append(make_trajectory(str(k), pts))
    return Dataset(trajs, source=f"seed={spec.seed}")

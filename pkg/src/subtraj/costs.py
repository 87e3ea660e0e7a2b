"""Distance-function registry.

A :class:`CostModel` bundles the primitive costs ``sub``, ``ins`` and
``delete`` with a :class:`Family` tag that picks the recurrence the engines
run:

* ``EDIT``    independent substitution / insertion / deletion costs (WED,
  EDR, ERP), aggregated by sum;
* ``WARP``    substitution only, one point may cover many (DTW), sum;
* ``FRECHET`` substitution only, bottleneck (max) aggregation.

Scalar callbacks are the contract: they receive :class:`~subtraj.core.Planar`
or :class:`~subtraj.core.Symbol` points and must be pure and reentrant.
Built-in models also carry a vectorised path so engines can fill a block of
rows with numpy instead of calling back per cell.

Edit-family models are expected to satisfy
``sub(a, b) <= delete(a) + ins(b)``. All built-in edit models do; a custom
model that violates it can have optima with no substitution at all, which
no matching sequence represents.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .core import PLANAR, EmptyView, Planar
from .exceptions import (
    EmptyInput,
    MixedPointKinds,
    NonFiniteCoordinate,
    NonPositiveEpsilon,
    SymbolicPointsUnsupported,
)

__all__ = [
    "Family",
    "CostModel",
    "euclidean",
    "equality",
    "wed_custom",
    "wed_unit",
    "edr",
    "erp",
    "dtw",
    "frechet",
    "full_distance",
    "parse_model",
]


class Family(enum.Enum):
    EDIT = "edit"
    WARP = "warp"
    FRECHET = "frechet"


def euclidean(p: Planar, q: Planar) -> float:
    # same formula as the vectorised kernel so scalar and matrix costs agree bitwise
    dx, dy = p.x - q.x, p.y - q.y
    return math.sqrt(dx * dx + dy * dy)


def equality(p, q) -> float:
    """0/1 metric: 0 when the points are equal (same label or coordinates)."""
    return 0.0 if p == q else 1.0


def _unit(_p) -> float:
    return 1.0


def _euclid_block(query, data, rows):
    return K.euclid_block(query.coords[rows], data.coords)


def _equality_block(query, data, rows):
    if query.kind == PLANAR:
        q = query.coords[rows]
        eq = (q[:, None, :] == data.coords[None, :, :]).all(axis=2)
    else:
        q = np.empty(len(query), dtype=object)
        q[:] = query.labels
        d = np.empty(len(data), dtype=object)
        d[:] = data.labels
        eq = q[rows][:, None] == d[None, :]
    return np.where(eq, 0.0, 1.0)


def _callback_block(sub):
    def block(query, data, rows):
        qs = query.points[rows]
        ds = data.points
        out = np.empty((len(qs), len(ds)))
        for r, p in enumerate(qs):
            for c, q in enumerate(ds):
                out[r, c] = sub(p, q)
        return out

    return block


def _callback_vector(fn):
    def vector(traj):
        return np.array([fn(p) for p in traj.points], dtype=np.float64)

    return vector


@dataclass(frozen=True, eq=False)
class CostModel:
    """A distance-function family descriptor.

    Build instances with the factory functions (:func:`dtw`, :func:`erp`,
    ...). ``ins`` and ``delete`` are ``None`` outside the edit family.
    """

    family: Family
    sub: Callable
    ins: Callable | None = None
    delete: Callable | None = None
    params: Mapping = field(default_factory=dict)
    name: str = "custom"
    planar_only: bool = False
    integral: bool = False
    _sub_block: Callable | None = field(default=None, repr=False)
    _ins_vector: Callable | None = field(default=None, repr=False)
    _del_vector: Callable | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.family is Family.EDIT:
            if self.ins is None or self.delete is None:
                raise TypeError("edit-family models need ins and delete costs")
        if self._sub_block is None:
            object.__setattr__(self, "_sub_block", _callback_block(self.sub))
        if self.family is Family.EDIT:
            if self._ins_vector is None:
                object.__setattr__(self, "_ins_vector", _callback_vector(self.ins))
            if self._del_vector is None:
                object.__setattr__(self, "_del_vector", _callback_vector(self.delete))

    def __repr__(self):
        return f"CostModel({self.spec()!r}, family={self.family.value})"

    def spec(self):
        """Name plus parameters in the CLI syntax, e.g. ``edr:eps=0.3``."""
        if not self.params:
            return self.name
        args = ",".join(k if v == "" else f"{k}={v}" for k, v in self.params.items())
        return f"{self.name}:{args}"

    def check_pair(self, query, data):
        if query.kind != data.kind:
            raise MixedPointKinds("query and data trajectories hold different point kinds")
        if self.planar_only and query.kind != PLANAR:
            raise SymbolicPointsUnsupported(f"model {self.name!r} needs planar points")

    def sub_matrix(self, query, data, rows=slice(None)):
        """Substitution costs for query ``rows`` (0-based slice) against all of
        ``data``, as a float array."""
        out = np.asarray(self._sub_block(query, data, rows), dtype=np.float64)
        if not np.isfinite(out).all() or (out < 0).any():
            raise NonFiniteCoordinate("substitution costs must be finite and nonnegative")
        return out

    def del_vector(self, query):
        if self.family is not Family.EDIT:
            return None
        return np.asarray(self._del_vector(query), dtype=np.float64)

    def ins_vector(self, data):
        if self.family is not Family.EDIT:
            return None
        return np.asarray(self._ins_vector(data), dtype=np.float64)


def wed_custom(sub, ins, delete, *, name="wed", params=None) -> CostModel:
    """Weighted edit distance with user-defined callbacks.

    A caller may pass a lookup into a precomputed distance table as ``sub``
    (e.g. road-network distances) since callbacks see the point objects.
    """
    return CostModel(Family.EDIT, sub, ins, delete, params=dict(params or {}), name=name)


def wed_unit() -> CostModel:
    """Unit-cost edit distance: free substitution of equal points, 1 otherwise."""
    return CostModel(
        Family.EDIT,
        equality,
        _unit,
        _unit,
        name="wed",
        params={"unit": ""},
        integral=True,
        _sub_block=_equality_block,
        _ins_vector=lambda t: np.ones(len(t)),
        _del_vector=lambda t: np.ones(len(t)),
    )


def edr(epsilon: float) -> CostModel:
    """EDR: unit gaps, substitution free iff the points are closer than
    ``epsilon``."""
    epsilon = float(epsilon)
    if not epsilon > 0 or not math.isfinite(epsilon):
        raise NonPositiveEpsilon(f"EDR epsilon must be positive, got {epsilon}")

    def sub(p, q):
        return 0.0 if euclidean(p, q) < epsilon else 1.0

    return CostModel(
        Family.EDIT,
        sub,
        _unit,
        _unit,
        name="edr",
        params={"eps": epsilon},
        planar_only=True,
        integral=True,
        _sub_block=lambda q, d, rows: np.where(_euclid_block(q, d, rows) < epsilon, 0.0, 1.0),
        _ins_vector=lambda t: np.ones(len(t)),
        _del_vector=lambda t: np.ones(len(t)),
    )


def erp(reference=(0.0, 0.0)) -> CostModel:
    """ERP: euclidean substitution, gaps priced as the distance to a fixed
    reference point."""
    if isinstance(reference, Planar):
        ref = reference
    else:
        ref = Planar(float(reference[0]), float(reference[1]))
    if not (math.isfinite(ref.x) and math.isfinite(ref.y)):
        raise NonFiniteCoordinate("ERP reference point must be finite")

    def gap(p):
        return euclidean(p, ref)

    def gap_vector(t):
        c = t.coords
        dx, dy = c[:, 0] - ref.x, c[:, 1] - ref.y
        return np.sqrt(dx * dx + dy * dy)

    return CostModel(
        Family.EDIT,
        euclidean,
        gap,
        gap,
        name="erp",
        params={"cx": ref.x, "cy": ref.y},
        planar_only=True,
        _sub_block=_euclid_block,
        _ins_vector=gap_vector,
        _del_vector=gap_vector,
    )


def _metric(metric):
    if metric == "euclidean":
        return euclidean, _euclid_block, True, False
    if metric == "equality":
        return equality, _equality_block, False, True
    if callable(metric):
        return metric, None, False, False
    raise ValueError(f"unknown metric {metric!r}")


def dtw(metric="euclidean") -> CostModel:
    """Dynamic time warping over ``metric`` ("euclidean", "equality" or a
    callable)."""
    sub, block, planar, integral = _metric(metric)
    params = {} if metric == "euclidean" else {"metric": getattr(metric, "__name__", str(metric))}
    return CostModel(
        Family.WARP, sub, name="dtw", params=params, planar_only=planar,
        integral=integral, _sub_block=block,
    )


def frechet(metric="euclidean") -> CostModel:
    """Discrete Fréchet distance over ``metric``."""
    sub, block, planar, integral = _metric(metric)
    params = {} if metric == "euclidean" else {"metric": getattr(metric, "__name__", str(metric))}
    return CostModel(
        Family.FRECHET, sub, name="frechet", params=params, planar_only=planar,
        integral=integral, _sub_block=block,
    )


def full_distance(query, data, model: CostModel) -> float:
    """Distance between the two whole trajectories (no subtrajectory freedom).

    Either side may be an :class:`~subtraj.core.EmptyView` for edit-family
    models, where the distance degenerates to the total deletion or
    insertion cost.
    """
    q_empty = isinstance(query, EmptyView) or len(query) == 0
    d_empty = isinstance(data, EmptyView) or len(data) == 0
    if q_empty or d_empty:
        if model.family is not Family.EDIT:
            raise EmptyInput(f"{model.family.value} distance is undefined for an empty trajectory")
        total = 0.0
        if not q_empty:
            total += float(model.del_vector(query).sum())
        if not d_empty:
            total += float(model.ins_vector(data).sum())
        return total
    model.check_pair(query, data)
    S = model.sub_matrix(query, data)
    if model.family is Family.EDIT:
        return float(K.edit_full(S, model.del_vector(query), model.ins_vector(data)))
    if model.family is Family.WARP:
        return float(K.warp_full(S))
    return float(K.frechet_full(S))


def parse_model(text: str) -> CostModel:
    """Build a model from its CLI name: ``dtw``, ``frechet``, ``edr:eps=<v>``,
    ``erp:cx=<v>,cy=<v>``, ``wed:unit`` (``dtw:metric=equality`` also works)."""
    name, _, rest = text.strip().partition(":")
    name = name.lower()
    args = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        args[key.strip().lower()] = value.strip() if eq else ""
    try:
        if name in ("dtw", "frechet"):
            factory = dtw if name == "dtw" else frechet
            unknown = set(args) - {"metric"}
            if unknown:
                raise ValueError(f"unknown {name} options {sorted(unknown)}")
            return factory(args.get("metric", "euclidean"))
        if name == "edr":
            if set(args) - {"eps"}:
                raise ValueError(f"unknown edr options {sorted(set(args) - {'eps'})}")
            return edr(float(args.get("eps", 0.001)))
        if name == "erp":
            if set(args) - {"cx", "cy"}:
                raise ValueError(f"unknown erp options {sorted(set(args) - {'cx', 'cy'})}")
            return erp((float(args.get("cx", 0.0)), float(args.get("cy", 0.0))))
        if name == "wed":
            if set(args) - {"unit"}:
                raise ValueError("only 'wed:unit' is available from the command line")
            return wed_unit()
    except ValueError as exc:
        if isinstance(exc, NonPositiveEpsilon):
            raise
        raise ValueError(f"bad model spec {text!r}: {exc}") from None
    raise ValueError(f"unknown model {name!r}")


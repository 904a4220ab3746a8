"""Discrete search spaces, evaluation records and run history.

Both optimizers operate on the same objects defined here: a ``SearchSpace``
made of per-dimension value grids, and a ``History`` of evaluated
combinations that is the single source of truth for best-so-far tracking.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParameterGrid:
    """Ordered mesh of admissible values for one parameter."""

    name: str
    values: np.ndarray
    scale: str = "linear"  # "linear" or "log"; metadata about how the mesh was built

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if self.scale not in ("linear", "log"):
            raise ConfigurationError(f"{self.name}: unknown scale {self.scale!r}")
        if values.ndim != 1 or len(values) < 2:
            raise ConfigurationError(f"{self.name}: grid needs at least 2 values")
        if not np.all(np.isfinite(values)):
            raise ConfigurationError(f"{self.name}: grid values must be finite")
        if np.any(np.diff(values) <= 0):
            raise ConfigurationError(f"{self.name}: grid values must be strictly increasing")
        if self.scale == "log" and values[0] <= 0:
            raise ConfigurationError(f"{self.name}: log-scale grid requires positive values")

    def __len__(self) -> int:
        return len(self.values)


def make_grid(lo: float, hi: float, count: int, scale: str = "linear",
              name: str = "x") -> ParameterGrid:
    """Build a uniformly spaced grid, inclusive of both endpoints.

    ``scale="linear"`` spaces values uniformly in the raw units;
    ``scale="log"`` spaces them uniformly in log10 (requires ``lo > 0``).
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ConfigurationError(f"{name}: invalid bounds lo={lo}, hi={hi}")
    if count < 2:
        raise ConfigurationError(f"{name}: count must be >= 2, got {count}")
    if scale == "linear":
        values = np.linspace(lo, hi, count)
    elif scale == "log":
        if lo <= 0:
            raise ConfigurationError(f"{name}: log scale requires lo > 0, got {lo}")
        values = np.logspace(math.log10(lo), math.log10(hi), count)
    else:
        raise ConfigurationError(f"{name}: unknown scale {scale!r}")
    return ParameterGrid(name=name, values=values, scale=scale)


@dataclass(frozen=True)
class SearchSpace:
    """Cartesian product of per-dimension grids."""

    grids: tuple[ParameterGrid, ...]

    def __post_init__(self):
        grids = tuple(self.grids)
        object.__setattr__(self, "grids", grids)
        if len(grids) < 1:
            raise ConfigurationError("search space needs at least one dimension")

    @property
    def dims(self) -> int:
        return len(self.grids)

    @property
    def combination_count(self) -> int:
        # Python int: 61**200 and the like must not overflow.
        count = 1
        for g in self.grids:
            count *= len(g)
        return count

    def point(self, indices) -> np.ndarray:
        """Map grid indices to the corresponding parameter values."""
        return np.array([g.values[i] for g, i in zip(self.grids, indices)])

    def nearest_indices(self, point) -> tuple[int, ...]:
        """Map a point back to the nearest grid index in each dimension."""
        return tuple(int(np.argmin(np.abs(g.values - x)))
                     for g, x in zip(self.grids, point))

    def validate_indices(self, indices) -> tuple[int, ...]:
        if len(indices) != self.dims:
            raise ConfigurationError(
                f"expected {self.dims} indices, got {len(indices)}")
        out = []
        for d, (g, i) in enumerate(zip(self.grids, indices)):
            i = int(i)
            if not 0 <= i < len(g):
                raise ConfigurationError(
                    f"{g.name}: index {i} out of range [0, {len(g) - 1}] (dim {d})")
            out.append(i)
        return tuple(out)


@dataclass(frozen=True)
class EvaluationRecord:
    """One objective evaluation: where, what it returned, and how long it took."""

    indices: tuple[int, ...]
    point: tuple[float, ...]
    value: float
    eval_id: int
    wall_time: float = 0.0


@dataclass
class History:
    """Append-only log of evaluations with best-so-far tracking.

    Non-finite objective values are rejected (counted, not stored) so a
    pointwise objective failure does not abort the run.
    """

    space: SearchSpace
    records: list[EvaluationRecord] = field(default_factory=list)
    best_index: int | None = None
    n_rejected: int = 0

    @property
    def best(self) -> EvaluationRecord:
        if self.best_index is None:
            raise ValueError("history is empty")
        return self.records[self.best_index]

    def __len__(self) -> int:
        return len(self.records)

    def record_evaluation(self, indices, value: float,
                          wall_time: float = 0.0) -> EvaluationRecord | None:
        """Append an evaluation; returns the record, or None if rejected.

        Ties on the best value keep the earlier record.
        """
        indices = self.space.validate_indices(indices)
        if not math.isfinite(value):
            self.n_rejected += 1
            log.warning("dropping non-finite objective value %r at indices %s",
                        value, indices)
            return None
        record = EvaluationRecord(
            indices=indices,
            point=tuple(self.space.point(indices)),
            value=float(value),
            eval_id=len(self.records),
            wall_time=wall_time,
        )
        self.records.append(record)
        if self.best_index is None or record.value < self.records[self.best_index].value:
            self.best_index = record.eval_id
        return record

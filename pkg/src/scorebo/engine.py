"""Dimension-decomposed batch optimizer.

Instead of one joint surrogate over the full D-dimensional space, each
dimension gets its own 1D GP fitted to that parameter's min-projection of
the history (for each grid value, the best objective ever observed with
that value, the other parameters marginalized out by minimum). Every grid
value is then scored with expected improvement, and batches of candidate
index-tuples are assembled from the per-dimension scores.

Candidate assembly prefers incumbent-line refinement: a second 1D GP fitted
to the records that agree with the incumbent on every other dimension (the
exact conditional slice of the objective), whose EI proposes single-
coordinate moves. When no line offers expected improvement the assembly
falls back to the per-dimension-score path: the greedy argmax tuple, then
softmax-sampled tuples, then uniform-random unevaluated tuples.

Per-dimension GP training sets never exceed the grid length, so the cost of
one iteration is bounded by a constant independent of how many evaluations
have accumulated.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .acquisition import ZetaSchedule, score_grid
from .errors import SpaceExhausted, SurrogateError
from .gp import KernelConfig, gp_fit
from .sampling import draw_unevaluated
from .space import History, SearchSpace

log = logging.getLogger(__name__)


class ProjectionTable:
    """Per-dimension map: grid index -> (best value seen there, visit count)."""

    def __init__(self, dims: int):
        self.dims = dims
        self.per_dim: list[dict[int, tuple[float, int]]] = [{} for _ in range(dims)]

    def update(self, records) -> None:
        for rec in records:
            for d, idx in enumerate(rec.indices):
                entry = self.per_dim[d].get(idx)
                if entry is None:
                    self.per_dim[d][idx] = (rec.value, 1)
                else:
                    best, count = entry
                    self.per_dim[d][idx] = (min(best, rec.value), count + 1)

    def observed(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        """Sorted observed indices of dimension d and their projected minima."""
        items = sorted(self.per_dim[d].items())
        idx = np.array([i for i, _ in items], dtype=float)
        best = np.array([v for _, (v, _) in items])
        return idx, best


def clip_targets(values: np.ndarray, factor: float = 20.0) -> np.ndarray:
    """Winsorize targets for 1D surrogate fits.

    Objectives with penalty regions can span many orders of magnitude; a
    single huge value would dominate standardization and flatten the
    posterior everywhere else. Values are capped at
    ``min + factor * (p75 - min)``, which preserves ordering near the
    minimum — the only region the acquisition cares about.
    """
    values = np.asarray(values, dtype=float)
    lo = values.min()
    cap = lo + factor * (np.percentile(values, 75) - lo)
    if cap > lo:
        return np.minimum(values, cap)
    return values


@dataclass
class StepResult:
    batch: list[tuple[int, ...]]
    gp_fit_seconds: float
    eval_seconds: float = 0.0


@dataclass
class ScoreOptimizer:
    """Batch optimizer over a discrete search space.

    The GP input coordinate for every dimension is the grid *index*, so the
    lengthscale is expressed in grid steps and applies uniformly to linear
    and log meshes.
    """

    space: SearchSpace
    objective: object                      # callable: point array -> float
    batch_size: int = 1
    seed: int = 0
    zeta: ZetaSchedule = field(default_factory=ZetaSchedule)
    lengthscale_steps: float = 3.0
    noise_variance: float = 1e-6
    tau_fraction: float = 0.1              # softmax temperature as fraction of score range
    refinement_lengthscale: float = 1.5    # line-GP lengthscale, in grid steps
    refinement_ei_min: float = 0.01        # EI floor (standardized) for line moves

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        self.rng = np.random.default_rng(self.seed)
        self.history = History(self.space)
        self.projections = ProjectionTable(self.space.dims)
        self.evaluated: set[tuple[int, ...]] = set()
        self.kernel = KernelConfig(lengthscale=self.lengthscale_steps,
                                   noise_variance=self.noise_variance)
        self.refinement_kernel = KernelConfig(
            lengthscale=self.refinement_lengthscale,
            noise_variance=self.noise_variance)
        self.iteration = 0
        self.gp_fit_count = 0                # per-dimension projection surrogates
        self.refinement_fit_count = 0        # selection-time line surrogates
        self._refine_dim = 0
        # recorded index-tuples as a growing matrix, for fast line lookups
        self._idx_rows = np.empty((64, self.space.dims), dtype=np.int64)
        self._values = np.empty(64)
        self._n_rows = 0

    # -- evaluation bookkeeping ------------------------------------------

    def _evaluate(self, indices: tuple[int, ...]) -> None:
        point = self.space.point(indices)
        t0 = time.perf_counter()
        value = float(self.objective(point))
        wall = time.perf_counter() - t0
        self.evaluated.add(indices)  # even when the value is rejected
        record = self.history.record_evaluation(indices, value, wall)
        if record is not None:
            self.projections.update([record])
            if self._n_rows == len(self._idx_rows):
                self._idx_rows = np.concatenate([self._idx_rows, self._idx_rows])
                self._values = np.concatenate([self._values, self._values])
            self._idx_rows[self._n_rows] = indices
            self._values[self._n_rows] = record.value
            self._n_rows += 1

    @property
    def n_evaluations(self) -> int:
        """Objective calls so far, including rejected non-finite results."""
        return len(self.history) + self.history.n_rejected

    def initialize(self, n_init: int | None = None) -> None:
        """Evaluate the initial design: distinct uniform-random tuples."""
        if n_init is None:
            n_init = 2 * self.space.dims
        if n_init < 1:
            raise ValueError(f"n_init must be >= 1, got {n_init}")
        for indices in draw_unevaluated(self.space, self.rng, self.evaluated, n_init):
            self._evaluate(indices)

    # -- one iteration ----------------------------------------------------

    def score_dimension(self, d: int, zeta: float) -> np.ndarray:
        """EI score for every grid value of dimension d.

        Falls back to uniform scores when the 1D GP cannot be fitted.
        """
        idx, proj = self.projections.observed(d)
        if len(idx) == 0:
            raise ValueError(f"no observations project onto dimension {d}")
        n_grid = len(self.space.grids[d])
        try:
            self.gp_fit_count += 1
            model = gp_fit(idx, clip_targets(proj), self.kernel)
        except SurrogateError:
            log.warning("GP fit failed for dimension %d; using uniform scores", d)
            return np.ones(n_grid)
        mu, sigma = model.predict(np.arange(n_grid, dtype=float), standardized=True)
        z_best = (self.history.best.value - model.target_mean) / model.target_std
        return score_grid(mu, sigma, z_best, zeta)

    def _line_observations(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        """Records that agree with the incumbent everywhere but dimension d."""
        inc = np.asarray(self.history.best.indices)
        rows = self._idx_rows[:self._n_rows]
        mask = np.all(np.delete(rows, d, axis=1) == np.delete(inc, d), axis=1)
        return rows[mask, d].astype(float), self._values[:self._n_rows][mask]

    def _refinement_candidates(self, taken: set, count: int) -> list[tuple[int, ...]]:
        """Single-coordinate moves from the incumbent, proposed by line EI.

        Dimensions are visited in rotation; a dimension is left once no
        novel value on its line scores above ``refinement_ei_min``. Returns
        fewer than ``count`` tuples when every line is exhausted.
        """
        out: list[tuple[int, ...]] = []
        idle = 0
        while len(out) < count and idle < self.space.dims:
            d = self._refine_dim % self.space.dims
            xs, ys = self._line_observations(d)
            try:
                self.refinement_fit_count += 1
                model = gp_fit(xs, clip_targets(ys), self.refinement_kernel)
            except SurrogateError:
                log.warning("line GP fit failed for dimension %d", d)
                self._refine_dim += 1
                idle += 1
                continue
            n_grid = len(self.space.grids[d])
            mu, sigma = model.predict(np.arange(n_grid, dtype=float),
                                      standardized=True)
            z_best = (self.history.best.value - model.target_mean) / model.target_std
            ei = score_grid(mu, sigma, z_best, 0.0)
            inc = self.history.best.indices
            added = False
            for v in np.argsort(-ei):
                if ei[v] <= self.refinement_ei_min:
                    break
                t = inc[:d] + (int(v),) + inc[d + 1:]
                if t not in taken:
                    out.append(t)
                    taken.add(t)
                    added = True
                    break
            if added:
                if len(out) >= count:
                    break  # stay on this line for the next iteration
                self._refine_dim += 1
                idle = 0
            else:
                self._refine_dim += 1
                idle += 1
        return out

    def select_batch(self, per_dim_scores: list[np.ndarray],
                     max_batch: int | None = None) -> list[tuple[int, ...]]:
        """Assemble distinct, never-evaluated index-tuples.

        Incumbent-line refinement proposals come first (they exist only when
        some line still shows expected improvement); then the per-dimension
        argmax tuple (ties to the lowest index); then tuples drawn per
        dimension from softmax(score / tau), with duplicates resampled up to
        100*B times; finally uniform-random unevaluated tuples.
        """
        remaining = self.space.combination_count - len(self.evaluated)
        if remaining <= 0:
            raise SpaceExhausted("search space exhausted")
        b = min(self.batch_size, remaining)
        if max_batch is not None:
            b = min(b, max_batch)

        taken = set(self.evaluated)
        chosen: list[tuple[int, ...]] = []
        if len(self.history) > 0:
            chosen.extend(self._refinement_candidates(taken, b))

        greedy = tuple(int(np.argmax(s)) for s in per_dim_scores)
        if len(chosen) < b and greedy not in taken:
            chosen.append(greedy)
            taken.add(greedy)

        if len(chosen) >= b:
            return chosen

        probs = []
        for s in per_dim_scores:
            tau = max(self.tau_fraction * (np.max(s) - np.min(s)), 1e-9)
            logits = (s - np.max(s)) / tau
            p = np.exp(logits)
            probs.append(p / p.sum())

        attempts = 0
        while len(chosen) < b and attempts < 100 * b:
            attempts += 1
            t = tuple(int(self.rng.choice(len(p), p=p)) for p in probs)
            if t not in taken:
                chosen.append(t)
                taken.add(t)

        if len(chosen) < b:
            chosen.extend(draw_unevaluated(self.space, self.rng, taken,
                                           b - len(chosen)))
        return chosen

    def step(self, max_batch: int | None = None) -> StepResult:
        """One iteration: D 1D GP fits, one batch selection, B evaluations."""
        zeta = self.zeta.at(self.iteration)
        t0 = time.perf_counter()
        per_dim_scores = [self.score_dimension(d, zeta)
                          for d in range(self.space.dims)]
        gp_seconds = time.perf_counter() - t0

        batch = self.select_batch(per_dim_scores, max_batch=max_batch)
        t1 = time.perf_counter()
        for indices in batch:
            self._evaluate(indices)
        eval_seconds = time.perf_counter() - t1
        self.iteration += 1
        return StepResult(batch=batch, gp_fit_seconds=gp_seconds,
                          eval_seconds=eval_seconds)

"""Classical full-dimensional Bayesian optimization baseline.

One joint GP over all evaluated points, expected improvement maximized over
a random candidate pool plus the grid neighbors of the incumbent. The GP is
refit on the whole history every iteration, so per-iteration cost grows
with the number of evaluations N (Cholesky is O(N^3)); this is the
comparison arm for the bounded-cost decomposed optimizer.

This is a clean-room standard BO loop, not a re-implementation of any
specific package; it exists for the convergence and time-scaling contrast.
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


@dataclass
class BoOptimizer:
    """Joint-space GP + EI over a discrete search space.

    Inputs are rescaled to [0,1] per dimension (index / (grid length - 1))
    so the isotropic lengthscale is dimension-comparable.
    """

    space: SearchSpace
    objective: object
    seed: int = 0
    candidate_pool_size: int = 1000
    zeta: ZetaSchedule = field(default_factory=ZetaSchedule)
    lengthscale: float = 0.08
    noise_variance: float = 1e-6

    def __post_init__(self):
        if self.candidate_pool_size < 1:
            raise ValueError(
                f"candidate_pool_size must be >= 1, got {self.candidate_pool_size}")
        self.rng = np.random.default_rng(self.seed)
        self.history = History(self.space)
        self.evaluated: set[tuple[int, ...]] = set()
        self.kernel = KernelConfig(lengthscale=self.lengthscale,
                                   noise_variance=self.noise_variance)
        self.iteration = 0
        self.gp_fit_count = 0
        self._scale = np.array([len(g) - 1 for g in self.space.grids], dtype=float)

    def _rescale(self, index_tuples) -> np.ndarray:
        return np.asarray(index_tuples, dtype=float) / self._scale

    def _evaluate(self, indices: tuple[int, ...]) -> None:
        point = self.space.point(indices)
        t0 = time.perf_counter()
        value = float(self.objective(point))
        wall = time.perf_counter() - t0
        self.evaluated.add(indices)
        self.history.record_evaluation(indices, value, wall)

    @property
    def n_evaluations(self) -> int:
        return len(self.history) + self.history.n_rejected

    def initialize(self, n_init: int | None = None) -> None:
        if n_init is None:
            n_init = 2 * self.space.dims
        if n_init < 1:
            raise ValueError(f"n_init must be >= 1, got {n_init}")
        for indices in draw_unevaluated(self.space, self.rng, self.evaluated, n_init):
            self._evaluate(indices)

    def _incumbent_neighbors(self) -> list[tuple[int, ...]]:
        best = self.history.best.indices
        neighbors = []
        for d, g in enumerate(self.space.grids):
            for delta in (-1, 1):
                i = best[d] + delta
                if 0 <= i < len(g):
                    t = best[:d] + (i,) + best[d + 1:]
                    if t not in self.evaluated:
                        neighbors.append(t)
        return neighbors

    def step(self) -> float:
        """One iteration: joint fit, EI over the pool, evaluate the argmax.

        Returns the GP-fit wall time in seconds.
        """
        if len(self.history) < 1:
            raise ValueError("initialize() must run before step()")
        remaining = self.space.combination_count - len(self.evaluated)
        if remaining <= 0:
            raise SpaceExhausted("search space exhausted")

        candidates = draw_unevaluated(self.space, self.rng, self.evaluated,
                                      min(self.candidate_pool_size, remaining))
        for t in self._incumbent_neighbors():
            if t not in candidates:
                candidates.append(t)

        inputs = self._rescale([r.indices for r in self.history.records])
        targets = [r.value for r in self.history.records]
        t0 = time.perf_counter()
        try:
            self.gp_fit_count += 1
            model = gp_fit(inputs, targets, self.kernel)
        except SurrogateError:
            log.warning("joint GP fit failed; falling back to a random suggestion")
            gp_seconds = time.perf_counter() - t0
            self._evaluate(candidates[0])
            self.iteration += 1
            return gp_seconds
        gp_seconds = time.perf_counter() - t0

        mu, sigma = model.predict(self._rescale(candidates), standardized=True)
        z_best = (self.history.best.value - model.target_mean) / model.target_std
        scores = score_grid(mu, sigma, z_best, self.zeta.at(self.iteration))
        self._evaluate(candidates[int(np.argmax(scores))])
        self.iteration += 1
        return gp_seconds

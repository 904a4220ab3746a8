"""Exact Gaussian-process regression with a squared-exponential kernel.

The same engine backs the per-dimension 1D surrogates of the decomposed
optimizer and the joint D-dimensional surrogate of the classical baseline.
Targets are standardized inside the model, so kernel variances are
expressed in standardized target units (signal_variance=1.0 means "the
sample variance of the targets").
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SurrogateError

MAX_JITTER = 1e-2


@dataclass(frozen=True)
class KernelConfig:
    """Squared-exponential kernel hyperparameters (standardized target units)."""

    lengthscale: float = 3.0
    signal_variance: float = 1.0
    noise_variance: float = 1e-6
    jitter: float = 1e-12
    kind: str = "squared_exponential"

    def __post_init__(self):
        if self.kind != "squared_exponential":
            raise ValueError(f"unsupported kernel kind {self.kind!r}")
        if not (np.isfinite(self.lengthscale) and self.lengthscale > 0):
            raise ValueError(f"lengthscale must be positive, got {self.lengthscale}")
        if not (np.isfinite(self.signal_variance) and self.signal_variance > 0):
            raise ValueError(f"signal_variance must be positive, got {self.signal_variance}")
        if not (np.isfinite(self.noise_variance) and self.noise_variance >= 0):
            raise ValueError(f"noise_variance must be >= 0, got {self.noise_variance}")
        if not (np.isfinite(self.jitter) and self.jitter >= 1e-12):
            raise ValueError(f"jitter must be >= 1e-12, got {self.jitter}")


def _kernel_matrix(a: np.ndarray, b: np.ndarray, cfg: KernelConfig) -> np.ndarray:
    a2 = np.sum(a * a, axis=1)
    b2 = np.sum(b * b, axis=1)
    sq = a2[:, None] + b2[None, :] - 2.0 * (a @ b.T)
    np.maximum(sq, 0.0, out=sq)
    return cfg.signal_variance * np.exp(-0.5 * sq / cfg.lengthscale**2)


@dataclass(frozen=True)
class GpModel:
    """Fitted GP: immutable after construction, safe to query concurrently."""

    train_inputs: np.ndarray     # (n, d)
    train_targets: np.ndarray    # (n,), standardized
    target_mean: float
    target_std: float
    chol: np.ndarray             # lower Cholesky of K + (noise + jitter) I
    alpha: np.ndarray            # (K + (noise + jitter) I)^-1 y
    kernel: KernelConfig
    _jitter: float = 1e-12       # jitter actually used (after any escalation)

    def predict(self, query_points, standardized: bool = False):
        """Posterior mean and std at each query point.

        Returns ``(mean, std)`` arrays. With ``standardized=True`` the values
        stay in the model's internal target scale; otherwise they are mapped
        back to objective units. Variances are clamped at 0 before sqrt.
        """
        query = np.asarray(query_points, dtype=float)
        d_in = self.train_inputs.shape[1]
        if query.ndim == 0:
            query = query.reshape(1, 1)
        elif query.ndim == 1:
            # n scalar queries for a 1D model, one point for a D-dim model
            query = query[:, None] if d_in == 1 else query[None, :]
        if query.shape[1] != self.train_inputs.shape[1]:
            raise ValueError(
                f"query dimensionality {query.shape[1]} does not match "
                f"training dimensionality {self.train_inputs.shape[1]}")
        k_star = _kernel_matrix(self.train_inputs, query, self.kernel)
        mean = k_star.T @ self.alpha
        v = np.linalg.solve(self.chol, k_star)
        var = self.kernel.signal_variance - np.sum(v * v, axis=0)
        self._stabilize_at_train_points(query, var)
        std = np.sqrt(np.maximum(var, 0.0))
        if standardized:
            return mean, std
        return self.target_mean + self.target_std * mean, self.target_std * std

    def _stabilize_at_train_points(self, query: np.ndarray, var: np.ndarray) -> None:
        """Replace the variance at queries equal to training inputs in place.

        The direct expression signal - sum(v^2) loses all significant digits
        when the posterior variance is ~(noise+jitter): both operands round
        at ~1e-16 of the signal. For a query x equal to training input i the
        algebraically equivalent form var = j * (1 - j * (K^-1)_ii) with
        j = noise + jitter involves no cancellation, so it is used verbatim.
        """
        j = self.kernel.noise_variance + self._jitter
        matches = np.all(self.train_inputs[:, None, :] == query[None, :, :], axis=2)
        rows, cols = np.nonzero(matches)
        if len(rows) == 0:
            return
        unit = np.zeros((len(self.train_inputs), len(rows)))
        unit[rows, np.arange(len(rows))] = 1.0
        z = np.linalg.solve(self.chol, unit)
        inv_diag = np.sum(z * z, axis=0)
        var[cols] = j * (1.0 - j * inv_diag)


def gp_fit(inputs, targets, kernel: KernelConfig = KernelConfig(),
           standardize: bool = True) -> GpModel:
    """Fit an exact GP, escalating jitter (x10, up to 1e-2) on Cholesky failure.

    ``standardize=False`` keeps targets in raw units (kernel variances then
    apply to raw units as well); the default standardizes to zero mean and
    unit variance, using std=1 when the targets are constant.
    """
    x = np.asarray(inputs, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1, 1)
    elif x.ndim == 1:
        x = x[:, None]  # n scalar inputs, not one n-dim point
    y = np.asarray(targets, dtype=float).ravel()
    if len(y) != x.shape[0]:
        raise ValueError(f"{x.shape[0]} inputs but {len(y)} targets")
    if len(y) < 1:
        raise ValueError("need at least one training pair")
    if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
        raise ValueError("training data must be finite")

    if standardize:
        target_mean = float(np.mean(y))
        target_std = float(np.std(y))
        if target_std == 0.0:
            target_std = 1.0
    else:
        target_mean, target_std = 0.0, 1.0
    z = (y - target_mean) / target_std

    base = _kernel_matrix(x, x, kernel)
    jitter = kernel.jitter
    while True:
        k = base + (kernel.noise_variance + jitter) * np.eye(len(z))
        try:
            chol = np.linalg.cholesky(k)
            break
        except np.linalg.LinAlgError:
            jitter *= 10.0
            if jitter > MAX_JITTER:
                raise SurrogateError(
                    f"Cholesky failed for {len(z)} points even at jitter {MAX_JITTER}")
    alpha = np.linalg.solve(chol.T, np.linalg.solve(chol, z))
    return GpModel(train_inputs=x, train_targets=z, target_mean=target_mean,
                   target_std=target_std, chol=chol, alpha=alpha, kernel=kernel,
                   _jitter=jitter)

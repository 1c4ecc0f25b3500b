"""Benchmark objective families: diagonal quadratics and regularized logistic regression.

Both families expose analytic curvature information where it exists: the
quadratic knows its smoothness and strong-convexity constants exactly, the
logistic loss certifies a strong-convexity lower bound through its
regularizer and a smoothness upper bound through the Gram spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import Objective, Vector, as_vector
from .rng import SplitMix64

_POWER_ITER_SEED = 0x5EED


@dataclass(frozen=True)
class QuadraticProblem:
    """f(x) = 0.5 * sum_i diag_i * x_i**2 with strictly positive curvatures."""

    diag: Vector

    def __post_init__(self):
        diag = as_vector(self.diag)
        if np.any(diag <= 0.0):
            raise ValueError("all curvatures must be strictly positive")
        diag = diag.copy()
        diag.setflags(write=False)
        object.__setattr__(self, "diag", diag)

    @property
    def dim(self) -> int:
        return self.diag.size

    @property
    def known_L(self) -> float:
        return float(self.diag.max())

    @property
    def known_mu(self) -> float:
        return float(self.diag.min())

    @property
    def known_fstar(self) -> float:
        return 0.0

    def objective(self) -> Objective:
        diag = self.diag
        return Objective(
            dim=self.dim,
            value=lambda x: float(0.5 * np.dot(diag, x * x)),
            gradient=lambda x: diag * x,
            known_L=self.known_L,
            known_mu=self.known_mu,
            known_fstar=0.0,
        )


def quadratic_value_grad(p: QuadraticProblem, x: Vector) -> tuple[float, Vector]:
    """Value and gradient of the quadratic at x."""
    x = as_vector(x)
    if x.size != p.dim:
        raise ValueError(f"dimension mismatch: problem dim {p.dim}, x has {x.size}")
    return float(0.5 * np.dot(p.diag, x * x)), p.diag * x


@dataclass
class LogRegProblem:
    """L2-regularized logistic loss over +-1 labels.

    f(w) = sum_i log(1 + exp(-y_i * <x_i, w>)) + (reg/2) * |w|**2.

    The Hessian is reg*I plus a positive-semidefinite sum, so reg is a
    certified strong-convexity lower bound.
    """

    features: np.ndarray
    labels: np.ndarray
    reg: float

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.float64)
        if self.features.ndim != 2:
            raise ValueError(f"features must be a 2-D matrix, got {self.features.shape}")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("labels must have one entry per feature row")
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features contain non-finite entries")
        if not np.all(np.abs(self.labels) == 1.0):
            raise ValueError("labels must all be +1 or -1")
        if not (math.isfinite(self.reg) and self.reg > 0.0):
            raise ValueError(f"reg must be positive, got {self.reg}")

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def known_mu(self) -> float:
        return self.reg

    @cached_property
    def known_L(self) -> float:
        return lipschitz_upper_bound(self)

    def objective(self) -> Objective:
        return Objective(
            dim=self.dim,
            value=lambda w: _logreg_value(self, w),
            gradient=lambda w: _logreg_grad(self, w),
            known_L=self.known_L,
            known_mu=self.known_mu,
        )


def _margins(p: LogRegProblem, w: Vector) -> np.ndarray:
    return p.labels * (p.features @ w)


def _logreg_value(p: LogRegProblem, w: Vector) -> float:
    z = _margins(p, w)
    # log(1 + exp(-z)) evaluated as logaddexp(0, -z): stable for |z| > 700
    return float(np.sum(np.logaddexp(0.0, -z)) + 0.5 * p.reg * np.dot(w, w))


def _sigmoid_of_negative(z: np.ndarray) -> np.ndarray:
    """sigma(-z) = 1 / (1 + exp(z)), branchwise so exp never overflows."""
    e = np.exp(-np.abs(z))
    return np.where(z >= 0.0, e / (1.0 + e), 1.0 / (1.0 + e))


def _logreg_grad(p: LogRegProblem, w: Vector) -> Vector:
    s = _sigmoid_of_negative(_margins(p, w))
    return -(p.features.T @ (p.labels * s)) + p.reg * w


def logreg_value_grad(p: LogRegProblem, w: Vector) -> tuple[float, Vector]:
    """Value and gradient of the regularized logistic loss at w."""
    w = as_vector(w)
    if w.size != p.dim:
        raise ValueError(f"dimension mismatch: problem dim {p.dim}, w has {w.size}")
    z = _margins(p, w)
    value = float(np.sum(np.logaddexp(0.0, -z)) + 0.5 * p.reg * np.dot(w, w))
    s = _sigmoid_of_negative(z)
    grad = -(p.features.T @ (p.labels * s)) + p.reg * w
    return value, grad


def gen_logreg(n_samples: int, n_features: int, reg: float, seed: int) -> LogRegProblem:
    """Seeded synthetic instance: standard-normal features, uniform +-1 labels.

    The stream order is fixed: n_samples*n_features feature entries
    (row-major), then n_samples labels, all from one SplitMix64 stream, so a
    given (n_samples, n_features, seed) triple is reproducible bit-for-bit.
    """
    if n_samples < 1 or n_features < 1:
        raise ValueError("n_samples and n_features must be >= 1")
    stream = SplitMix64(seed)
    features = stream.normals(n_samples * n_features).reshape(n_samples, n_features)
    labels = stream.signs(n_samples)
    return LogRegProblem(features=features, labels=labels, reg=reg)


def load_logreg_csv(path: str, reg: float) -> LogRegProblem:
    """Load a dense CSV dataset: one sample per row, last column the +-1 label."""
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if data.shape[1] < 2:
        raise ValueError("CSV needs at least one feature column plus the label column")
    return LogRegProblem(features=data[:, :-1], labels=data[:, -1], reg=reg)


def lipschitz_upper_bound(p: LogRegProblem, tol: float = 1e-6, max_iters: int = 10_000) -> float:
    """Smoothness upper bound reg + lambda_max(X^T X) / 4 via power iteration.

    The logistic curvature factor never exceeds 1/4 per sample, so this
    bounds the largest Hessian eigenvalue everywhere. Power iteration runs
    on v -> X^T (X v) until the Rayleigh quotient is stable to tol
    (relative); a deterministic seeded start avoids adversarial alignments.
    """
    X = p.features
    v = SplitMix64(_POWER_ITER_SEED).normals(p.dim)
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:  # cannot happen with the fixed seed; keep the guard cheap
        v = np.ones(p.dim)
        nrm = math.sqrt(p.dim)
    v /= nrm
    lam_prev = -1.0
    for _ in range(max_iters):
        w = X.T @ (X @ v)
        lam = float(np.dot(v, w))
        wnorm = float(np.linalg.norm(w))
        if wnorm == 0.0:
            return p.reg  # the generic start maps to zero only for a zero Gram matrix
        v = w / wnorm
        if abs(lam - lam_prev) <= tol * max(abs(lam), 1e-300):
            return p.reg + 0.25 * lam
        lam_prev = lam
    raise RuntimeError(f"power iteration did not converge within {max_iters} iterations")

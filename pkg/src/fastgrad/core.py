"""Vector arithmetic, objective/oracle abstractions, and gradient validation.

Everything downstream works on dense float64 vectors. Oracles count every
evaluation and reject non-finite results at the boundary, so runs abort with
a diagnostic instead of propagating NaN/Inf through the iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray

Vector = NDArray[np.float64]


class NonFiniteError(RuntimeError):
    """An oracle evaluation or iterate produced NaN or infinity."""


def as_vector(x) -> Vector:
    """Convert to a 1-D float64 array, rejecting non-finite components."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("vector has non-finite components")
    return arr


def norm2(x: Vector) -> float:
    """Euclidean norm of x; rescales when the squared sum under- or overflows."""
    s = float(np.sqrt(np.dot(x, x)))
    if 0.0 < s < math.inf:
        return s
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    if scale == 0.0 or not math.isfinite(scale):
        return scale
    z = x / scale
    return scale * float(np.sqrt(np.dot(z, z)))


def axpy(a: float, x: Vector, y: Vector) -> Vector:
    """Return a*x + y. Mixed dimensions are rejected."""
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return a * x + y


@dataclass(frozen=True)
class Objective:
    """Black-box objective: a value and a gradient callable over R^dim.

    known_L / known_mu / known_fstar carry analytic smoothness, strong
    convexity and optimal-value information when the problem family
    provides it; solvers never require them.
    """

    dim: int
    value: Callable[[Vector], float]
    gradient: Callable[[Vector], Vector]
    known_L: Optional[float] = None
    known_mu: Optional[float] = None
    known_fstar: Optional[float] = None


class CountingOracle:
    """Objective wrapper tallying value and gradient evaluations separately.

    Counters increment by exactly one per evaluation; callers that reuse a
    result do not pay again. Non-finite results raise NonFiniteError here,
    at the oracle boundary.
    """

    def __init__(self, inner: Objective):
        self.inner = inner
        self.value_calls = 0
        self.grad_calls = 0

    def value(self, x: Vector) -> float:
        self.value_calls += 1
        v = float(self.inner.value(x))
        if not np.isfinite(v):
            raise NonFiniteError(
                f"objective value is non-finite ({v!r}) after "
                f"{self.value_calls} value evaluations"
            )
        return v

    def gradient(self, x: Vector) -> Vector:
        self.grad_calls += 1
        g = self.inner.gradient(x)
        if not np.all(np.isfinite(g)):
            raise NonFiniteError(
                f"gradient has non-finite components after "
                f"{self.grad_calls} gradient evaluations"
            )
        return g


class EventKind(Enum):
    OUTER_STEP = "outer_step"
    RETRY = "retry"
    INNER_RESTART = "inner_restart"
    TERMINATED = "terminated"


@dataclass(frozen=True)
class TraceEvent:
    """Snapshot of a run at one solver event.

    f_value, mu_estimate and L_estimate are None when the method had no such
    quantity at hand (values are never evaluated just to fill the trace
    unless instrumentation was requested explicitly).
    """

    value_calls: int
    grad_calls: int
    grad_norm: float
    f_value: Optional[float]
    mu_estimate: Optional[float]
    L_estimate: Optional[float]
    kind: EventKind


@dataclass
class RunTrace:
    """Ordered record of solver events, counters included.

    instrumented_values flags traces whose value-call counts include
    plot-only evaluations requested by the caller.
    """

    events: list[TraceEvent] = field(default_factory=list)
    instrumented_values: bool = False

    def record(
        self,
        oracle: CountingOracle,
        kind: EventKind,
        grad_norm: float,
        f_value: Optional[float] = None,
        mu_estimate: Optional[float] = None,
        L_estimate: Optional[float] = None,
    ) -> None:
        self.events.append(
            TraceEvent(
                value_calls=oracle.value_calls,
                grad_calls=oracle.grad_calls,
                grad_norm=float(grad_norm),
                f_value=f_value,
                mu_estimate=mu_estimate,
                L_estimate=L_estimate,
                kind=kind,
            )
        )


def check_gradient(obj: Objective, x: Vector, h: float = 1e-6) -> float:
    """Worst-coordinate relative error of the analytic gradient.

    Compares obj.gradient against central finite differences with the
    per-coordinate step h*max(1, |x_i|). Errors are scaled by
    max(1, |analytic|, |difference|) so near-zero coordinates are judged
    absolutely.
    """
    x = as_vector(x)
    g = np.asarray(obj.gradient(x), dtype=np.float64)
    if g.shape != x.shape:
        raise ValueError(f"gradient shape {g.shape} does not match x {x.shape}")
    worst = 0.0
    for i in range(x.size):
        step = h * max(1.0, abs(float(x[i])))
        xp = x.copy()
        xp[i] += step
        xm = x.copy()
        xm[i] -= step
        fp = float(obj.value(xp))
        fm = float(obj.value(xm))
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise NonFiniteError(f"non-finite objective value near x (coordinate {i})")
        diff = (fp - fm) / (2.0 * step)
        err = abs(float(g[i]) - diff) / max(1.0, abs(float(g[i])), abs(diff))
        worst = max(worst, err)
    return worst

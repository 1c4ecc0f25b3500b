"""Fixed-budget accelerated gradient method tuned for the final gradient norm.

``ogmg_run`` executes a prescribed number N of steps with momentum
coefficients derived from a backward recurrence; it needs no function
values. ``ogmgl_run`` wraps the same iteration with an on-the-fly
smoothness estimate validated by a sufficient-decrease test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .core import CountingOracle, NonFiniteError, Vector, as_vector

# Probe signatures:
#   iterate probe: (x_i, grad_at_x_i) before each step
#   restart callback: (x_bad, grad_norm, f_at_x_bad, L_after_doubling)
#   step probe: (i, f_x, grad_sq, f_y, L_current) after each accepted step
IterateProbe = Callable[[Vector, Vector], None]
RestartCallback = Callable[[Vector, float, float, float], None]
StepProbe = Callable[[int, float, float, float, float], None]


class RunawayLipschitzError(RuntimeError):
    """The smoothness estimate doubled past any plausible value.

    Indicates a non-smooth objective or an inconsistent value/gradient pair.
    """


@dataclass(frozen=True)
class Schedule:
    """Momentum coefficients for a fixed budget of N gradient steps."""

    N: int
    theta: np.ndarray  # N+1 entries, theta[N] == 1, non-increasing
    beta_coef: np.ndarray  # N entries
    gamma_coef: np.ndarray  # N entries, each in (0, 1]


@lru_cache(maxsize=256)
def make_schedule(N: int) -> Schedule:
    """Coefficient schedule for budget N (deterministic, cached per N).

    theta is built backward from theta[N] = 1:

        theta[i] = (1 + sqrt(1 + 4*theta[i+1]**2)) / 2   for 1 <= i < N
        theta[0] = (1 + sqrt(1 + 8*theta[1]**2)) / 2

    so theta[i]**2 - theta[i] = theta[i+1]**2 holds exactly along the way
    (with an extra factor 2 at i = 0). The step coefficients are

        beta[i]  = (theta[i] - 1) * (2*theta[i+1] - 1)
                   / (theta[i] * (2*theta[i] - 1))
        gamma[i] = (2*theta[i+1] - 1) / (2*theta[i] - 1)
    """
    if N < 1:
        raise ValueError(f"step budget must be >= 1, got {N}")
    theta = np.ones(N + 1)
    for i in range(N - 1, 0, -1):
        theta[i] = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * theta[i + 1] ** 2))
    theta[0] = 0.5 * (1.0 + math.sqrt(1.0 + 8.0 * theta[1] ** 2))
    head, tail = theta[:-1], theta[1:]
    beta = (head - 1.0) * (2.0 * tail - 1.0) / (head * (2.0 * head - 1.0))
    gamma = (2.0 * tail - 1.0) / (2.0 * head - 1.0)
    for arr in (theta, beta, gamma):
        arr.setflags(write=False)
    return Schedule(N=N, theta=theta, beta_coef=beta, gamma_coef=gamma)


def halving_budget(L: float, mu: float) -> int:
    """Steps guaranteeing the gradient norm at least halves: ceil(2*sqrt(2*L/mu))."""
    if not (math.isfinite(L) and math.isfinite(mu)) or L <= 0.0 or mu <= 0.0:
        raise ValueError(f"L and mu must be positive and finite, got L={L}, mu={mu}")
    return max(1, math.ceil(2.0 * math.sqrt(2.0 * L / mu)))


def ogmg_run(
    oracle: CountingOracle,
    x0: Vector,
    L: float,
    N: int,
    iterate_probe: Optional[IterateProbe] = None,
) -> Vector:
    """Run exactly N accelerated steps from x0 with step size 1/L.

    Performs exactly N gradient evaluations and no value evaluations; the
    returned point is the one carrying the final-gradient-norm guarantee.
    iterate_probe, when given, sees each iterate and its gradient before the
    step (any value evaluations it triggers are the caller's).
    """
    if not math.isfinite(L) or L <= 0.0:
        raise ValueError(f"L must be positive and finite, got {L}")
    sched = make_schedule(N)
    beta, gamma = sched.beta_coef, sched.gamma_coef
    inv_L = 1.0 / L
    x = as_vector(x0).copy()
    y = x
    for i in range(N):
        g = oracle.gradient(x)
        if iterate_probe is not None:
            iterate_probe(x, g)
        y_next = x - inv_L * g
        x = y_next + beta[i] * (y_next - y) + gamma[i] * (y_next - x)
        if not np.all(np.isfinite(x)):
            raise NonFiniteError(f"iterate became non-finite at step {i + 1} of {N}")
        y = y_next
    return x


@dataclass(frozen=True)
class OgmglOutcome:
    """Result of one smoothness-adaptive run.

    L_end is at least L_in/2 (the entry halving is the only decrease) and
    L_end / (L_in/2) is an exact power of two; inner_restarts counts the
    doublings.
    """

    x_final: Vector
    L_end: float
    inner_restarts: int


def ogmgl_run(
    oracle: CountingOracle,
    x0: Vector,
    L_in: float,
    N: int,
    *,
    reuse_start: bool = False,
    on_restart: Optional[RestartCallback] = None,
    step_probe: Optional[StepProbe] = None,
) -> OgmglOutcome:
    """Budget-N accelerated run that tunes the smoothness estimate on the fly.

    The estimate starts at L_in/2. Each trial step y = x - g/L must satisfy

        f(y) <= f(x) - |g|**2 / (2*L)

    or L doubles and the whole pass restarts from x0 with the same budget
    (and the same schedule, which depends only on N). A single pass costs at
    most N gradient and 2N value evaluations. By default the start point is
    re-evaluated on every restart to keep counters equal to true oracle
    work; reuse_start=True caches f(x0) and its gradient instead.

    Raises RunawayLipschitzError once the estimate exceeds L_in * 2**60.
    """
    if not math.isfinite(L_in) or L_in <= 0.0:
        raise ValueError(f"L_in must be positive and finite, got {L_in}")
    sched = make_schedule(N)
    beta, gamma = sched.beta_coef, sched.gamma_coef
    x0 = as_vector(x0).copy()
    L_hat = L_in / 2.0
    limit = L_in * 2.0**60
    restarts = 0
    start_cache: Optional[tuple[float, Vector]] = None
    while True:
        x = x0
        y = x0
        violated = False
        for i in range(N):
            if i == 0 and start_cache is not None:
                f_x, g = start_cache
            else:
                f_x = oracle.value(x)
                g = oracle.gradient(x)
                if i == 0 and reuse_start:
                    start_cache = (f_x, g)
            g_sq = float(np.dot(g, g))
            y_next = x - g / L_hat
            f_y = oracle.value(y_next)
            if f_y > f_x - g_sq / (2.0 * L_hat):
                restarts += 1
                L_hat *= 2.0
                if L_hat > limit or restarts > 62:
                    raise RunawayLipschitzError(
                        f"smoothness estimate exceeded {L_in} * 2**60 after "
                        f"{restarts} doublings; oracle looks non-smooth or inconsistent"
                    )
                if on_restart is not None:
                    on_restart(x, math.sqrt(g_sq), f_x, L_hat)
                violated = True
                break
            if step_probe is not None:
                step_probe(i, f_x, g_sq, f_y, L_hat)
            x = y_next + beta[i] * (y_next - y) + gamma[i] * (y_next - x)
            if not np.all(np.isfinite(x)):
                raise NonFiniteError(f"iterate became non-finite at step {i + 1} of {N}")
            y = y_next
        if not violated:
            return OgmglOutcome(x_final=x, L_end=L_hat, inner_restarts=restarts)

"""Outer restart drivers built on the fixed-budget method.

``acgm`` adapts the strong-convexity estimate by restarts with a
halve-the-gradient acceptance test; ``algm`` additionally adapts the
smoothness estimate by delegating to the sufficient-decrease variant;
``ugm`` is the plain universal-step gradient baseline and
``ogmg_repeated`` the fixed-parameter repetition baseline.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

from .core import CountingOracle, EventKind, RunTrace, Vector, as_vector, norm2
from .ogmg import RunawayLipschitzError, halving_budget, ogmg_run, ogmgl_run

log = logging.getLogger(__name__)

# An attempt maps (restart point, working mu) to
# (candidate, mu after any rescaling, L estimate attached to the candidate).
AttemptFn = Callable[[Vector, float], tuple[Vector, float, float]]


class DivergenceError(RuntimeError):
    """The gradient norm exploded relative to its starting value."""


@dataclass
class SolverConfig:
    """Shared driver configuration.

    epsilon is the target gradient norm. mu0 defaults to L0, the choice that
    makes the strong-convexity adaptation monotone; it is clamped to L0 with
    a warning if set higher. beta > 1 is the estimate update factor (4 is
    optimal for the worst case). mu_floor defaults to 1e-30 * mu0 and, with
    max_retries_per_step, bounds the retry loop on objectives where the
    halving test never passes.
    """

    epsilon: float
    L0: float
    mu0: Optional[float] = None
    beta: float = 4.0
    max_grad_calls: int = 10_000_000
    max_retries_per_step: int = 60
    mu_floor: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not (math.isfinite(self.L0) and self.L0 > 0.0):
            raise ValueError(f"L0 must be positive, got {self.L0}")
        if not (math.isfinite(self.beta) and self.beta > 1.0):
            raise ValueError(f"beta must exceed 1, got {self.beta}")
        if self.max_grad_calls < 1:
            raise ValueError("max_grad_calls must be >= 1")
        if self.max_retries_per_step < 1:
            raise ValueError("max_retries_per_step must be >= 1")
        if self.mu0 is None:
            self.mu0 = self.L0
        if not (math.isfinite(self.mu0) and self.mu0 > 0.0):
            raise ValueError(f"mu0 must be positive, got {self.mu0}")
        if self.mu0 > self.L0:
            warnings.warn(
                f"mu0={self.mu0} exceeds L0={self.L0}; clamping mu0 to L0",
                stacklevel=2,
            )
            self.mu0 = self.L0
        if self.mu_floor is None:
            self.mu_floor = 1e-30 * self.mu0
        if self.mu_floor <= 0.0:
            raise ValueError("mu_floor must be positive")


@dataclass
class DriverResult:
    """Outcome of one driver run.

    trajectory holds the accepted outer points; rejected attempts appear in
    the trace as retry events. best_point is the point of minimal observed
    gradient norm over all trace events, which matters for the smoothness-
    adaptive method whose convergence is non-monotone.
    """

    trajectory: list[Vector]
    trace: RunTrace
    converged: bool
    best_point: Vector
    best_grad_norm: float


class _BestTracker:
    def __init__(self):
        self.point: Optional[Vector] = None
        self.grad_norm = math.inf

    def offer(self, x: Vector, grad_norm: float) -> None:
        if grad_norm < self.grad_norm:
            self.grad_norm = grad_norm
            self.point = x


def _adaptive_restarts(
    oracle: CountingOracle,
    x0: Vector,
    cfg: SolverConfig,
    run_attempt: AttemptFn,
    L_initial: float,
    trace: RunTrace,
    best: _BestTracker,
) -> DriverResult:
    """Shared outer loop: multiply mu by beta, attempt, demand a halved
    gradient norm; on failure divide mu by beta and retry, adopting a
    strictly better rejected point as the new restart point."""
    x0 = as_vector(x0).copy()

    g_ref = norm2(oracle.gradient(x0))
    best.offer(x0, g_ref)
    trajectory = [x0]
    x_ref = x0
    if g_ref <= cfg.epsilon:
        trace.record(oracle, EventKind.TERMINATED, g_ref, mu_estimate=cfg.mu0, L_estimate=L_initial)
        return DriverResult(trajectory, trace, True, x0, g_ref)
    trace.record(oracle, EventKind.OUTER_STEP, g_ref, mu_estimate=cfg.mu0, L_estimate=L_initial)

    mu_prev = cfg.mu0
    L_last = L_initial
    exhausted = False
    converged = False
    while True:
        if g_ref <= cfg.epsilon:
            trace.record(oracle, EventKind.TERMINATED, g_ref, mu_estimate=mu_prev, L_estimate=L_last)
            converged = True
            break
        if oracle.grad_calls >= cfg.max_grad_calls:
            exhausted = True
            break
        mu_work = cfg.beta * mu_prev
        retries = 0
        step_start = x_ref
        while True:  # attempts within one outer step
            cand, mu_work, L_last = run_attempt(x_ref, mu_work)
            g_cand = norm2(oracle.gradient(cand))
            best.offer(cand, g_cand)
            if g_cand <= 0.5 * g_ref:
                trace.record(oracle, EventKind.OUTER_STEP, g_cand, mu_estimate=mu_work, L_estimate=L_last)
                x_ref, g_ref = cand, g_cand
                trajectory.append(cand)
                mu_prev = mu_work
                break
            trace.record(oracle, EventKind.RETRY, g_cand, mu_estimate=mu_work, L_estimate=L_last)
            mu_work /= cfg.beta
            if g_cand < g_ref:
                x_ref, g_ref = cand, g_cand  # adopt the improved restart point
            retries += 1
            if oracle.grad_calls >= cfg.max_grad_calls:
                exhausted = True
                break
            if retries >= cfg.max_retries_per_step or mu_work < cfg.mu_floor:
                log.warning(
                    "halving test failed %d times (working mu %.3e); accepting the "
                    "best point of this step and moving on",
                    retries,
                    mu_work,
                )
                mu_prev = max(mu_work, cfg.mu_floor)
                if x_ref is not step_start:
                    trajectory.append(x_ref)
                break
        if exhausted:
            break

    assert best.point is not None
    return DriverResult(trajectory, trace, converged, best.point, best.grad_norm)


def acgm(oracle: CountingOracle, x0: Vector, L: float, cfg: SolverConfig) -> DriverResult:
    """Restart method adaptive in the strong-convexity estimate.

    L is trusted as a valid smoothness constant; each attempt runs the
    fixed-budget method with budget halving_budget(L, working mu).
    """
    if not (math.isfinite(L) and L > 0.0):
        raise ValueError(f"L must be positive, got {L}")

    def attempt(x_ref: Vector, mu_work: float) -> tuple[Vector, float, float]:
        n = halving_budget(L, mu_work)
        return ogmg_run(oracle, x_ref, L, n), mu_work, L

    return _adaptive_restarts(oracle, x0, cfg, attempt, L, RunTrace(), _BestTracker())


def algm(oracle: CountingOracle, x0: Vector, cfg: SolverConfig) -> DriverResult:
    """Restart method adaptive in both the strong-convexity and smoothness estimates.

    Attempts delegate to the sufficient-decrease variant. Its returned
    estimate is carried forward even when the halving test rejects the
    candidate, and the working mu is rescaled by L_new/L_old so the ratio
    L/mu (hence the budget) survives the estimate change. Inner estimate
    doublings surface in the trace as inner_restart events.
    """
    trace = RunTrace()
    best = _BestTracker()
    state = {"L": cfg.L0, "mu": cfg.mu0}

    def on_restart(x_bad: Vector, g_norm: float, f_bad: float, L_new: float) -> None:
        trace.record(
            oracle,
            EventKind.INNER_RESTART,
            g_norm,
            f_value=f_bad,
            mu_estimate=state["mu"],
            L_estimate=L_new,
        )
        best.offer(x_bad, g_norm)

    def attempt(x_ref: Vector, mu_work: float) -> tuple[Vector, float, float]:
        state["mu"] = mu_work
        L_old = state["L"]
        n = halving_budget(L_old, mu_work)
        out = ogmgl_run(oracle, x_ref, L_old, n, on_restart=on_restart)
        mu_next = mu_work * (out.L_end / L_old)  # keep L/mu unchanged
        state["L"] = out.L_end
        state["mu"] = mu_next
        return out.x_final, mu_next, out.L_end

    return _adaptive_restarts(oracle, x0, cfg, attempt, cfg.L0, trace, best)


def ugm(oracle: CountingOracle, x0: Vector, cfg: SolverConfig) -> DriverResult:
    """Universal-step gradient baseline.

    Each step halves the smoothness estimate, takes the plain gradient step
    x - g/L, and doubles L until the sufficient-decrease condition
    f(x') <= f(x) - |g|**2/(2L) accepts. Accepted values are reused, so the
    per-probe cost is a single value evaluation.
    """
    x = as_vector(x0).copy()
    trace = RunTrace()
    best = _BestTracker()

    g_vec = oracle.gradient(x)
    g = norm2(g_vec)
    best.offer(x, g)
    trajectory = [x]
    if g <= cfg.epsilon:
        trace.record(oracle, EventKind.TERMINATED, g, L_estimate=cfg.L0)
        return DriverResult(trajectory, trace, True, x, g)
    f_x = oracle.value(x)
    trace.record(oracle, EventKind.OUTER_STEP, g, f_value=f_x, L_estimate=cfg.L0)

    L_cur = cfg.L0
    limit = cfg.L0 * 2.0**60
    converged = False
    while True:
        if oracle.grad_calls >= cfg.max_grad_calls:
            break
        L_cur /= 2.0
        while True:  # double until sufficient decrease holds
            cand = x - g_vec / L_cur
            f_cand = oracle.value(cand)
            if f_cand <= f_x - (g * g) / (2.0 * L_cur):
                break
            L_cur *= 2.0
            if L_cur > limit:
                raise RunawayLipschitzError(
                    f"smoothness estimate exceeded {cfg.L0} * 2**60; "
                    "oracle looks non-smooth or inconsistent"
                )
        x, f_x = cand, f_cand
        g_vec = oracle.gradient(x)
        g = norm2(g_vec)
        best.offer(x, g)
        trajectory.append(x)
        if g <= cfg.epsilon:
            trace.record(oracle, EventKind.TERMINATED, g, f_value=f_x, L_estimate=L_cur)
            converged = True
            break
        trace.record(oracle, EventKind.OUTER_STEP, g, f_value=f_x, L_estimate=L_cur)

    assert best.point is not None
    return DriverResult(trajectory, trace, converged, best.point, best.grad_norm)


def ogmg_repeated(
    oracle: CountingOracle,
    x0: Vector,
    L: float,
    mu: float,
    epsilon: float,
    *,
    max_grad_calls: int = 10_000_000,
) -> DriverResult:
    """Repeat the fixed-budget method with constant L and mu until the target.

    The per-repetition budget is halving_budget(L, mu). Underestimating L
    can make the iteration diverge; a gradient norm 1e6 times the starting
    one aborts with a diagnostic.
    """
    if not (math.isfinite(L) and math.isfinite(mu)) or L <= 0.0 or mu <= 0.0:
        raise ValueError(f"L and mu must be positive, got L={L}, mu={mu}")
    if not (math.isfinite(epsilon) and epsilon > 0.0):
        raise ValueError(f"epsilon must be positive, got {epsilon}")

    x = as_vector(x0).copy()
    n = halving_budget(L, mu)
    trace = RunTrace()
    best = _BestTracker()

    g0 = norm2(oracle.gradient(x))
    g = g0
    best.offer(x, g)
    trajectory = [x]
    if g <= epsilon:
        trace.record(oracle, EventKind.TERMINATED, g, mu_estimate=mu, L_estimate=L)
        return DriverResult(trajectory, trace, True, x, g)
    trace.record(oracle, EventKind.OUTER_STEP, g, mu_estimate=mu, L_estimate=L)

    converged = False
    while True:
        if oracle.grad_calls >= max_grad_calls:
            break
        x = ogmg_run(oracle, x, L, n)
        g = norm2(oracle.gradient(x))
        best.offer(x, g)
        trajectory.append(x)
        if g > 1e6 * g0:
            raise DivergenceError(
                f"gradient norm grew from {g0:.3e} to {g:.3e}; "
                "the supplied smoothness constant looks too small"
            )
        if g <= epsilon:
            trace.record(oracle, EventKind.TERMINATED, g, mu_estimate=mu, L_estimate=L)
            converged = True
            break
        trace.record(oracle, EventKind.OUTER_STEP, g, mu_estimate=mu, L_estimate=L)

    assert best.point is not None
    return DriverResult(trajectory, trace, converged, best.point, best.grad_norm)

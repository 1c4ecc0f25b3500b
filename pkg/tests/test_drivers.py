import logging
import math

import numpy as np
import pytest

from fastgrad import (
    CountingOracle,
    DivergenceError,
    EventKind,
    Objective,
    QuadraticProblem,
    SolverConfig,
    SplitMix64,
    acgm,
    algm,
    gen_logreg,
    lipschitz_upper_bound,
    norm2,
    ogmg_repeated,
    ugm,
)

ILL = QuadraticProblem(diag=np.array([1000.0, 0.1]))


def ill_run(mu0=None, kexp=20, x0=None, driver="acgm", L=1000.0, **cfg_kwargs):
    obj = ILL.objective()
    x0 = np.array([1.0, 1.0]) if x0 is None else x0
    g0 = norm2(obj.gradient(x0))
    cfg = SolverConfig(epsilon=g0 / 2**kexp, L0=L, mu0=mu0, **cfg_kwargs)
    oracle = CountingOracle(obj)
    if driver == "acgm":
        result = acgm(oracle, x0, L, cfg)
    elif driver == "algm":
        result = algm(oracle, x0, cfg)
    else:
        result = ugm(oracle, x0, cfg)
    return result, oracle, cfg


def outer_norms(result):
    return [e.grad_norm for e in result.trace.events if e.kind == EventKind.OUTER_STEP]


class TestSolverConfig:
    def test_mu0_defaults_to_L0(self):
        cfg = SolverConfig(epsilon=1.0, L0=10.0)
        assert cfg.mu0 == 10.0

    def test_mu0_above_L0_clamps_with_warning(self):
        with pytest.warns(UserWarning, match="clamping"):
            cfg = SolverConfig(epsilon=1.0, L0=10.0, mu0=100.0)
        assert cfg.mu0 == 10.0

    def test_mu_floor_default(self):
        cfg = SolverConfig(epsilon=1.0, L0=4.0, mu0=2.0)
        assert cfg.mu_floor == pytest.approx(2e-30)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"epsilon": 0.0, "L0": 1.0},
            {"epsilon": 1.0, "L0": -1.0},
            {"epsilon": 1.0, "L0": 1.0, "beta": 1.0},
            {"epsilon": 1.0, "L0": 1.0, "mu0": -2.0},
            {"epsilon": 1.0, "L0": 1.0, "max_grad_calls": 0},
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SolverConfig(**kwargs)


class TestAcgm:
    def test_immediate_stop_at_solution(self):
        oracle = CountingOracle(ILL.objective())
        cfg = SolverConfig(epsilon=1e-6, L0=1000.0)
        result = acgm(oracle, np.zeros(2), 1000.0, cfg)
        assert result.converged
        assert len(result.trajectory) == 1
        assert oracle.grad_calls == 1 and oracle.value_calls == 0
        assert len(result.trace.events) == 1
        assert result.trace.events[0].kind == EventKind.TERMINATED

    def test_converges_with_monotone_accepted_steps(self):
        result, oracle, cfg = ill_run()
        assert result.converged
        norms = outer_norms(result)
        assert all(b <= 0.5 * a for a, b in zip(norms, norms[1:]))
        assert result.trace.events[-1].grad_norm <= cfg.epsilon

    def test_accepted_steps_bounded_by_K(self):
        result, _, cfg = ill_run(kexp=20)
        # each accepted step at least halves, so at most K accepted moves
        assert len(result.trajectory) - 1 <= 20

    def test_retry_mu_sequence_is_geometric(self):
        result, _, cfg = ill_run(mu0=1000.0)
        beta = cfg.beta
        mu_accepted = cfg.mu0
        step_mus = []
        for event in result.trace.events[1:]:
            if event.kind == EventKind.RETRY:
                step_mus.append(event.mu_estimate)
            elif event.kind == EventKind.OUTER_STEP:
                step_mus.append(event.mu_estimate)
                expected = beta * mu_accepted
                for m, mu in enumerate(step_mus):
                    assert mu == expected / beta**m  # exact for beta = 4
                mu_accepted = event.mu_estimate
                step_mus = []

    def test_underestimated_mu0_costs_more(self):
        x0 = SplitMix64(1).normals(2)
        exact, o_exact, _ = ill_run(mu0=0.1, x0=x0)
        low, o_low, _ = ill_run(mu0=0.01, x0=x0)
        assert exact.converged and low.converged
        assert o_low.grad_calls > o_exact.grad_calls

    def test_budget_exhaustion_reports_not_converged(self):
        result, oracle, _ = ill_run(max_grad_calls=40)
        assert not result.converged
        assert result.trace.events[-1].kind != EventKind.TERMINATED
        assert result.best_grad_norm < math.inf

    def test_best_point_attains_event_minimum(self):
        result, _, _ = ill_run(mu0=0.01)
        obj = ILL.objective()
        event_min = min(e.grad_norm for e in result.trace.events)
        assert result.best_grad_norm == event_min
        assert norm2(obj.gradient(result.best_point)) == pytest.approx(event_min, rel=1e-12)
        assert result.converged and result.best_grad_norm <= result.trace.events[-1].grad_norm

    def test_forced_accept_on_retry_cap(self, caplog):
        # constant-gradient objective: the halving test can never pass
        c = np.array([3.0, 4.0])
        flat = Objective(dim=2, value=lambda x: float(np.dot(c, x)), gradient=lambda x: c)
        oracle = CountingOracle(flat)
        cfg = SolverConfig(
            epsilon=1e-3, L0=1.0, max_retries_per_step=3, max_grad_calls=200
        )
        with caplog.at_level(logging.WARNING, logger="fastgrad.drivers"):
            result = acgm(oracle, np.zeros(2), 1.0, cfg)
        assert not result.converged
        assert oracle.grad_calls <= 200 + 50
        assert any("accepting the best point" in r.message for r in caplog.records)


class TestUgm:
    def test_hand_simulated_parabola(self):
        p = QuadraticProblem(diag=np.array([1.0]))
        oracle = CountingOracle(p.objective())
        result = ugm(oracle, np.array([4.0]), SolverConfig(epsilon=1e-12, L0=1.0))
        assert result.converged
        assert result.trajectory[-1][0] == 0.0
        assert oracle.value_calls == 3
        assert oracle.grad_calls == 2

    def test_immediate_stop_at_minimizer(self):
        oracle = CountingOracle(ILL.objective())
        result = ugm(oracle, np.zeros(2), SolverConfig(epsilon=1e-9, L0=7.0))
        assert result.converged
        assert oracle.grad_calls == 1 and oracle.value_calls == 0

    def test_accepted_values_strictly_decrease(self):
        result, _, _ = ill_run(driver="ugm", kexp=12, L=8000.0)
        assert result.converged
        values = [e.f_value for e in result.trace.events if e.f_value is not None]
        assert all(b < a for a, b in zip(values, values[1:]))


class TestAlgm:
    def test_immediate_stop_zero_inner_calls(self):
        oracle = CountingOracle(ILL.objective())
        result = algm(oracle, np.zeros(2), SolverConfig(epsilon=1e-9, L0=123.0))
        assert result.converged
        assert len(result.trajectory) == 1
        assert oracle.grad_calls == 1 and oracle.value_calls == 0

    def test_converges_from_overestimate_and_brackets_L(self):
        result, oracle, _ = ill_run(driver="algm", L=1e6)
        assert result.converged
        estimates = [e.L_estimate for e in result.trace.events if e.L_estimate is not None]
        assert 500.0 <= estimates[-1] <= 2000.0

    def test_converges_from_underestimate(self):
        result, _, _ = ill_run(driver="algm", L=1.0)
        assert result.converged

    def test_mu_rescaling_preserves_ratio(self):
        result, _, cfg = ill_run(driver="algm", L=1e5)
        mu_acc, L_acc = cfg.mu0, cfg.L0
        first_attempt = True
        for event in result.trace.events[1:]:
            if event.kind == EventKind.INNER_RESTART:
                continue
            if event.kind == EventKind.TERMINATED:
                break
            if first_attempt:
                got = event.L_estimate / event.mu_estimate
                want = L_acc / (cfg.beta * mu_acc)
                assert got == pytest.approx(want, rel=1e-12)
            first_attempt = event.kind == EventKind.OUTER_STEP
            if event.kind == EventKind.OUTER_STEP:
                mu_acc, L_acc = event.mu_estimate, event.L_estimate

    def test_logreg_converges_without_supplied_constant(self):
        p = gen_logreg(110, 100, 1.0, seed=5)
        obj = p.objective()
        x0 = SplitMix64(2).normals(p.dim)
        g0 = norm2(obj.gradient(x0))
        oracle = CountingOracle(obj)
        result = algm(oracle, x0, SolverConfig(epsilon=g0 / 2**20, L0=1.0))
        assert result.converged
        ratio = math.sqrt(lipschitz_upper_bound(p) / p.known_mu)
        K = 20
        assert oracle.grad_calls <= 8 * math.sqrt(2) * ratio * (3 * K + math.log2(lipschitz_upper_bound(p) / 1.0))
        assert oracle.value_calls <= 2 * oracle.grad_calls


class TestRepeated:
    def test_each_repetition_at_least_halves(self):
        obj = ILL.objective()
        x0 = np.array([1.0, 1.0])
        g0 = norm2(obj.gradient(x0))
        oracle = CountingOracle(obj)
        result = ogmg_repeated(oracle, x0, 1000.0, 0.1, g0 / 2**20)
        assert result.converged
        norms = [e.grad_norm for e in result.trace.events]
        assert all(b <= 0.5 * a for a, b in zip(norms, norms[1:]))

    def test_divergence_aborts_with_diagnostic(self):
        oracle = CountingOracle(ILL.objective())
        with pytest.raises(DivergenceError):
            ogmg_repeated(oracle, np.array([1.0, 1.0]), 10.0, 0.1, 1e-8)

    def test_budget_guard(self):
        oracle = CountingOracle(ILL.objective())
        result = ogmg_repeated(
            oracle, np.array([1.0, 1.0]), 1000.0, 0.1, 1e-14, max_grad_calls=300
        )
        assert not result.converged

    def test_immediate_stop(self):
        oracle = CountingOracle(ILL.objective())
        result = ogmg_repeated(oracle, np.zeros(2), 1000.0, 0.1, 1e-6)
        assert result.converged and len(result.trace.events) == 1

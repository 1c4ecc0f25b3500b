import numpy as np

from fastgrad import QuadraticProblem


def sample_quadratic(rng, max_dim=20, log_lo=-2.0, log_hi=3.0):
    """Random diagonal quadratic with curvatures log-uniform in [10^lo, 10^hi]."""
    dim = int(rng.integers(1, max_dim + 1))
    diag = 10.0 ** rng.uniform(log_lo, log_hi, size=dim)
    return QuadraticProblem(diag=diag)


def counting_objective(diag):
    """Quadratic objective with independent call counters, for honesty checks."""
    from fastgrad import Objective

    diag = np.asarray(diag, dtype=np.float64)
    calls = {"value": 0, "grad": 0}

    def value(x):
        calls["value"] += 1
        return float(0.5 * np.dot(diag, x * x))

    def grad(x):
        calls["grad"] += 1
        return diag * x

    return Objective(dim=diag.size, value=value, gradient=grad), calls

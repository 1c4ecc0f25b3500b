"""Accelerated first-order convex optimization with adaptive restart drivers."""

from .core import (
    CountingOracle,
    EventKind,
    NonFiniteError,
    Objective,
    RunTrace,
    TraceEvent,
    Vector,
    as_vector,
    axpy,
    check_gradient,
    norm2,
)
from .drivers import (
    DivergenceError,
    DriverResult,
    SolverConfig,
    acgm,
    algm,
    ogmg_repeated,
    ugm,
)
from .ogmg import (
    OgmglOutcome,
    RunawayLipschitzError,
    Schedule,
    halving_budget,
    make_schedule,
    ogmg_run,
    ogmgl_run,
)
from .problems import (
    LogRegProblem,
    QuadraticProblem,
    gen_logreg,
    lipschitz_upper_bound,
    load_logreg_csv,
    logreg_value_grad,
    quadratic_value_grad,
)
from .bench import (
    ExperimentSpec,
    LogRegCsvSpec,
    LogRegSpec,
    MethodSpec,
    QuadraticSpec,
    StartSpec,
    SweepSpec,
    compare,
    run_experiment,
    run_sweep,
)
from .rng import SplitMix64

__version__ = "0.1.0"

__all__ = [
    "CountingOracle",
    "DivergenceError",
    "DriverResult",
    "EventKind",
    "ExperimentSpec",
    "LogRegCsvSpec",
    "LogRegProblem",
    "LogRegSpec",
    "MethodSpec",
    "NonFiniteError",
    "Objective",
    "OgmglOutcome",
    "QuadraticProblem",
    "QuadraticSpec",
    "RunTrace",
    "RunawayLipschitzError",
    "Schedule",
    "SolverConfig",
    "SplitMix64",
    "StartSpec",
    "SweepSpec",
    "TraceEvent",
    "Vector",
    "acgm",
    "algm",
    "as_vector",
    "axpy",
    "check_gradient",
    "compare",
    "gen_logreg",
    "halving_budget",
    "lipschitz_upper_bound",
    "load_logreg_csv",
    "logreg_value_grad",
    "make_schedule",
    "norm2",
    "ogmg_repeated",
    "ogmg_run",
    "ogmgl_run",
    "quadratic_value_grad",
    "run_experiment",
    "run_sweep",
    "ugm",
]

#!/usr/bin/env python3
"""Oracle-call scaling sweeps on the two-curvature quadratic family.

Sweeps the stiff curvature at fixed soft curvature and vice versa, for both
adaptive methods. Each sweep writes one CSV with sqrt(L/mu) and total call
columns; total calls should grow linearly in sqrt(L/mu).
"""

import argparse
from pathlib import Path

from fastgrad import (
    ExperimentSpec,
    MethodSpec,
    QuadraticSpec,
    SolverConfig,
    StartSpec,
    SweepSpec,
    run_sweep,
)

L_VALUES = (1e2, 1e3, 1e4, 1e5, 1e6)
MU_VALUES = (1e-2, 1e-1, 1.0)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/scaling", type=Path)
    parser.add_argument("--eps-rel", default=2.0**-30, type=float)
    parser.add_argument("--reps", default=1, type=int)
    args = parser.parse_args()

    for method in ("acgm", "algm"):
        for axis, values, diag in (
            ("L", L_VALUES, (100.0, 1.0)),
            ("mu", MU_VALUES, (1e5, 1.0)),
        ):
            base = ExperimentSpec(
                problem=QuadraticSpec(diag=diag),
                method=MethodSpec(name=method),
                config=SolverConfig(epsilon=1.0, L0=max(diag)),
                x0=StartSpec("gaussian", 7),
                output_dir=args.out / f"{method}_{axis}",
                eps_rel=args.eps_rel,
            )
            rows, path = run_sweep(
                SweepSpec(base=base, axis=axis, values=values, repetitions=args.reps)
            )
            calls = [r["total_grad_calls"] for r in rows]
            print(f"{method} over {axis}: grad calls {calls} -> {path}")


if __name__ == "__main__":
    main()

"""Compare the numba and numpy integrator backends on the hot path.

The hot loop of the solver is repeated evaluation of the transformation
function gamma(h*), each of which is one adaptive Runge-Kutta integration
of the starred initial-value problem.  This script times a batch of such
evaluations under both backends and prints the speedup.

Usage:
    python3 benchmarks/compare_backends.py [--reps 50]
"""

import argparse
import os
import time

import numpy as np

from itm.core import evaluate_gamma
from itm.integrator import Tolerances
from itm.problems import falkner_skan, sakiadis


def _time_batch(problems, h_grid, tol, reps):
    start = time.perf_counter()
    for _ in range(reps):
        for problem in problems:
            for h in h_grid:
                evaluate_gamma(problem, float(h), tol)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=50,
                        help="repetitions of the evaluation batch")
    args = parser.parse_args()

    problems = [sakiadis(-1), falkner_skan(-0.01, 1), falkner_skan(-0.01, -1)]
    h_grid = np.geomspace(1.0, 100.0, 8)
    tol = Tolerances(rel_tol=1e-6, abs_tol=1e-6)

    results = {}
    for backend in ("numpy", "numba"):
        os.environ["ITM_BACKEND"] = backend
        # warm-up pass so JIT compilation is not billed to the timing
        _time_batch(problems, h_grid, tol, 1)
        results[backend] = _time_batch(problems, h_grid, tol, args.reps)

    n_evals = args.reps * len(problems) * len(h_grid)
    print(f"{n_evals} gamma evaluations per backend")
    for backend, elapsed in results.items():
        print(f"  {backend:>5}: {elapsed:8.3f} s "
              f"({1e3 * elapsed / n_evals:7.3f} ms/eval)")
    print(f"speedup (numpy/numba): {results['numpy'] / results['numba']:.2f}x")


if __name__ == "__main__":
    main()

"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs each rolling-moment kernel on identical inputs through both paths and
reports median wall time plus speedup. The numba path is JIT-warmed before
timing so compilation is not billed to the first measurement.

    python benchmarks/bench_kernels.py --rows 100000 --cols 20 --window 20

If numba is unavailable (or RELSENT_DISABLE_NUMBA is set) the "numba" names
alias plain-Python loops, which would make the comparison meaningless, so
the script refuses to run in that state.
"""

import argparse
import time

import numpy as np

from relsent import _kernels as K


def _bench(fn, args, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=100_000, help="series length")
    ap.add_argument("--cols", type=int, default=20, help="panel width")
    ap.add_argument("--window", type=int, default=20, help="rolling window")
    ap.add_argument("--reps", type=int, default=7, help="timed repetitions")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if not K.HAS_NUMBA:
        raise SystemExit(
            "numba backend unavailable (not installed or RELSENT_DISABLE_NUMBA "
            "is set); nothing meaningful to compare"
        )

    rng = np.random.Generator(np.random.Philox(args.seed))
    x = rng.normal(0.0, 0.02, args.rows)
    y = rng.normal(0.0, 0.02, args.rows)
    panel = rng.normal(0.0, 0.02, (args.rows // max(args.cols, 1), args.cols))

    cases = [
        ("rolling_mean_var", K.rolling_mean_var_numba, K.rolling_mean_var_numpy,
         (x, args.window)),
        ("rolling_cov", K.rolling_cov_numba, K.rolling_cov_numpy,
         (x, y, args.window)),
        ("rolling_mean_var_panel", K.rolling_mean_var_panel_numba,
         K.rolling_mean_var_panel_numpy, (panel, args.window)),
    ]

    print(f"rows={args.rows} cols={args.cols} window={args.window} reps={args.reps}")
    print(f"{'kernel':<24}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for name, f_nb, f_np, fargs in cases:
        f_nb(*fargs)  # JIT warm-up
        t_nb = _bench(f_nb, fargs, args.reps)
        t_np = _bench(f_np, fargs, args.reps)
        print(f"{name:<24}{t_nb:>12.6f}{t_np:>12.6f}{t_np / t_nb:>9.2f}x")


if __name__ == "__main__":
    main()

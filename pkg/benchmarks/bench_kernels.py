"""Compare the compiled kernels against the pure-numpy fallback.

Runs the same workload twice in subprocesses, once per backend, and prints
a table of steady-state timings (each kernel is warmed before the timed
loop, so jit compilation is not billed).  Usage:

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER_FLAG = "SOFTCOVER_BENCH_WORKER"


def _workload(repeats: int) -> dict:
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "tests"))
    import helpers  # noqa: E402
    from softcover import kernels  # noqa: E402
    from softcover.codebooks import exact_expected_td, mc_expected_td  # noqa: E402
    from softcover.info import SolverConfig, bloch_grid_oracle, sandwiched_renyi_info  # noqa: E402

    kernels.warmup()
    bo = helpers.binary_orthogonal()
    pm = helpers.pure_mixed()
    tt = helpers.tilted_triple()
    cfg = SolverConfig()

    def timed(fn) -> float:
        fn()  # warm path-specific caches and jit specializations
        t0 = time.perf_counter()
        for _ in range(repeats):
            fn()
        return (time.perf_counter() - t0) / repeats

    timings = {"backend": kernels.backend_name()}
    timings["bloch_grid_321"] = timed(
        lambda: bloch_grid_oracle(pm, 1.5, resolution=321, kind="renyi")
    )
    timings["exact_td_n4_M4"] = timed(lambda: exact_expected_td(bo, 4, 4, "iid"))
    timings["mc_td_4000"] = timed(
        lambda: mc_expected_td(pm, 6, 4, "iid", seed=11, samples=4000)
    )

    def solver():
        tt._info_cache.clear()  # defeat memoization so the solve reruns
        sandwiched_renyi_info(tt, 1.5, cfg)

    timings["star_solver"] = timed(solver)
    return timings


def _run_backend(pure_numpy: bool, repeats: int) -> dict:
    env = dict(os.environ)
    env[WORKER_FLAG] = str(repeats)
    if pure_numpy:
        env["SOFTCOVER_PURE_NUMPY"] = "1"
    else:
        env.pop("SOFTCOVER_PURE_NUMPY", None)
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def main() -> int:
    if os.environ.get(WORKER_FLAG):
        print(json.dumps(_workload(int(os.environ[WORKER_FLAG]))))
        return 0
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3, help="timed repetitions per kernel")
    args = parser.parse_args()
    fast = _run_backend(False, args.repeats)
    slow = _run_backend(True, args.repeats)
    names = [k for k in fast if k != "backend"]
    width = max(len(n) for n in names)
    print(f"{'kernel':<{width}}  {fast['backend']:>12}  {slow['backend']:>12}  speedup")
    for name in names:
        ratio = slow[name] / fast[name] if fast[name] > 0 else float("inf")
        print(f"{name:<{width}}  {fast[name]:>11.4f}s  {slow[name]:>11.4f}s  {ratio:>6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())

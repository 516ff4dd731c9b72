"""Time the per-step kernels of the compiled extension against the numpy fallback.

    python benchmarks/bench_kernels.py [--steps 300] [--repeat 3]
"""

import argparse
import time

import numpy as np

from slimeca import _backend, _fallback, lattice, reinforcement
from slimeca.config import bundled_config
from slimeca.geometry import bundled_gate
from slimeca.harness import simulate


def use(kernels):
    lattice.kernels = kernels
    reinforcement.kernels = kernels


def time_trial(kernels, cfg, geo, repeat):
    use(kernels)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _step in simulate(cfg, geo, (True, True)):
            pass
        best = min(best, time.perf_counter() - t0)
    return best


def time_kernel(fn, args, n=200):
    t0 = time.perf_counter()
    for _ in range(n):
        fn(*args)
    return (time.perf_counter() - t0) / n


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=300)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _backend.BACKEND != "compiled":
        raise SystemExit("compiled extension not available; build with pip install -e .")

    geo = bundled_gate("P2")
    cfg = bundled_config("p2_xy_wave").with_params(max_steps=args.steps)

    # per-kernel timings on a mid-run grid state
    use(_fallback)
    for step, grid, _ in simulate(cfg.with_params(max_steps=200), geo, (True, True)):
        pass
    u = np.random.default_rng(0).random(grid.mask.shape)
    cases = {
        "diffuse": lambda k: (k.diffuse, (grid.sd, grid.mask, grid._valid, grid._cw)),
        "transfer": lambda k: (k.transfer, (grid.mass, grid.pv, grid.mask, grid._valid, u, 0.1, 1e-3)),
        "compute_flags": lambda k: (k.compute_flags, (grid.mass, grid.sd, grid.wave, grid.dir,
                                                      1e-3, 1e-3, -1)),
        "clamp_rows": lambda k: (k.clamp_rows, (grid.pv.reshape(-1, 8) * 1.0, 0.75)),
    }
    print(f"{'kernel':<16}{'compiled us':>14}{'numpy us':>12}{'speed-up':>10}")
    for name, make in cases.items():
        fc = time_kernel(*make(_backend.kernels))
        fp = time_kernel(*make(_fallback))
        print(f"{name:<16}{fc * 1e6:>14.1f}{fp * 1e6:>12.1f}{fp / fc:>9.1f}x")

    tc = time_trial(_backend.kernels, cfg, geo, args.repeat)
    tp = time_trial(_fallback, cfg, geo, args.repeat)
    print(f"\nfull trial, {args.steps} steps on P2: compiled {tc:.3f} s, "
          f"numpy {tp:.3f} s, speed-up {tp / tc:.1f}x")
    use(_backend.kernels)


if __name__ == "__main__":
    main()

"""Time the numba kernels against their numpy fallbacks.

Run with ``python3 benchmarks/bench_kernels.py``.  The first numba call of
each kernel is a warm-up (JIT compile) and is excluded from the timings.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from gevrey_lab import kernels


def _cases(modes: int, seed: int):
    g = np.random.default_rng(seed)
    n = np.arange(1, modes + 1, dtype=np.int64)
    logmag = -2.0 * np.log(n) + g.standard_normal(modes)
    sign = np.where(g.random(modes) < 0.5, -1, 1).astype(np.int8)
    base = np.log(n.astype(float))
    small = min(modes, 4000)
    lam = np.linspace(1.0, 1e4, 64)
    u0, u1 = g.standard_normal((2, 64))
    return {
        "lse_affine": (kernels.lse_affine_nb, kernels.lse_affine_np, (base, logmag, np.arange(0.0, 200.0, 10.0))),
        "signed_lse": (kernels.signed_lse_nb, kernels.signed_lse_np, (sign, logmag)),
        "trig_sums": (kernels.trig_sums_nb, kernels.trig_sums_np,
                      (sign[:small], logmag[:small], base[:small], n[:small],
                       np.arange(1, 33, dtype=np.int64), np.full(32, 64, dtype=np.int64),
                       np.arange(0, 40, 2, dtype=np.int64))),
        "rk4_modes": (kernels.rk4_modes_nb, kernels.rk4_modes_np, (lam, 0.5 * np.sqrt(lam), u0, u1, 1.0, 20000)),
    }


def main(argv: list[str] | None = None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--modes", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'kernel':<12}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, (fast, slow, call_args) in _cases(args.modes, 0).items():
        fast(*call_args)
        tf = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat))
        ts = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat))
        print(f"{name:<12}{tf:>12.4f}{ts:>12.4f}{ts / tf:>10.1f}")


if __name__ == "__main__":
    main()

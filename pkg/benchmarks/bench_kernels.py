"""Time each hot kernel under the numba and pure-numpy backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Numba timings exclude the first (compiling) call.
"""

import argparse
import timeit

import numpy as np

from attrition import kernels


def workloads(rng):
    H, S, A = 8, 2, 2
    cdfs = np.cumsum(rng.dirichlet(np.ones(3), size=250), axis=1)
    pairs = np.argwhere(kernels.numpy_backend.dominance_matrix(cdfs, 1e-12)).astype(np.int64)
    return {
        "backward_values": (rng.normal(size=(1000, 3)), rng.normal(size=3), np.exp(-0.01), 0.1, 10.05),
        "enumerate_best": (
            rng.normal(size=(H, S, A)),
            rng.integers(0, S, size=(H, S, A)).astype(np.int64),
            rng.normal(size=S),
            np.exp(-0.01 * np.arange(H + 1)),
            0.1,
            0,
        ),
        "dominance_matrix": (cdfs, 1e-12),
        "mon_violations": (rng.normal(size=(250, 50)), pairs, 1e-9),
        "discounted_totals": (rng.normal(size=(21, 20, 3)), np.exp(-0.01 * np.arange(20)), 0.1),
        "sign_changes": (rng.normal(size=(5000, 8)), 1e-9),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if kernels.numba_backend is None:
        raise SystemExit("numba is not installed")
    loads = workloads(np.random.default_rng(0))
    print(f"{'kernel':<18} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, call_args in loads.items():
        times = []
        for backend in (kernels.numpy_backend, kernels.numba_backend):
            fn = getattr(backend, name)
            fn(*call_args)  # warm-up / compile
            times.append(min(timeit.repeat(lambda: fn(*call_args), number=1, repeat=args.repeat)) * 1e3)
        print(f"{name:<18} {times[0]:>10.3f} {times[1]:>10.3f} {times[0] / times[1]:>7.1f}x")


if __name__ == "__main__":
    main()

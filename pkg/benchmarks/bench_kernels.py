"""Time the displacement kernels of each available backend.

Usage: python benchmarks/bench_kernels.py [--dim 32] [--nodes 5120] [--repeat 5]
"""
import argparse
import time

import numpy as np

from intquant import kernels
from intquant.quadrature import PhaseSpaceQuadrature


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--nodes", type=int, default=5120)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)

    n_ang = 64
    quad = PhaseSpaceQuadrature(max(1, args.nodes // n_ang), n_ang)
    z = quad.nodes
    c = quad.weights * np.exp(-np.abs(z) ** 2)
    seed = np.diag(np.linspace(1, 0, args.dim)).astype(complex)
    backends = kernels.available_backends()
    ref = kernels.displacement_stack(z, args.dim, backend="numpy")

    print(f"dim={args.dim} nodes={z.size} repeat={args.repeat} default={kernels.BACKEND}")
    print(f"{'backend':8s} {'stack [s]':>10s} {'conj-sum [s]':>13s} {'max |diff|':>11s}")
    rows = {}
    for name in backends:
        t_stack = best_of(lambda: kernels.displacement_stack(z, args.dim, backend=name), args.repeat)
        t_sum = best_of(lambda: kernels.weighted_conjugation_sum(z, c, seed, backend=name),
                        args.repeat)
        diff = np.max(np.abs(kernels.displacement_stack(z, args.dim, backend=name) - ref))
        rows[name] = t_stack
        print(f"{name:8s} {t_stack:10.4f} {t_sum:13.4f} {diff:11.2e}")
    if "cython" in rows:
        print(f"speed-up of the compiled stack kernel: {rows['numpy'] / rows['cython']:.1f}x")


if __name__ == "__main__":
    main()

"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--qubits 18] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from qbisect import _pykernels
from qbisect.graph import random_graph

try:
    from qbisect import _ckernels
except ImportError:
    _ckernels = None


def cases(nq, g):
    rng = np.random.default_rng(0)
    amps = rng.normal(size=1 << nq) + 1j * rng.normal(size=1 << nq)
    amps /= np.linalg.norm(amps)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    mask = (rng.random(1 << nq) < 0.3).astype(np.uint8)
    edges = g.edge_array()

    def run(mod):
        return {
            "apply_1q": lambda: mod.apply_1q(amps, nq, nq // 2, h),
            "apply_controlled_1q": lambda: mod.apply_controlled_1q(amps, nq, 1, nq - 2, h, 1),
            "apply_phase": lambda: mod.apply_phase(amps, mask, np.exp(1j * 0.3)),
            "balanced_states": lambda: mod.balanced_states(g.n),
            "cut_sizes": lambda: mod.cut_sizes(mod.balanced_states(g.n), edges, g.n),
        }

    return run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--qubits", type=int, default=18)
    ap.add_argument("--vertices", type=int, default=16)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    g = random_graph(args.vertices, 3 * args.vertices, np.random.default_rng(1))
    run = cases(args.qubits, g)
    py = run(_pykernels)
    c = run(_ckernels) if _ckernels is not None else None
    print(f"{'kernel':<22}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>9}")
    for name, fn in py.items():
        t_py = min(timeit.repeat(fn, number=1, repeat=args.repeat)) * 1e3
        if c is None:
            print(f"{name:<22}{t_py:>12.3f}{'n/a':>13}")
            continue
        t_c = min(timeit.repeat(c[name], number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<22}{t_py:>12.3f}{t_c:>13.3f}{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()

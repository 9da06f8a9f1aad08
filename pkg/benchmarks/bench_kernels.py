"""Compare the numba and numpy mod-p echelon backends.

    python benchmarks/bench_kernels.py [--sizes 50 100 200] [--repeats 3]

Also times one assembled classifier block end to end, since that is the
matrix shape the kernels actually see.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from svbider.algebra import Params
from svbider.classifier import assemble_bider_system
from svbider.linalg import DEFAULT_CONFIG, column_blocks
from svbider.linalg import _kernels
from svbider.linalg.modular import dense_mod_p
from svbider.structure import Window


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def random_matrix(n: int, rng: np.random.Generator, p: int) -> np.ndarray:
    mat = rng.integers(0, p, size=(n, n), dtype=np.int64)
    mat[rng.random((n, n)) < 0.7] = 0
    return mat


def classifier_block() -> np.ndarray:
    p = Params.of(1, 0)
    system = assemble_bider_system(p, Window(2), mode="full")
    rows = system.matrix.rows()
    cols, ridx = max(column_blocks(rows, system.matrix.ncols), key=lambda b: len(b[1]))
    return dense_mod_p([rows[i] for i in ridx], cols, DEFAULT_CONFIG.prime)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    p = DEFAULT_CONFIG.prime
    backends = sorted(_kernels.BACKENDS)
    if "numba" in backends:
        _kernels.echelon_mod_p(np.eye(3, dtype=np.int64), p, backend="numba")  # compile

    rng = np.random.default_rng(0)
    print(f"{'matrix':>18} " + " ".join(f"{b:>10}" for b in backends) + "   ranks agree")
    cases = [(f"random {n}x{n}", random_matrix(n, rng, p)) for n in args.sizes]
    cases.append(("classifier block", classifier_block()))
    for label, mat in cases:
        times, ranks = [], []
        for b in backends:
            times.append(_time(lambda: _kernels.echelon_mod_p(mat.copy(), p, backend=b), args.repeats))
            ranks.append(_kernels.echelon_mod_p(mat.copy(), p, backend=b)[0])
        shape = f"{label} ({mat.shape[0]}x{mat.shape[1]})" if label.startswith("classifier") else label
        print(f"{shape:>18} " + " ".join(f"{t * 1e3:9.2f}ms" for t in times)
              + f"   {len(set(ranks)) == 1}")


if __name__ == "__main__":
    main()

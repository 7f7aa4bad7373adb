#!/usr/bin/env python3
"""Time the numba kernels against their numpy twins.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--json]

When numba is missing or disabled (MPSH_DISABLE_NUMBA=1) the ``_nb`` names
are plain Python and the comparison shows interpreter cost instead.
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from mpsh import _kernels as K


@dataclass
class Timing:
    kernel: str
    size: str
    numba_ms: float
    numpy_ms: float

    @property
    def speedup(self) -> float:
        return self.numpy_ms / self.numba_ms if self.numba_ms > 0 else float("inf")


def best_of(fn, repeat: int) -> float:
    fn()  # warm-up, includes JIT compilation
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1e3


def cases(rng):
    Y = np.sort(rng.normal(size=(200_000, 7)), axis=1)
    yield "classify_rows", "200k x 7", lambda: K.classify_rows_nb(Y, 3, 1e-9), lambda: K.classify_rows_np(Y, 3, 1e-9)

    x0 = rng.uniform(-1, 3, 10)
    yield (
        "compass_search",
        "n=11, 5000 evals",
        lambda: K.compass_search_nb(x0.copy(), 3, 5000, 0.5, 1e-7, 1e-3),
        lambda: K.compass_search_np(x0.copy(), 3, 5000, 0.5, 1e-7, 1e-3),
    )

    s = rng.random(1 << 19)
    q = s * rng.random(1 << 19)
    eps = np.array([0.5, 1.0, 2.0])
    yield (
        "claim1_sums",
        "2^19 samples, 3 eps",
        lambda: K.claim1_sums_nb(s, q, 2, 16.0, 0.5, eps),
        lambda: K.claim1_sums_np(s, q, 2, 16.0, 0.5, eps),
    )

    X = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    H = 0.5 * (X + X.conj().T)
    yield (
        "jacobi_hermitian",
        "16 x 16",
        lambda: K.jacobi_hermitian_nb(H.copy(), 1e-13, 30),
        lambda: K.jacobi_hermitian_np(H.copy(), 1e-13, 30),
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    args = ap.parse_args(argv)

    rng = np.random.Generator(np.random.Philox(0))
    rows = [Timing(name, size, best_of(nb, args.repeat), best_of(npf, args.repeat)) for name, size, nb, npf in cases(rng)]
    if args.json:
        print(json.dumps({"backend": K.BACKEND, "rows": [asdict(r) | {"speedup": r.speedup} for r in rows]}, indent=2))
        return 0
    print(f"numba available: {K.HAVE_NUMBA}")
    print(f"{'kernel':<18}{'size':<22}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}")
    for r in rows:
        print(f"{r.kernel:<18}{r.size:<22}{r.numba_ms:>10.2f}{r.numpy_ms:>10.2f}{r.speedup:>9.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Time the numba and pure-numpy paths of each kernel on identical inputs.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from lindpos import _kernels as k
from lindpos.generators import build_traceless_basis
from lindpos.models import random_kossakowski


def _cases(rng):
    psis4 = rng.normal(size=(2000, 4)) + 1j * rng.normal(size=(2000, 4))
    psis9 = rng.normal(size=(2000, 9)) + 1j * rng.normal(size=(2000, 9))
    s16 = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    s81 = rng.normal(size=(81, 81)) + 1j * rng.normal(size=(81, 81))
    yield "pure_output_min_eig d=4 x2000", (k.pure_output_min_eig_numba, k.pure_output_min_eig_numpy), (s16, psis4)
    yield "pure_output_min_eig d=9 x2000", (k.pure_output_min_eig_numba, k.pure_output_min_eig_numpy), (s81, psis9)
    for n in (2, 3, 4):
        c = random_kossakowski(rng, n, "mixed")
        f = np.ascontiguousarray(build_traceless_basis(n).matrices)
        yield f"dissipator_superop n={n}", (k.dissipator_superop_numba, k.dissipator_superop_numpy), (c, f)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not k.HAVE_NUMBA:
        raise SystemExit("numba path unavailable (not installed or LINDPOS_DISABLE_NUMBA set)")
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s} {'max diff':>9s}")
    for name, (fast, slow), inputs in _cases(rng):
        a, b = fast(*inputs), slow(*inputs)  # warm-up compiles the jitted path
        diff = float(np.max(np.abs(a - b)))
        t_fast = min(timeit.repeat(lambda: fast(*inputs), number=1, repeat=args.repeat)) * 1e3
        t_slow = min(timeit.repeat(lambda: slow(*inputs), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:34s} {t_fast:10.3f} {t_slow:10.3f} {t_slow / t_fast:8.2f} {diff:9.1e}")


if __name__ == "__main__":
    main()

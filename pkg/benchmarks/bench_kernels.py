"""Time each hot kernel under numba and under the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Numba timings exclude the first (compiling) call.  Outputs are compared
before timing, so a mismatch aborts the run.
"""
import argparse
import time

import numpy as np

from fermat_regulator import _kernels as K
from fermat_regulator.finite_field import irreducible_modulus, make_field


def cases():
    F = make_field(999983, 1, 2**21)
    E = make_field(3, 12, 2**20)
    m = np.array(irreducible_modulus(3, 12), dtype=np.int64)
    gen = np.array(E.digits(E.generator), dtype=np.int64)
    rng = np.random.default_rng(0)
    A = rng.integers(-2, 3, size=(9, 9, 9))
    B = rng.integers(-2, 3, size=(9, 9, 9))
    la, lb, lc = (rng.normal(size=4096) for _ in range(3))
    return {
        "powers_mod_p (p=999983)": ("powers_mod_p", (F.generator, F.p)),
        "powers_poly (F_3^12)": ("powers_poly", (gen, m, 3, 12)),
        "exponent_histogram (p=999983, N=7)": ("exponent_histogram", (F.dlog, F.one_minus, 7)),
        "group_ring_convolve (N=9)": ("group_ring_convolve", (A, B)),
        "antidiagonal_sums (n=4096)": ("antidiagonal_sums", (la, lb, lc)),
    }


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    repeat = ap.parse_args().repeat
    if not K.NUMBA_IMPL:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':40s} {'numpy [s]':>11s} {'numba [s]':>11s} {'speedup':>8s}")
    for label, (name, args) in cases().items():
        ref = K.NUMPY_IMPL[name](*args)
        got = K.NUMBA_IMPL[name](*args)  # also compiles
        if not np.allclose(ref, got, rtol=1e-12, atol=0):
            raise SystemExit(f"{name}: numba and numpy disagree")
        t_np = best_of(K.NUMPY_IMPL[name], args, repeat)
        t_nb = best_of(K.NUMBA_IMPL[name], args, repeat)
        print(f"{label:40s} {t_np:11.4f} {t_nb:11.4f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()

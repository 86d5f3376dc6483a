#!/usr/bin/env python3
"""Throughput comparison of the sweep kernel backends.

Builds a large batch of 2x2 matrices (a dense theta scan of the five-real-
parameter model family), then times the compiled kernel against the NumPy
fallback on identical inputs and verifies they agree.

Usage:
    python benchmarks/bench_kernels.py [--rows N] [--repeat K]
"""

import argparse
import time

import numpy as np

from pfkit._kernels import _fallback

try:
    from pfkit._kernels import _core
except ImportError:
    _core = None


def build_batch(rows):
    theta = np.linspace(0.0, np.pi, rows)
    eit = np.exp(1j * theta)
    h00 = eit.copy()
    h01 = np.full(rows, 1.0 + 0j)
    h10 = np.full(rows, 1.0 + 0j)
    h11 = np.conj(eit)
    return h00, h01, h10, h11


def time_backend(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=2_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    batch = build_batch(args.rows)
    tol = 1e-10

    t_py, out_py = time_backend(_fallback.sweep_eval, batch + (tol,), args.repeat)
    print(f"python (numpy) : {args.rows / t_py / 1e6:8.2f} Mrows/s "
          f"({t_py * 1e3:7.1f} ms)")

    if _core is None:
        print("compiled       : not built (install with a C compiler present)")
        return

    t_c, out_c = time_backend(_core.sweep_eval, batch + (tol,), args.repeat)
    print(f"compiled       : {args.rows / t_c / 1e6:8.2f} Mrows/s "
          f"({t_c * 1e3:7.1f} ms)")
    print(f"speedup        : {t_py / t_c:8.2f}x")

    assert np.array_equal(out_c[4], out_py[4]), "phase codes diverged"
    for k in (0, 1, 2):
        assert np.allclose(out_c[k], out_py[k], rtol=1e-12, atol=1e-12), \
            f"column {k} diverged"
    finite = np.isfinite(out_py[3])
    assert np.array_equal(finite, np.isfinite(out_c[3]))
    assert np.allclose(out_c[3][finite], out_py[3][finite], rtol=1e-12)
    print("agreement      : ok")

    # CSV row formatting (the other hot loop on large sweeps)
    frows = min(args.rows, 300_000)
    e0, e1, disc, absg, phase = (a[:frows] for a in out_py)
    fargs = (np.ascontiguousarray(np.linspace(0, 1, frows)), None,
             np.ascontiguousarray(e0.real), np.ascontiguousarray(e0.imag),
             np.ascontiguousarray(e1.real), np.ascontiguousarray(e1.imag),
             absg.copy(), disc.copy(), disc.copy(),
             np.ascontiguousarray(phase, dtype=np.int8),
             np.ascontiguousarray(phase == 0, dtype=np.uint8))
    tf_py, text_py = time_backend(_fallback.format_rows, fargs, args.repeat)
    tf_c, text_c = time_backend(_core.format_rows, fargs, args.repeat)
    print(f"format python  : {frows / tf_py / 1e6:8.2f} Mrows/s")
    print(f"format compiled: {frows / tf_c / 1e6:8.2f} Mrows/s "
          f"({tf_py / tf_c:.2f}x, bytes identical: {text_py == text_c})")


if __name__ == "__main__":
    main()

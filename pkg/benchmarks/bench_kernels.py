"""Compare the compiled and pure-numpy sampling kernels.

    python3 benchmarks/bench_kernels.py [--shots N] [--repeat R]
"""
import argparse
import time

import numpy as np

from qmeter.kernels import backends


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--shots", type=int, default=10**6)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    probs = np.array([0.5, 0.2, 0.2, 0.1])
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    results = {}
    for name, mod in backends().items():
        key = mod.stream_key(7, 0)
        t_counts, counts = _best(lambda: mod.sample_counts(cdf, key, 0, args.shots), args.repeat)
        t_idx, idx = _best(lambda: mod.sample_indices(cdf, key, 0, args.shots), args.repeat)
        results[name] = (counts, idx)
        print(f"{name:>8}: counts {t_counts * 1e3:8.2f} ms   indices {t_idx * 1e3:8.2f} ms"
              f"   ({args.shots} shots)")
    if len(results) == 2:
        (ca, ia), (cb, ib) = results.values()
        same = np.array_equal(ca, cb) and np.array_equal(ia, ib)
        print("backends agree bit for bit" if same else "BACKENDS DISAGREE")
    else:
        print("only one backend importable; build the extension to compare")


if __name__ == "__main__":
    main()

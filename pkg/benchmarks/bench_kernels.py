"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from znshift import _pykernels

try:
    from znshift import _ckernels
except ImportError:
    _ckernels = None

CASES = [
    ("count_brute N=2 k=9", lambda m: m.count_brute(2, 9)),
    ("count_brute N=3 k=8", lambda m: m.count_brute(3, 8)),
    ("admissible_words N=2 k=9", lambda m: m.admissible_words(2, 9)),
    (
        "follower_masks N=2 l=3 trunc=9",
        lambda m: m.follower_masks(_pykernels.admissible_words(2, 9), _pykernels.admissible_words(2, 3)),
    ),
]


def best_of(fn, mod, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(mod)
        times.append(time.perf_counter() - t)
    return min(times), out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'case':34s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, fn in CASES:
        tp, outp = best_of(fn, _pykernels, args.repeat)
        if _ckernels is None:
            print(f"{name:34s} {tp:11.4f} {'-':>11s} {'-':>8s}")
            continue
        tc, outc = best_of(fn, _ckernels, args.repeat)
        if isinstance(outp, np.ndarray):
            assert np.array_equal(outp, outc), name
        else:
            assert outp == outc, name
        print(f"{name:34s} {tp:11.4f} {tc:11.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()

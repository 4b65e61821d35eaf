"""Compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_core.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import timeit

from rusforge import _core_py

try:
    from rusforge import _core_c
except ImportError:  # not built
    _core_c = None


def workloads(rng: random.Random):
    zs = [tuple(rng.randint(-(1 << 20), 1 << 20) for _ in range(4)) for _ in range(2000)]
    pairs = list(zip(zs, zs[1:]))
    even = [(2 * a, 2 * b, 2 * c, 2 * d) for a, b, c, d in zs]
    table = [(p, 0, p * p) for p in (3, 5, 11, 13)] + [(3, 1, 7), (5, 2, 17), (2, 1, 2)]
    xis = [(rng.randint(1, 1 << 28) * 3**4, rng.randint(1, 1 << 20) * 3**4) for _ in range(500)]
    amps = [tuple(rng.randint(-100, 100) for _ in range(4)) for _ in range(16)]
    h = ((0, 0, 0, 1), (0, 0, 0, 1), (0, 0, 0, 1), (0, 0, 0, -1))
    return {
        "zw_mul": lambda m: [m.zw_mul(*a, *b) for a, b in pairs],
        "zw_abs2": lambda m: [m.zw_abs2(*a) for a in zs],
        "zw_div_sqrt2": lambda m: [m.zw_div_sqrt2(*a) for a in even],
        "zw_sqrt2_valuation": lambda m: [m.zw_sqrt2_valuation(*a, 64) for a in even],
        "trial_divide": lambda m: [m.trial_divide(x, y, table) for x, y in xis],
        "apply_1q": lambda m: [m.apply_1q(amps, 4, q, *h) for q in range(4) for _ in range(50)],
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _core_c is None:
        print("compiled extension not built; only the Python timings are shown")
    rng = random.Random(0)
    print(f"{'kernel':<20} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, fn in workloads(rng).items():
        tp = min(timeit.repeat(lambda: fn(_core_py), number=1, repeat=args.repeat)) * 1000
        if _core_c is None:
            print(f"{name:<20} {tp:>10.2f} {'-':>10} {'-':>8}")
            continue
        assert fn(_core_py) == fn(_core_c), name
        tc = min(timeit.repeat(lambda: fn(_core_c), number=1, repeat=args.repeat)) * 1000
        print(f"{name:<20} {tp:>10.2f} {tc:>10.2f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

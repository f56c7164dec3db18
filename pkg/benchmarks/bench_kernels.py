"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--max-log2 20] [--python-max-log2 16] [--repeat 3]

Prints one row per (kernel, n, m) with the best wall time of each backend and
the speedup.  Results are checked for equality on every row.
"""

from __future__ import annotations

import argparse
import time

from sperner_eq import _fallback
from sperner_eq.economy import builtin

try:
    from sperner_eq import _core
except ImportError:  # pragma: no cover
    _core = None


def canon(x):
    return tuple(canon(y) for y in x) if isinstance(x, (list, tuple)) else x


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-log2", type=int, default=20, help="largest m = 2^k for the 1-D walk")
    ap.add_argument("--python-max-log2", type=int, default=16, help="skip the fallback above this size")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _core is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    cases = []
    a, w, s = builtin("skewed").params.float_params
    for k in range(8, args.max_log2 + 1, 2):
        cases.append(("path_follow", 1, 1 << k, (a, w, s), k <= args.python_max_log2))
    a3, w3, s3 = builtin("three_goods").params.float_params
    for k in range(4, min(args.max_log2, 14) + 1, 2):
        cases.append(("path_follow", 2, 1 << k, (a3, w3, s3), k <= min(args.python_max_log2, 10)))
    for m in (96, 192, 384):
        cases.append(("near_equilibria", 2, m, (a3, w3, s3), m <= 192))

    print(f"{'kernel':<16}{'n':>3}{'m':>10}{'cython s':>12}{'python s':>12}{'speedup':>10}")
    for kernel, n, m, (a, w, s), run_py in cases:
        if kernel == "path_follow":
            fast = lambda: _core.cd_path_follow(n, m, a, w, s)
            slow = lambda: _fallback.cd_path_follow(n, m, a, w, s)
        else:
            fast = lambda: _core.cd_near_equilibria(n, m, a, w, s, 0.05)
            slow = lambda: _fallback.cd_near_equilibria(n, m, a, w, s, 0.05)
        tc, rc = best_of(fast, args.repeat)
        if run_py:
            tp, rp = best_of(slow, 1)
            if canon(rc) != canon(rp):
                raise SystemExit(f"backends disagree on {kernel} n={n} m={m}")
            print(f"{kernel:<16}{n:>3}{m:>10}{tc:>12.5f}{tp:>12.5f}{tp / tc:>10.1f}")
        else:
            print(f"{kernel:<16}{n:>3}{m:>10}{tc:>12.5f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()

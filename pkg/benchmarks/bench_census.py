#!/usr/bin/env python3
"""Benchmark the compiled census kernel against the pure-Python fallback.

Runs the increment census of the maximal game for a range of player counts
through both kernels, checks they agree, and prints a timing table with the
speedup.  The compiled kernel is optional at runtime, so this script is the
quickest way to see what the extension buys on a given machine.

Usage: python benchmarks/bench_census.py [--max-m 8] [--repeat 3]
"""

import argparse
import sys
import time

from twoaction import kernel
from twoaction._census_py import census_increment as census_py
from twoaction.game_model import maximal_game


def _time(fn, args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-m", type=int, default=8)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    if kernel.KERNEL != "cython":
        print("compiled kernel not available; nothing to compare", file=sys.stderr)
        return 1

    print(f"{'m':>3} {'compiled (s)':>14} {'python (s)':>14} {'speedup':>9}  equilibria")
    for m in range(1, args.max_m + 1):
        game = maximal_game(m)
        v = list(game.ctuple.v)
        sigma = [[s(i) for i in range(1, m + 1)] for s in game.ctuple.sigma]
        t_fast, fast = _time(kernel.census_increment, (m, v, sigma), args.repeat)
        t_slow, slow = _time(census_py, (m, v, sigma), args.repeat)
        if fast != slow:
            print(f"m={m}: kernel outputs disagree!", file=sys.stderr)
            return 1
        total = sum(fast[1])
        print(f"{m:>3} {t_fast:>14.6f} {t_slow:>14.6f} {t_slow / t_fast:>8.1f}x  {total}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

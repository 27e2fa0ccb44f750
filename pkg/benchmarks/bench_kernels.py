"""Time the compiled and numpy simulation kernels on the same draws.

    python3 benchmarks/bench_kernels.py [--samples N] [--repeat K]

Prints draws per second for each backend and law, the speedup, and the
largest relative difference between the two value arrays.
"""

import argparse
import time

import numpy as np

from perptail import backend
from perptail.rng import stream_key
from perptail.simulate import DEFAULT_EPS_TRUNC, DEFAULT_MAX_TERMS
from perptail.tail_models import (AtomAtOne, GammaExp, LogPower, PowerUniform, RapidNonGamma,
                                  WeibullAtOne)

LAWS = [PowerUniform(1.0), WeibullAtOne(1.0, 2.0), LogPower(1.0, 1.5), GammaExp(), RapidNonGamma(),
        AtomAtOne(0.7, PowerUniform(1.0))]


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = fn()
        best = min(best, time.perf_counter() - t0)
    return best, res


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    names = backend.available_backends()
    if "cython" not in names:
        print("compiled kernel not built; timing the numpy kernel only")
    key = stream_key(2024, 0)
    print(f"{'law':48s} " + " ".join(f"{n + ' draws/s':>16s}" for n in names) + "   speedup  max rel diff")
    for law in LAWS:
        times, vals = {}, {}
        for name in names:
            t, (v, _, _) = best_time(lambda: backend.simulate_block(
                law, 1.0, DEFAULT_EPS_TRUNC, DEFAULT_MAX_TERMS, key, 0, args.samples, name), args.repeat)
            times[name], vals[name] = t, v
        rates = " ".join(f"{args.samples / times[n]:16.3g}" for n in names)
        if len(names) == 2:
            diff = np.max(np.abs(vals["cython"] - vals["python"]) / vals["python"])
            print(f"{str(law):48s} {rates}   {times['python'] / times['cython']:6.1f}x  {diff:.2e}")
        else:
            print(f"{str(law):48s} {rates}")


if __name__ == "__main__":
    main()

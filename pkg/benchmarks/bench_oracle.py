"""Compare the compiled and pure-Python exhaustive-defense kernels.

    python3 benchmarks/bench_oracle.py [--n 16 18 20] [--repeat 3]

Each row times one oracle call (all C(n, b) defense sets scored against an
optimal attacker) and checks that both kernels return the same answer.
"""

import argparse
import time
from math import comb

import numpy as np

from defensibility import ThreatModel, build_system, optimal_defense_bruteforce
from defensibility._backend import available_kernels


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[16, 18, 20])
    parser.add_argument("--a", type=int, default=2)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    kernels = available_kernels()
    if "compiled" not in kernels:
        print("compiled kernel not built; timing pure-Python only")
    rng = np.random.default_rng(args.seed)
    threat = ThreatModel.optimal()
    print(f"{'n':>3} {'b':>3} {'subsets':>9} " + " ".join(f"{k:>12}" for k in kernels) + "  speedup")
    for n in args.n:
        system = build_system([(f"x{i}", float(v)) for i, v in enumerate(rng.lognormal(0, 1.5, n))])
        b = n // 2
        times, answers = {}, {}
        for name, kernel in kernels.items():
            times[name], answers[name] = _time(
                lambda: optimal_defense_bruteforce(system, threat, args.a, b, kernel=kernel), args.repeat)
        if len({(tuple(sorted(al.defended_ids)), v) for al, v in answers.values()}) != 1:
            raise SystemExit(f"kernels disagree at n={n}")
        cols = " ".join(f"{times[k]:>11.3f}s" for k in kernels)
        speed = f"{times['python'] / times['compiled']:7.1f}x" if len(kernels) == 2 else ""
        print(f"{n:>3} {b:>3} {comb(n, b):>9} {cols}  {speed}")


if __name__ == "__main__":
    main()

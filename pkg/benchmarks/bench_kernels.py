"""Compare the compiled and pure-Python kernel backends.

Usage: ``python benchmarks/bench_kernels.py [--repeat N]``. Prints the best
wall time per kernel and backend and the speed-up of the compiled core.
"""
import argparse
import timeit

import numpy as np

from oddsforecast._kernels import available_backends, get_backend


def cases():
    gen = np.random.default_rng(0)
    samples = gen.dirichlet([2.0, 1.0, 1.0], size=200_000)
    inv_p = 1.0 / np.array([0.45, 0.3, 0.3])
    rounds = 200_000
    outcomes = gen.integers(0, 2, rounds)
    bets = np.tile([0.3, 0.7], (rounds, 1))
    inv_q = 1.0 / np.array([0.5, 0.6])
    grid = [(a, b, x) for a in (0.5, 5.5, 55.0) for b in (1.5, 25.0) for x in (0.05, 0.3)]

    return {
        "beta_cf (12 args x 200)": lambda k: [k.beta_cf(a, b, x) for _ in range(200) for a, b, x in grid],
        "mean_max_ratio (2e5 x 3)": lambda k: k.mean_max_ratio(samples, inv_p),
        "argmax_ratio (2e5 x 3)": lambda k: k.argmax_ratio(samples, inv_p),
        "wealth_path linear (2e5)": lambda k: k.wealth_path(outcomes, bets, inv_q, 0.0, False),
        "wealth_path log (2e5)": lambda k: k.wealth_path(outcomes, bets, inv_q, 1.0, True),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; timing the Python backend only")
    print(f"{'kernel':28s}" + "".join(f"{b:>12s}" for b in backends) + ("     speed-up" if len(backends) > 1 else ""))
    for name, fn in cases().items():
        times = []
        for b in backends:
            k = get_backend(b)
            fn(k)
            times.append(min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)))
        row = f"{name:28s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[1]:12.1f}x"
        print(row)


if __name__ == "__main__":
    main()

"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Workloads mirror real use: the nullspace is the recurrence-guessing system for
order 3, degree 9 (40 unknowns) modulo a 62-bit prime, and the sieve runs up to
4n for n = 300 and beyond.
"""

import argparse
import random
import statistics
import time

from pimeasure import _kernels

P = 4611686018427387847  # a prime just below 2**62


def guessing_matrix(rows: int, cols: int, rank: int, seed: int) -> list[list[int]]:
    rng = random.Random(seed)
    left = [[rng.randrange(P) for _ in range(rank)] for _ in range(rows)]
    right = [[rng.randrange(P) for _ in range(cols)] for _ in range(rank)]
    return [[sum(a * b for a, b in zip(row, col)) % P for col in zip(*right)] for row in left]


def timed(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return statistics.median(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _kernels.compiled is None:
        print("compiled kernels not built; only the fallback is timed")
    impls = [("python", _kernels.python)]
    if _kernels.compiled is not None:
        impls.append(("cython", _kernels.compiled))

    cases = []
    for rows, cols in ((50, 40), (120, 100), (250, 200)):
        m = guessing_matrix(rows, cols, cols - 1, seed=rows)
        cases.append((f"nullspace {rows}x{cols}", lambda impl, m=m, c=cols: impl.nullspace_mod(m, c, P)))
    for limit in (1_200, 100_000, 2_000_000):
        cases.append((f"sieve {limit}", lambda impl, lim=limit: impl.sieve(lim)))

    print(f"{'workload':<22}" + "".join(f"{name:>12}" for name, _ in impls) + f"{'speedup':>10}")
    for label, run in cases:
        results = [run(impl) for _, impl in impls]
        if any(r != results[0] for r in results):
            raise SystemExit(f"backends disagree on {label}")
        secs = [timed(lambda impl=impl: run(impl), args.repeat) for _, impl in impls]
        speed = f"{secs[0] / secs[-1]:9.1f}x" if len(secs) > 1 else ""
        print(f"{label:<22}" + "".join(f"{s * 1e3:10.2f}ms" for s in secs) + f" {speed}")


if __name__ == "__main__":
    main()

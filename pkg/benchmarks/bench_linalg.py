"""Time fraction-free row reduction on random integer matrices with both kernels.

    python3 benchmarks/bench_linalg.py [--sizes 20 40 80] [--repeat 3]
"""
from __future__ import annotations

import argparse
import random
import timeit

from chernflow import _elim_py

try:
    from chernflow import _elim
except ImportError:
    _elim = None


def random_matrix(rng: random.Random, n: int, density: float = 0.3) -> list[list[int]]:
    return [[rng.randint(-9, 9) if rng.random() < density else 0 for _ in range(n)] for _ in range(n)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 40, 80])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    kernels = {"python": _elim_py.rref_int}
    if _elim is not None:
        kernels["compiled"] = _elim.rref_int
    else:
        print("compiled kernel not built; timing the pure-Python kernel only")
    print(f"{'n':>5} " + " ".join(f"{k:>12}" for k in kernels) + ("   speedup" if len(kernels) == 2 else ""))
    for n in args.sizes:
        M = random_matrix(rng, n)
        ref = None
        times = {}
        for name, fn in kernels.items():
            res = fn([row[:] for row in M], n, -1)
            if ref is None:
                ref = res
            elif res != ref:
                raise SystemExit(f"kernels disagree at n={n}")
            times[name] = min(timeit.repeat(lambda: fn([row[:] for row in M], n, -1),
                                            number=1, repeat=args.repeat))
        line = f"{n:>5} " + " ".join(f"{times[k]:>11.4f}s" for k in kernels)
        if len(kernels) == 2:
            line += f"   {times['python'] / times['compiled']:>6.1f}x"
        print(line)


if __name__ == "__main__":
    main()

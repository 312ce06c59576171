"""Compare the compiled and pure-Python kernels.

Micro benchmarks call each kernel from both modules on identical inputs.
The end-to-end benchmark runs ``fit_exact`` in child processes, once with
the default backend and once with ``PADICREG_PURE_PYTHON=1``.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--k 14] [--n 3]
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from padicreg import _kernels_py

try:
    from padicreg import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

FIT_SNIPPET = """
import random, time
from padicreg import kernels
from padicreg.solver import Dataset, fit_exact
rng = random.Random(0)
rows = [tuple(rng.randint(-10**{digits}, 10**{digits}) for _ in range({n})) for _ in range({k})]
data = Dataset.from_rows((x, rng.randint(-10**{digits}, 10**{digits})) for x in rows)
best = float("inf")
for _ in range({repeat}):
    t = time.perf_counter()
    fit_exact(data, {p})
    best = min(best, time.perf_counter() - t)
print(kernels.BACKEND, best)
"""


def micro_inputs(rng: random.Random, n: int, digits: int):
    A = [[rng.randint(-10**digits, 10**digits) for _ in range(n)] for _ in range(n)]
    b = [rng.randint(-10**digits, 10**digits) for _ in range(n)]
    vals = [rng.randint(1, 10**digits) * 3 ** rng.randint(0, 60) for _ in range(200)]
    rows = [[rng.randint(-10**digits, 10**digits) for _ in range(n)] for _ in range(50)]
    targets = [rng.randint(-10**digits, 10**digits) for _ in range(50)]
    num = [rng.randint(-10**digits, 10**digits) for _ in range(n + 1)]
    return A, b, vals, rows, targets, num


def bench_micro(args) -> list[tuple[str, float, float | None]]:
    A, b, vals, rows, targets, num = micro_inputs(random.Random(1), args.n + 1, args.digits)

    def cases(mod):
        return {
            "int_valuation x200": lambda: [mod.int_valuation(v, 3) for v in vals],
            f"bareiss_solve {args.n + 1}x{args.n + 1}": lambda: mod.bareiss_solve(A, b),
            "residual_valuations 50 rows": lambda: mod.residual_valuations(num, 7, rows, targets, 3),
        }

    out = []
    py_cases = cases(_kernels_py)
    c_cases = cases(_kernels_c) if _kernels_c else {}
    for name, fn in py_cases.items():
        t_py = min(timeit.repeat(fn, number=200, repeat=args.repeat)) / 200
        t_c = None
        if name in c_cases:
            t_c = min(timeit.repeat(c_cases[name], number=200, repeat=args.repeat)) / 200
        out.append((name, t_py, t_c))
    return out


def bench_fit(args, pure: bool) -> tuple[str, float]:
    env = dict(os.environ)
    env.pop("PADICREG_PURE_PYTHON", None)
    if pure:
        env["PADICREG_PURE_PYTHON"] = "1"
    code = FIT_SNIPPET.format(digits=args.digits, n=args.n, k=args.k, repeat=args.repeat, p=args.prime)
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, t = res.stdout.split()
    return backend, float(t)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--k", type=int, default=14, help="rows in the end-to-end dataset")
    ap.add_argument("--n", type=int, default=3, help="features")
    ap.add_argument("--digits", type=int, default=6, help="decimal digits per coordinate")
    ap.add_argument("-p", "--prime", type=int, default=3)
    args = ap.parse_args(argv)

    if _kernels_c is None:
        print("compiled extension not built; only the pure-Python timings are shown")
    print(f"{'kernel':32s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for name, t_py, t_c in bench_micro(args):
        c_text = f"{t_c * 1e6:10.1f}us" if t_c else f"{'-':>12s}"
        ratio = f"{t_py / t_c:7.2f}x" if t_c else f"{'-':>8s}"
        print(f"{name:32s} {t_py * 1e6:10.1f}us {c_text} {ratio}")

    from math import comb

    label = f"fit_exact k={args.k} n={args.n} ({comb(args.k, args.n + 1)} subsets)"
    py_backend, t_py = bench_fit(args, pure=True)
    c_backend, t_c = bench_fit(args, pure=False)
    if c_backend == py_backend:
        print(f"{label:32s} {t_py * 1e3:10.1f}ms {'-':>12s} {'-':>8s}")
    else:
        print(f"{label:32s} {t_py * 1e3:10.1f}ms {t_c * 1e3:10.1f}ms {t_py / t_c:7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())

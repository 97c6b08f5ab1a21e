"""Time the compiled kernels against the numpy fallback on fixed workloads.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Every workload is first checked for identical output from both backends.
"""
import argparse
import json
import sys
import timeit

import numpy as np

from bcfourier import kernels


def cyclic_sub(Q):
    u = np.arange(Q)
    return (u[:, None] - u[None, :]) % Q


def workloads(rng):
    # (name, kernel, args); sizes mirror transforms over Q_3 and F_2((t))
    out = []
    for P, p, mod, n_in, n_out, batch in [(9, 3, 8, 81, 81, 9), (27, 3, 8, 243, 243, 3), (2, 2, 9, 256, 256, 16)]:
        phi = P - P // p
        src = rng.integers(0, mod, size=(batch, n_in, phi))
        expo = rng.integers(0, P, size=(n_out, n_in))
        out.append((f"dft_axis P={P} n={n_in} batch={batch}", "dft_axis", (src, expo, P, p, mod)))
    for P, p, mod, rows in [(9, 3, 8, 20000), (27, 3, 8, 5000), (25, 5, 4, 5000)]:
        phi = P - P // p
        a = rng.integers(0, mod, size=(rows, phi))
        b = rng.integers(0, mod, size=(rows, phi))
        out.append((f"lambda_mul P={P} rows={rows}", "lambda_mul", (a, b, P, p, mod)))
    for Q, d, P, p, mod in [(9, 2, 9, 3, 8), (16, 2, 4, 2, 9), (27, 1, 27, 3, 8), (27, 2, 9, 3, 8)]:
        phi = P - P // p
        n = Q**d
        f = rng.integers(0, mod, size=(n, phi))
        g = rng.integers(0, mod, size=(n, phi))
        out.append((f"group_convolve Q={Q} d={d} P={P}", "group_convolve", (f, g, cyclic_sub(Q), d, P, p, mod)))
    return out


def best_time(fn, args, repeat):
    timer = timeit.Timer(lambda: fn(*args))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="also write results to this file")
    args = ap.parse_args(argv)

    if kernels.compiled is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1

    rng = np.random.default_rng(args.seed)
    rows = []
    print(f"{'workload':<36} {'python [ms]':>12} {'compiled [ms]':>14} {'speedup':>8}")
    for name, kernel, kargs in workloads(rng):
        slow, fast = getattr(kernels.fallback, kernel), getattr(kernels.compiled, kernel)
        if not np.array_equal(slow(*kargs), fast(*kargs)):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        t_py = best_time(slow, kargs, args.repeat)
        t_c = best_time(fast, kargs, args.repeat)
        rows.append({"workload": name, "python_s": t_py, "compiled_s": t_c, "speedup": t_py / t_c})
        print(f"{name:<36} {t_py * 1e3:>12.3f} {t_c * 1e3:>14.3f} {t_py / t_c:>7.1f}x")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--number 200]

Prints one row per kernel and size with the best-of-``repeat`` time per call
for each backend and the speedup. Only the python backend is timed when the
extension is not built.
"""
import argparse
import timeit

import numpy as np

from qmajor import _pykernels

try:
    from qmajor import _ckernels
except ImportError:
    _ckernels = None


def _doubly(rng, n, terms):
    w = rng.dirichlet(np.ones(terms))
    return sum(wk * np.eye(n)[rng.permutation(n)] for wk in w)


def cases(rng):
    for n in (4, 16, 64):
        a = np.sort(rng.dirichlet(np.ones(n)))[::-1]
        b = np.sort(_doubly(rng, n, 6) @ a)[::-1]
        yield "prefix_slack", n, lambda k, a=a, b=b: k.prefix_slack(a, b, 1e-9)
        yield "hlp_transfer", n, lambda k, a=a, b=b: k.hlp_transfer(a, b, 1e-14)
    for n in (4, 8, 16):
        m = _doubly(rng, n, 2 * n)
        yield "birkhoff_greedy", n, lambda k, m=m: k.birkhoff_greedy(m, 1e-12)
    for dims in ((2, 2), (3, 3, 3), (4, 4, 4)):
        total = int(np.prod(dims))
        g = rng.standard_normal((total, total)) + 1j * rng.standard_normal((total, total))
        rho = np.ascontiguousarray(g @ g.conj().T)
        left, d, right = dims[0], dims[1], total // (dims[0] * dims[1])
        yield "partial_trace_keep", total, lambda k, r=rho, l=left, d=d, q=right: k.partial_trace_keep(r, l, d, q)


def best(fn, kernels, repeat, number):
    return min(timeit.repeat(lambda: fn(kernels), repeat=repeat, number=number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<20}{'n':>6}{'python (us)':>14}{'cython (us)':>14}{'speedup':>10}")
    for name, n, fn in cases(rng):
        t_py = best(fn, _pykernels, args.repeat, args.number) * 1e6
        if _ckernels is None:
            print(f"{name:<20}{n:>6}{t_py:>14.2f}{'-':>14}{'-':>10}")
            continue
        t_cy = best(fn, _ckernels, args.repeat, args.number) * 1e6
        print(f"{name:<20}{n:>6}{t_py:>14.2f}{t_cy:>14.2f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()

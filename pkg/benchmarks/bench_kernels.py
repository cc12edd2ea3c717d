"""Compiled versus pure-Python constraint-search kernel.

Runs the same hom-set problems through both backends, checks that they agree
and prints the timings.  Usage: ``python benchmarks/bench_kernels.py [--repeat N]``.
"""
import argparse
import statistics
import time

from pcfv import kernels
from pcfv import sheaf as sh
from pcfv.laws import curry_counts
from pcfv.site import MonoClass, builtin_sites


def workloads():
    """(label, kernel kwargs) pairs of increasing size."""
    out = []
    for site in ("reflexive", "kpoint"):
        S = builtin_sites()[site]
        M = MonoClass.of(S)
        L1 = sh.lift(sh.terminal_sheaf(S), M)
        LL1 = sh.lift(L1, M)
        P = sh.product(L1, L1)
        LP = sh.lift(P, M)
        PP = sh.product(P, LL1)
        pairs = [(LP, LP), (P, sh.exponential(L1, LP)), (PP, LP), (PP, sh.exponential(L1, LL1))]
        for X, Y in pairs:
            out.append((f"{site}: hom({X.name}, {Y.name})", sh.hom_problem(X, Y)))
    return out


def time_backend(kwargs, backend, repeat):
    samples, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = kernels.count(backend=backend, **kwargs)
        samples.append(time.perf_counter() - t0)
    return result, statistics.median(samples)


def curry_timing(backend, repeat):
    S = builtin_sites()["kpoint"]
    M = MonoClass.of(S)
    L1 = sh.lift(sh.terminal_sheaf(S), M)
    X, Y, Z = L1, L1, sh.lift(L1, M)
    E = sh.exponential(Y, Z)
    saved = kernels.BACKEND
    kernels.BACKEND = backend
    try:
        samples = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            res = curry_counts(X, Y, Z, E)
            samples.append(time.perf_counter() - t0)
    finally:
        kernels.BACKEND = saved
    return res, statistics.median(samples)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels._compiled is None:
        print("compiled kernel not available; only the Python backend can run")
        return 1
    print(f"{'workload':58} {'count':>8} {'cython':>10} {'python':>10} {'speedup':>8}")
    for label, kw in workloads():
        n_c, t_c = time_backend(kw, "cython", args.repeat)
        n_p, t_p = time_backend(kw, "python", args.repeat)
        assert n_c == n_p, f"backends disagree on {label}: {n_c} != {n_p}"
        print(f"{label[:58]:58} {n_c:8d} {t_c * 1e3:8.3f}ms {t_p * 1e3:8.3f}ms {t_p / max(t_c, 1e-9):7.1f}x")
    r_c, t_c = curry_timing("cython", args.repeat)
    r_p, t_p = curry_timing("python", args.repeat)
    assert r_c == r_p
    print(f"{'kpoint: curry counts (L1 x L1 -> LL1)':58} {r_c[0]:8d} "
          f"{t_c * 1e3:8.3f}ms {t_p * 1e3:8.3f}ms {t_p / max(t_c, 1e-9):7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

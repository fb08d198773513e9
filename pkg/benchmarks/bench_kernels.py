"""Compiled vs pure-Python kernels, timed on the arrays real checks hand them.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

from fibmult import kernels
from fibmult.core import multicategory as mc
from fibmult.fincat import tabulate, validate_category
from fibmult.standard import gen_example

NAMES = ("horizontal_closure", "vertical_closure", "associativity_violations")


def capture(run):
    """Run a check once, recording every kernel call's arguments."""
    calls = []
    saved = {n: getattr(kernels, n) for n in NAMES}
    for n in NAMES:
        def rec(*a, _n=n, **kw):
            calls.append((_n, a, kw))
            return saved[_n](*a, **kw)
        setattr(kernels, n, rec)
    try:
        run()
    finally:
        for n, f in saved.items():
            setattr(kernels, n, f)
    return calls


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--limit", type=int, default=10 ** 6, help="violation cap passed to the kernels")
    args = ap.parse_args()
    if kernels.compiled is None:
        raise SystemExit("compiled kernels not built; run pip install -e . --no-build-isolation")
    cases = []
    for name, params, bound in [("terminal", {}, 3), ("ring", {"n": 2}, 3), ("ring", {"n": 3}, 3)]:
        fm = gen_example(name, params, bound)
        for n, a, kw in capture(lambda: mc._closure_violations(fm, set())):
            cases.append((f"{n} {fm.name} ({len(fm.special)} squares)", n, a))
    M = tabulate(gen_example("ring", {"n": 2}, 3).M)
    for n, a, kw in capture(lambda: validate_category(M)):
        cases.append((f"{n} M of ring(Z/2)<=3 ({M.n_arrows()} arrows)", n, a))
    print(f"{'kernel':<58} {'cython s':>9} {'python s':>9} {'speedup':>8}")
    for label, n, a in cases:
        tc, rc = best(lambda: getattr(kernels.compiled, n)(*a, limit=args.limit), args.repeat)
        tp, rp = best(lambda: getattr(kernels.python, n)(*a, limit=args.limit), args.repeat)
        assert list(map(tuple, rc)) == list(map(tuple, rp)), label
        print(f"{label:<58} {tc:9.4f} {tp:9.4f} {tp / max(tc, 1e-9):7.1f}x")


if __name__ == "__main__":
    main()

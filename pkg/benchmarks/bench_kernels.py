#!/usr/bin/env python3
"""Time the compiled coverage kernel against the pure-Python twin.

Two layers: the raw greedy pass on identical integer inputs (parity is
asserted), and the whole two-fold hiring pipeline where the kernel choice
is driven through the DOCHIRE_KERNEL environment variable.
"""

import argparse
import os
import statistics
import time

from dochire.kernels import _RULE_CODES, RULE_FULL_SHARE, RULE_HALF_SHARE, compiled_available
from dochire.kernels import pyimpl
from dochire.mechanisms._market import build_leader_market
from dochire.mechanisms.tbc import run_tbc
from dochire.model import truthful_bids
from dochire.sim import GeneratorConfig, generate_instance


def timeit(fn, repeats):
    """Best and mean wall time over `repeats` calls, in seconds."""
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return min(samples), statistics.mean(samples)


def bench_raw(market, rule, repeats):
    masks = market.masks
    bids = market.bid_nums
    pool = market.all_indices
    code = _RULE_CODES[rule]
    budget = market.budget_num
    n = len(masks)

    def run_py():
        return pyimpl.coverage_greedy_py(masks, bids, pool, code, budget, -1)

    packed = pyimpl.pack_masks(masks, n)

    def run_c():
        from dochire.kernels import _cov

        return _cov.coverage_greedy_packed(packed, bids, pool, code, budget, -1)

    ref = run_py()
    if compiled_available():
        got = run_c()
        assert _flat(got) == _flat(ref), "twins disagree on %s" % rule
    py_best, py_mean = timeit(run_py, repeats)
    if not compiled_available():
        return py_best, py_mean, None, None
    c_best, c_mean = timeit(run_c, repeats)
    return py_best, py_mean, c_best, c_mean


def _flat(raw):
    order, steps, loser, informed, idx = raw
    return (tuple(order), tuple(tuple(s) for s in steps),
            tuple(loser) if loser is not None else None, informed, tuple(idx))


def bench_pipeline(instance, bids, repeats):
    def run_with(mode):
        os.environ["DOCHIRE_KERNEL"] = mode
        try:
            return timeit(lambda: run_tbc(instance, bids), repeats)
        finally:
            os.environ.pop("DOCHIRE_KERNEL", None)

    py_best, py_mean = run_with("python")
    if not compiled_available():
        return py_best, py_mean, None, None
    c_best, c_mean = run_with("compiled")
    return py_best, py_mean, c_best, c_mean


def report(label, py_best, py_mean, c_best, c_mean):
    if c_best is None:
        print("  %-28s python %8.3f ms (mean %8.3f)   compiled: unavailable"
              % (label, py_best * 1e3, py_mean * 1e3))
        return
    print("  %-28s python %8.3f ms   compiled %8.3f ms   speedup %5.1fx"
          % (label, py_best * 1e3, c_best * 1e3, py_best / max(c_best, 1e-9)))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="200,500,1000",
                    help="comma-separated market sizes")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",") if s]
    print("compiled kernel available: %s" % compiled_available())
    for n in sizes:
        config = GeneratorConfig(n=n, seed=args.seed)
        instance = generate_instance(config)
        bids = truthful_bids(instance)
        market = build_leader_market(instance, bids)
        edges = sum(len(v) for v in instance.graph.adjacency.values()) // 2
        print("n=%d (%d edges)" % (n, edges))
        report("greedy half-share (alloc)",
               *bench_raw(market, RULE_HALF_SHARE, args.repeats))
        report("greedy full-share (payment)",
               *bench_raw(market, RULE_FULL_SHARE, args.repeats))
        report("full two-fold run",
               *bench_pipeline(instance, bids, args.repeats))


if __name__ == "__main__":
    main()

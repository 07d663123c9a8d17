#!/usr/bin/env python3
"""Compare the compiled search kernels against the pure-Python twins.

Workloads mirror the hot paths: the admissibility scan (Monte Carlo
permutations of the cyclic order-13 system), the exhaustive order-7
decision tree, the order-12 positional-template search, and the
maximum-packing branch-and-bound.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--perms N]
"""

from __future__ import annotations

import argparse
import itertools
import random
import time

from pstseq import CyclicBase, cyclic_system, kernels, max_disjoint_blocks, random_system

PURE = kernels.pure_module()
COMPILED = kernels.compiled_module()


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def mc_scan(module, handle, perms):
    def run():
        for perm in perms:
            module.inadmissible_scan(handle, perm, True)

    return run


def fano_exhaust(module, handle):
    def run():
        module.decide_search(handle, 10**6, True, ())

    return run


def template_search(module, handle, candidates):
    def run():
        for entries in candidates:
            module.inadmissible_scan(handle, entries, True)

    return run


def packing(module, handle):
    def run():
        module.max_packing(handle, None)

    return run


def template_candidates(system, blocks):
    extras = [p for p in range(12) if all(p not in b for b in blocks)]
    out = []
    for roles in itertools.permutations(blocks):
        p1, p2, p3 = (sorted(b.points) for b in roles)
        for l1 in itertools.permutations(p1):
            for l2 in itertools.permutations(p2):
                for l3 in itertools.permutations(p3):
                    for ll in itertools.permutations(extras):
                        out.append(
                            [
                                l1[0], l1[1], l2[0], l1[2], l2[1], l3[0],
                                l2[2], l3[1], ll[0], l3[2], ll[1], ll[2],
                            ]
                        )
    return out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    parser.add_argument("--perms", type=int, default=10_000, help="Monte Carlo size")
    args = parser.parse_args()

    if COMPILED is None:
        print("compiled extension not available; nothing to compare")
        return 1

    sts13 = cyclic_system(CyclicBase(13, ((0, 1, 4), (0, 2, 7))))
    fano = cyclic_system(CyclicBase(7, ((0, 1, 3),)))
    dense12 = random_system(12, 10, 5)

    rng = random.Random(13)
    perms = []
    for _ in range(args.perms):
        perm = list(range(13))
        rng.shuffle(perm)
        perms.append(perm)
    candidates = template_candidates(dense12, max_disjoint_blocks(dense12).witness)

    workloads = [
        (
            f"admissibility scan, {args.perms} permutations of the order-13 system",
            lambda mod, h: mc_scan(mod, h, perms),
            sts13,
        ),
        ("exhaustive order-7 decision tree", fano_exhaust, fano),
        (
            f"order-12 template search ({len(candidates)} labelings)",
            lambda mod, h: template_search(mod, h, candidates),
            dense12,
        ),
        ("maximum packing on the order-13 system", packing, sts13),
    ]

    print(f"{'workload':<58} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for name, make, system in workloads:
        hp = PURE.prepare(system.n, system.block_masks)
        hc = COMPILED.prepare(system.n, system.block_masks)
        tp = bench(make(PURE, hp), args.repeat)
        tc = bench(make(COMPILED, hc), args.repeat)
        print(f"{name:<58} {tp * 1e3:>8.2f}ms {tc * 1e3:>8.2f}ms {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

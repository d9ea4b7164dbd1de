"""Acceptance gate: seven release criteria, one test (and one verdict
line) per criterion.  Run with ``pytest tests/test_acceptance.py -v``.

Each test prints a ``criterion N: PASS`` line with the measured counts
so a plain ``-s`` run reads as a checklist.
"""

from __future__ import annotations

import json
import math
import random
import time

import numpy as np

from happysolver.dispatch import dispatch, solve_to_record, with_target
from happysolver.kernel import Reduced, kernelize
from happysolver.model import MHE, MHV, Graph, Instance
from happysolver.oracle import solve_brute
from happysolver.partition import (
    PartitionProblem,
    solve_exact,
    solve_k3_split,
    solve_mwp_2n,
    solve_mwp_3n,
)
from happysolver.transforms import (
    subdivide_mhe,
    to_split_mhv,
    to_weighted_complete,
)
from happysolver.treedp import solve_tree_mhe
from helpers import rand_forest_core_instance, rand_instance

SEED = 0xACC
PER_SOLVER = 500


def report(num: int, detail: str) -> None:
    print(f"criterion {num}: PASS  [{detail}]")


def big_forest(rng: random.Random, n_unc: int) -> Instance:
    """Forest-core MHE instance with n_unc uncolored vertices, k=4."""
    n_pre = n_unc // 10
    n = n_unc + n_pre
    edges = []
    for v in range(2, n_unc + 1):
        if rng.random() < 0.9:
            edges.append((rng.randint(max(1, v - 8), v - 1), v))
    pre = {}
    for v in range(n_unc + 1, n + 1):
        pre[v] = rng.randint(1, 4)
        for _ in range(rng.randint(1, 2)):
            edges.append((rng.randint(1, n_unc), v))
    return Instance(Graph(n, sorted(set(edges))), MHE, 4, pre)


def test_criterion_1_oracle_equivalence():
    start = time.perf_counter()
    families = {
        "flow2": lambda rng: rand_instance(rng, k_choices=(2,)),
        "tree": lambda rng: rand_forest_core_instance(rng),
        "kernel": None,  # handled below, needs a target
        "exact": lambda rng: rand_instance(rng),
        "k3": lambda rng: rand_instance(rng, k_choices=(3,)),
        "twdp": lambda rng: rand_instance(rng, n_max=9, p=rng.uniform(0.1, 0.45)),
        "nddiv": lambda rng: rand_instance(rng),
    }
    checked = 0
    for fam_idx, (algo, gen) in enumerate(families.items()):
        rng = random.Random(SEED + fam_idx)
        for trial in range(PER_SOLVER):
            if algo == "kernel":
                inst = rand_instance(rng, variant=MHE)
                opt = solve_brute(inst).happy_weight
                ell = max(1, opt + rng.choice((-1, 0, 0, 1)))
                sol = dispatch(with_target(inst, ell), "kernel")
            else:
                inst = gen(rng)
                opt = solve_brute(inst).happy_weight
                sol = dispatch(inst, algo)
            assert sol.happy_weight == opt, f"{algo} trial {trial}: {sol} != {opt}"
            checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 300, f"oracle-equivalence sweep took {elapsed:.0f}s"
    report(1, f"{checked} instances across 7 solvers, {elapsed:.0f}s")


def test_criterion_2_kernel_bound():
    rng = random.Random(SEED + 20)
    reduced_count = 0
    for _ in range(PER_SOLVER):
        inst = rand_instance(
            rng, n_max=30, variant=MHE, max_uncolored=20, p=rng.uniform(0.08, 0.3)
        )
        total = sum(inst.edge_weight(u, v) for u, v in inst.graph.edges)
        ell = rng.randint(max(1, total // 3), max(2, total))
        outcome = kernelize(with_target(inst, ell))
        if not isinstance(outcome, Reduced):
            continue
        reduced_count += 1
        kern = outcome.kernel
        n_pre = len(kern.precoloring)
        n_unc = kern.graph.n - n_pre
        assert n_pre <= inst.k, f"kernel kept {n_pre} precolored, k={inst.k}"
        assert n_unc <= ell - 1, f"kernel kept {n_unc} uncolored, target was {ell}"
    assert reduced_count >= 80
    report(2, f"{PER_SOLVER} pairs, {reduced_count} reduced kernels within bound")


def test_criterion_3_transform_correspondences():
    rng = random.Random(SEED + 30)

    def small_mhe(need_two_colors: bool) -> Instance:
        while True:
            inst = rand_instance(
                rng, n_max=6, k_choices=(2, 3), variant=MHE, weighted=False, n_min=3
            )
            if need_two_colors and len(set(inst.precoloring.values())) < 2:
                continue
            n_unc = len(inst.uncolored())
            if inst.k ** (n_unc + inst.graph.m) <= 40_000:
                return inst

    for _ in range(200):
        inst = small_mhe(need_two_colors=True)
        assert (
            solve_brute(to_split_mhv(inst)).happy_weight
            == solve_brute(inst).happy_weight
        )
    for _ in range(200):
        inst = small_mhe(need_two_colors=False)
        assert (
            solve_brute(subdivide_mhe(inst)).happy_weight
            == inst.graph.m + solve_brute(inst).happy_weight
        )
    for _ in range(200):
        inst = rand_instance(rng, n_max=7, variant=MHE, weighted=False, n_min=2)
        n, m = inst.graph.n, inst.graph.m
        alpha = math.comb(n, 2) - m + 1
        assert (
            solve_brute(to_weighted_complete(inst)).happy_weight // alpha
            == solve_brute(inst).happy_weight
        )
    report(3, "200 split + 200 subdivide + 200 weighted-complete identities")


def test_criterion_4_partition_cross_check():
    rng = random.Random(SEED + 40)

    def exhaustive(problem: PartitionProblem) -> int:
        n = len(problem.ground)
        best = -(10**9)
        def go(i: int, masks: list[int], acc: int) -> None:
            nonlocal best
            if i == n:
                total = acc + sum(
                    int(problem.tables[part][mask])
                    for part, mask in enumerate(masks)
                )
                best = max(best, total)
                return
            for part in range(problem.d):
                masks[part] |= 1 << i
                go(i + 1, masks, acc)
                masks[part] &= ~(1 << i)
        go(0, [0] * problem.d, 0)
        return best

    def eval_parts(problem: PartitionProblem, parts) -> int:
        index = {v: i for i, v in enumerate(problem.ground)}
        total = 0
        for i, part in enumerate(parts):
            mask = 0
            for v in part:
                mask |= 1 << index[v]
            total += int(problem.tables[i][mask])
        return total

    for trial in range(200):
        n = rng.randint(1, 8)
        d = rng.randint(1, 4)
        tables = tuple(
            np.array([rng.randint(0, 20) for _ in range(1 << n)], dtype=np.int64)
            for _ in range(d)
        )
        problem = PartitionProblem(tuple(range(1, n + 1)), d, tables)
        want = exhaustive(problem)
        v2, parts2 = solve_mwp_2n(problem)
        v3, parts3 = solve_mwp_3n(problem)
        assert v2 == want == v3, f"trial {trial}: {v2}/{v3} vs {want}"
        assert eval_parts(problem, parts2) == want
        assert eval_parts(problem, parts3) == want
    report(4, "200 problems, 2^n and 3^n solvers match full enumeration")


def test_criterion_5_scaling_sanity():
    rng = random.Random(SEED + 50)
    n = 24
    edges = [
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if rng.random() < 0.25
    ]
    pre = {v: rng.randint(1, 4) for v in range(21, 25)}
    inst = Instance(Graph(n, edges), MHV, 4, pre)
    start = time.perf_counter()
    solve_exact(inst)
    elapsed = time.perf_counter() - start
    assert elapsed < 120, f"k=4 n'=20 exact solve took {elapsed:.0f}s"

    guesses_checked = 0
    for n_unc in (9, 12, 15):
        pre3 = {v: rng.randint(1, 3) for v in range(n_unc + 1, n_unc + 4)}
        g = Graph(
            n_unc + 3,
            [
                (u, v)
                for u in range(1, n_unc + 4)
                for v in range(u + 1, n_unc + 4)
                if rng.random() < 0.3
            ],
        )
        stats: dict = {}
        solve_k3_split(Instance(g, MHV, 3, pre3), stats=stats)
        bound = 3 * sum(math.comb(n_unc, j) for j in range(n_unc // 3 + 1))
        assert stats["guesses"] <= bound, f"n'={n_unc}: {stats['guesses']} > {bound}"
        guesses_checked += 1
    report(5, f"exact k=4 n'=20 in {elapsed:.1f}s; 3 subset-counter bounds hold")


def test_criterion_6_tree_dp_linearity():
    rng = random.Random(SEED + 60)
    timings = []
    for n_unc in (10_000, 20_000, 40_000):
        inst = big_forest(rng, n_unc)
        best = float("inf")
        for _ in range(3):
            t0 = time.perf_counter()
            solve_tree_mhe(inst)
            best = min(best, time.perf_counter() - t0)
        timings.append(best)
    r1 = timings[1] / timings[0]
    r2 = timings[2] / timings[1]
    assert r1 < 3 and r2 < 3, f"doubling ratios {r1:.2f}, {r2:.2f}"
    report(
        6,
        "forest times "
        + ", ".join(f"{t * 1000:.0f}ms" for t in timings)
        + f"; ratios {r1:.2f}, {r2:.2f}",
    )


def test_criterion_7_determinism():
    rng = random.Random(SEED + 70)
    cases = [
        ("brute", rand_instance(rng)),
        ("complete", Instance(Graph(4, [(u, v) for u in range(1, 5) for v in range(u + 1, 5)]), MHV, 3, {1: 2})),
        ("flow2", rand_instance(rng, k_choices=(2,))),
        ("tree", rand_forest_core_instance(rng)),
        ("kernel", None),
        ("exact", rand_instance(rng)),
        ("exact-2n", rand_instance(rng, weighted=False)),
        ("exact-3n", rand_instance(rng)),
        ("k3", rand_instance(rng, k_choices=(3,))),
        ("nddiv", rand_instance(rng)),
        ("twdp", rand_instance(rng, n_max=8, p=0.3)),
        ("auto", rand_instance(rng)),
    ]
    base = rand_instance(rng, variant=MHE)
    ell = max(1, solve_brute(base).happy_weight)
    cases = [(a, with_target(base, ell) if i is None else i) for a, i in cases]
    for algo, inst in cases:
        blobs = []
        for _ in range(2):
            record = json.loads(solve_to_record(inst, algo).to_json())
            record.pop("elapsedMs")
            blobs.append(json.dumps(record).encode())
        assert blobs[0] == blobs[1], f"{algo} records differ"
    report(7, f"{len(cases)} solver routes byte-stable modulo elapsed time")

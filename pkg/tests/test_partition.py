"""Partition solver tests against an exhaustive assignment oracle."""

import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from happysolver import MHE, MHV, Graph, Instance, solve_brute
from happysolver.model import BudgetExceeded, CapExceeded, ContractError
from happysolver.partition import (
    PartitionProblem,
    reduce_to_mwp,
    solve_exact,
    solve_k3_split,
    solve_mwp_2n,
    solve_mwp_3n,
)

from helpers import rand_instance


def mwp_best(problem: PartitionProblem) -> int:
    """Try every assignment of ground elements to parts."""
    n = len(problem.ground)
    best = None
    for assign in itertools.product(range(problem.d), repeat=n):
        masks = [0] * problem.d
        for j, part in enumerate(assign):
            masks[part] |= 1 << j
        total = sum(int(problem.tables[i][masks[i]]) for i in range(problem.d))
        if best is None or total > best:
            best = total
    return best


def check_partition(problem, value, parts):
    seen = set()
    total = 0
    assert len(parts) == problem.d
    for i, part in enumerate(parts, start=1):
        for v in part:
            assert v not in seen
            seen.add(v)
        total += problem.value(i, part)
    assert seen == set(problem.ground)
    assert total == value


def rand_problem(rng, n_max=8, d_max=4, lo=0, hi=6):
    n = rng.randint(0, n_max)
    d = rng.randint(1, d_max)
    tables = tuple(
        np.array([rng.randint(lo, hi) for _ in range(1 << n)], dtype=np.int64)
        for _ in range(d)
    )
    return PartitionProblem(tuple(range(1, n + 1)), d, tables)


def test_two_part_example():
    # ground {4, 7}; best splits are ({4,7}, {}) worth 5+2 and
    # ({4}, {7}) worth 3+4; the backtrack prefers the smaller top part
    prob = PartitionProblem(
        (4, 7),
        2,
        (np.array([0, 3, 1, 5]), np.array([2, 0, 4, 0])),
    )
    for solver in (solve_mwp_3n, solve_mwp_2n):
        value, parts = solver(prob)
        assert value == 7
        assert parts == ((4, 7), ())


def test_single_part():
    prob = PartitionProblem((1, 2, 3), 1, (np.arange(8, dtype=np.int64),))
    value, parts = solve_mwp_3n(prob)
    assert value == 7
    assert parts == ((1, 2, 3),)
    assert solve_mwp_2n(prob) == (value, parts)


def test_empty_ground():
    prob = PartitionProblem((), 3, tuple(np.array([w]) for w in (2, 5, 1)))
    assert solve_mwp_3n(prob) == (8, ((), (), ()))
    assert solve_mwp_2n(prob) == (8, ((), (), ()))


def test_solvers_match_exhaustive():
    rng = random.Random(20260822)
    for _ in range(120):
        prob = rand_problem(rng, n_max=7)
        want = mwp_best(prob)
        v3, p3 = solve_mwp_3n(prob, use_compiled=False)
        v2, p2 = solve_mwp_2n(prob)
        assert v3 == want
        assert v2 == want
        check_partition(prob, v3, p3)
        check_partition(prob, v2, p2)


def test_compiled_matches_python():
    pytest.importorskip("numba")
    rng = random.Random(7)
    for _ in range(25):
        prob = rand_problem(rng, n_max=6, d_max=3)
        assert solve_mwp_3n(prob, use_compiled=True) == solve_mwp_3n(
            prob, use_compiled=False
        )


def test_negative_values():
    rng = random.Random(99)
    for _ in range(40):
        prob = rand_problem(rng, n_max=5, d_max=3, lo=-5, hi=5)
        value, parts = solve_mwp_3n(prob)
        assert value == mwp_best(prob)
        check_partition(prob, value, parts)
    neg = PartitionProblem((1, 2), 2, (np.array([0, -1, 2, 3]), np.array([0, 1, 1, 2])))
    with pytest.raises(ContractError, match="nonnegative"):
        solve_mwp_2n(neg)


def test_value_accessors():
    prob = PartitionProblem.from_functions(
        (3, 5), [lambda s: len(s), lambda s: 10 * (5 in s)]
    )
    assert prob.value(1, [3, 5]) == 2
    assert prob.value(2, [5]) == 10
    assert prob.value(2, []) == 0
    assert prob.total_bound == 12
    assert prob.value_bound == 10
    with pytest.raises(ContractError, match="ground"):
        prob.index([4])


def test_total_bound_tightens():
    prob = PartitionProblem((1,), 2, (np.array([0, 4]), np.array([0, 3])), total_bound=5)
    assert prob.total_bound == 5
    loose = PartitionProblem((1,), 2, (np.array([0, 4]), np.array([0, 3])), total_bound=99)
    assert loose.total_bound == 7


def test_budget_gate():
    rng = random.Random(5)
    prob = rand_problem(rng, n_max=6, d_max=4)
    while prob.d < 2 or len(prob.ground) < 4:
        prob = rand_problem(rng, n_max=6, d_max=4)
    with pytest.raises(BudgetExceeded, match="budget"):
        solve_mwp_2n(prob, memory_budget=1000)


def test_ground_cap(monkeypatch):
    monkeypatch.setenv("HAPPY_MAX_SUBSETS", "16")
    prob = PartitionProblem(
        tuple(range(1, 7)), 2, (np.zeros(64, np.int64), np.zeros(64, np.int64))
    )
    with pytest.raises(CapExceeded):
        solve_mwp_3n(prob)
    with pytest.raises(CapExceeded):
        solve_mwp_2n(prob)


@settings(deadline=None, max_examples=40)
@given(
    st.integers(0, 4).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(
                st.lists(st.integers(0, 5), min_size=1 << n, max_size=1 << n),
                min_size=1,
                max_size=3,
            ),
        )
    )
)
def test_random_problems_property(data):
    n, raw = data
    tables = tuple(np.array(t, dtype=np.int64) for t in raw)
    prob = PartitionProblem(tuple(range(1, n + 1)), len(tables), tables)
    want = mwp_best(prob)
    assert solve_mwp_3n(prob)[0] == want
    assert solve_mwp_2n(prob)[0] == want


def path3(variant):
    return Instance(Graph(3, [(1, 2), (2, 3)]), variant, 2, {1: 1})


def test_reduce_edge_tables():
    prob = reduce_to_mwp(path3(MHE))
    assert prob.ground == (2, 3)
    assert prob.tables[0].tolist() == [0, 1, 0, 2]
    assert prob.tables[1].tolist() == [0, 0, 0, 1]
    sol = solve_exact(path3(MHE))
    assert sol.happy_weight == 2
    assert sol.coloring == (1, 1, 1)


def test_reduce_vertex_tables():
    prob = reduce_to_mwp(path3(MHV))
    assert prob.tables[0].tolist() == [0, 1, 0, 3]
    assert prob.tables[1].tolist() == [0, 0, 0, 1]
    sol = solve_exact(path3(MHV))
    assert sol.happy_weight == 3
    assert sol.coloring == (1, 1, 1)


def happy_inside(inst, subset, color):
    """Happy weight realized inside one class, straight from the definition."""
    inside = set(subset) | {v for v, c in inst.precoloring.items() if c == color}
    if inst.variant == MHE:
        return sum(
            inst.edge_weight(u, v)
            for u, v in inst.graph.edges
            if u in inside and v in inside
        )
    return sum(
        inst.vertex_weight(v)
        for v in inside
        if all(u in inside for u in inst.graph.neighbors(v))
    )


def test_reduce_tables_match_definition():
    rng = random.Random(41)
    for _ in range(60):
        variant = rng.choice([MHE, MHV])
        inst = rand_instance(
            rng, n_max=6, variant=variant, weighted=rng.random() < 0.5, max_uncolored=6
        )
        prob = reduce_to_mwp(inst)
        free = prob.ground
        for i in range(1, inst.k + 1):
            for mask in range(1 << len(free)):
                subset = [free[b] for b in range(len(free)) if mask >> b & 1]
                assert prob.tables[i - 1][mask] == happy_inside(inst, subset, i)


def test_exact_matches_brute():
    rng = random.Random(12345)
    for _ in range(150):
        variant = rng.choice([MHE, MHV])
        inst = rand_instance(
            rng, n_max=8, variant=variant, weighted=rng.random() < 0.5, max_uncolored=8
        )
        sol = solve_exact(inst)
        assert sol.happy_weight == solve_brute(inst).happy_weight


def test_exact_methods_agree():
    rng = random.Random(777)
    for _ in range(40):
        inst = rand_instance(rng, n_max=7, variant=rng.choice([MHE, MHV]))
        a = solve_exact(inst, method="2n")
        b = solve_exact(inst, method="3n")
        assert a.happy_weight == b.happy_weight
        assert a.algorithm == "exact-2n"
        assert b.algorithm == "exact-3n"
    with pytest.raises(ContractError, match="method"):
        solve_exact(path3(MHE), method="fast")


def test_exact_budget_fallback(monkeypatch):
    monkeypatch.setenv("HAPPY_MWP_MEMORY_BYTES", "50000")
    edges = [(u, v) for u in range(1, 9) for v in range(u + 1, 9)]
    inst = Instance(Graph(8, edges), MHE, 4, {}, {e: 5 for e in edges})
    sol = solve_exact(inst)
    assert sol.algorithm == "exact-3n"
    assert sol.happy_weight == solve_brute(inst).happy_weight


def test_exact_no_uncolored():
    inst = Instance(Graph(2, [(1, 2)]), MHE, 2, {1: 1, 2: 1})
    sol = solve_exact(inst)
    assert sol.happy_weight == 1
    assert sol.coloring == (1, 1)


def test_k3_triangle():
    inst = Instance(Graph(3, [(1, 2), (1, 3), (2, 3)]), MHE, 3, {1: 1, 2: 2})
    stats = {}
    sol = solve_k3_split(inst, stats=stats)
    assert sol.happy_weight == 1
    assert stats["guesses"] == 3


def test_k3_guess_count():
    rng = random.Random(8)
    inst = rand_instance(rng, n_max=9, variant=MHE, k_choices=(3,), max_uncolored=9)
    np_ = len(inst.uncolored())
    stats = {}
    solve_k3_split(inst, stats=stats)
    want = 3 * sum(math.comb(np_, j) for j in range(np_ // 3 + 1))
    assert stats["guesses"] == want


def test_k3_matches_brute():
    rng = random.Random(246)
    for _ in range(120):
        variant = rng.choice([MHE, MHV])
        inst = rand_instance(
            rng,
            n_max=7,
            variant=variant,
            k_choices=(3,),
            weighted=rng.random() < 0.5,
            max_uncolored=7,
        )
        sol = solve_k3_split(inst)
        assert sol.happy_weight == solve_brute(inst).happy_weight


def test_k3_contract_and_cap(monkeypatch):
    inst = Instance(Graph(2, [(1, 2)]), MHE, 2)
    with pytest.raises(ContractError, match="three"):
        solve_k3_split(inst)
    monkeypatch.setenv("HAPPY_MAX_SUBSETS", "2")
    big = Instance(Graph(4, [(1, 2), (3, 4)]), MHE, 3)
    with pytest.raises(CapExceeded):
        solve_k3_split(big)


def test_determinism():
    rng = random.Random(60)
    prob = rand_problem(rng, n_max=6, d_max=3)
    assert solve_mwp_3n(prob) == solve_mwp_3n(prob)
    assert solve_mwp_2n(prob) == solve_mwp_2n(prob)
    inst = rand_instance(random.Random(61), n_max=7, variant=MHV, k_choices=(3,))
    assert solve_k3_split(inst) == solve_k3_split(inst)

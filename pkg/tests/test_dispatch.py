"""Routing tests: each structural fast path claims its instances, every
route agrees with the oracle, and records serialize deterministically."""

from __future__ import annotations

import json
import random

import pytest

from happysolver.dispatch import (
    ResultRecord,
    dispatch,
    make_record,
    solve_to_record,
    with_target,
)
from happysolver.model import (
    MHE,
    MHV,
    CapExceeded,
    ContractError,
    Graph,
    Instance,
    Solution,
    ValidationError,
)
from happysolver.oracle import solve_brute
from helpers import rand_instance

SEED = 0xD15


def complete(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])


def test_routes_complete():
    sol = dispatch(Instance(complete(5), MHV, 3, {1: 2}))
    assert sol.algorithm == "complete"
    assert sol.happy_weight == 5
    sol = dispatch(Instance(complete(5), MHE, 3, {1: 1, 2: 2}))
    assert sol.algorithm == "complete"


def test_routes_k1():
    sol = dispatch(Instance(Graph(3, [(1, 2)]), MHV, 1, {2: 1}))
    assert sol.algorithm == "trivial-k1"
    assert sol.happy_weight == 3


def test_routes_flow2():
    inst = Instance(Graph(4, [(1, 2), (2, 3), (3, 4)]), MHE, 2, {1: 1, 4: 2})
    assert dispatch(inst).algorithm == "flow2-mhe"
    inst = Instance(Graph(4, [(1, 2), (2, 3), (3, 4)]), MHV, 2, {1: 1, 4: 2})
    assert dispatch(inst).algorithm == "flow2-mhv"


def test_routes_tree():
    inst = Instance(Graph(4, [(1, 2), (2, 3), (3, 4)]), MHE, 3, {1: 1, 4: 2})
    assert dispatch(inst).algorithm == "treedp"


def test_routes_kernel_with_target():
    g = Graph(5, [(1, 2), (1, 4), (2, 3), (2, 4), (2, 5), (4, 5)])
    inst = Instance(g, MHE, 3, {5: 3}, target=5)
    sol = dispatch(inst)
    assert sol.algorithm.startswith("kernel+exact")
    assert sol.happy_weight == solve_brute(with_target(inst, None)).happy_weight == 6


def test_routes_k3():
    g = Graph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)])
    inst = Instance(g, MHV, 3, {1: 1})
    assert dispatch(inst).algorithm == "k3-split"


def test_routes_nddiv():
    star = Graph(8, [(1, v) for v in range(2, 9)])
    inst = Instance(star, MHV, 4, {2: 1})
    assert dispatch(inst).algorithm == "nddiv"


def test_routes_twdp():
    g = Graph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)])
    inst = Instance(g, MHV, 4, {1: 1})
    assert dispatch(inst).algorithm == "twdp"


def test_routes_exact_on_wide_graphs():
    rng = random.Random(SEED)
    edges = [
        (u, v)
        for u in range(1, 13)
        for v in range(u + 1, 13)
        if rng.random() < 0.55
    ]
    inst = Instance(Graph(12, edges), MHV, 4, {1: 1, 2: 2})
    sol = dispatch(inst)
    assert sol.algorithm.startswith("exact")
    assert sol.happy_weight == solve_brute(inst).happy_weight


def test_unknown_algorithm():
    with pytest.raises(ValidationError, match="unknown algorithm"):
        dispatch(Instance(Graph(1, []), MHE, 2), "simplex")


def test_explicit_precondition_failures():
    inst = Instance(Graph(3, [(1, 2)]), MHE, 4)
    with pytest.raises(ContractError):
        dispatch(inst, "flow2")
    with pytest.raises(ContractError):
        dispatch(inst, "k3")
    with pytest.raises(ContractError):
        dispatch(inst, "kernel")


def test_explicit_kernel_decided_still_optimal():
    inst = Instance(Graph(3, [(1, 2), (2, 3)]), MHE, 2, {1: 1}, target=2)
    sol = dispatch(inst, "kernel")
    assert sol.happy_weight == 2


def test_auto_matches_brute_and_explicit_brute():
    rng = random.Random(SEED + 1)
    for trial in range(150):
        inst = rand_instance(rng, n_max=9, k_choices=(2, 3, 4))
        auto = dispatch(inst, "auto")
        brute = dispatch(inst, "brute")
        assert auto.happy_weight == brute.happy_weight, f"trial {trial}"


def test_auto_with_targets():
    rng = random.Random(SEED + 2)
    for _ in range(40):
        base = rand_instance(rng, n_max=8, k_choices=(2, 3), variant=MHE)
        opt = solve_brute(base).happy_weight
        for ell in {max(opt, 1), opt + 1}:
            inst = with_target(base, ell)
            sol = dispatch(inst)
            assert sol.happy_weight == opt


def test_empty_graph_both_variants():
    for variant in (MHE, MHV):
        inst = Instance(Graph(0, []), variant, 3)
        assert dispatch(inst).happy_weight == 0


def test_record_round_trip():
    inst = Instance(Graph(3, [(1, 2), (2, 3)]), MHE, 2, {1: 1, 3: 2}, target=1)
    record = solve_to_record(inst)
    data = json.loads(record.to_json())
    assert data["optimum"] == data["happyWeight"] == 1
    assert data["answer"] == "yes"
    assert list(data) == [
        "variant",
        "algorithm",
        "optimum",
        "coloring",
        "happyWeight",
        "elapsedMs",
        "instanceDigest",
        "answer",
    ]
    no = solve_to_record(with_target(inst, 5))
    assert json.loads(no.to_json())["answer"] == "no"


def test_record_determinism_modulo_elapsed():
    rng = random.Random(SEED + 3)
    for _ in range(25):
        inst = rand_instance(rng, n_max=8, k_choices=(2, 3, 4))
        a = solve_to_record(inst)
        b = solve_to_record(inst)
        da = json.loads(a.to_json())
        db = json.loads(b.to_json())
        da.pop("elapsedMs")
        db.pop("elapsedMs")
        assert da == db


def test_record_reevaluation_guard():
    inst = Instance(Graph(2, [(1, 2)]), MHE, 2)
    with pytest.raises(ContractError, match="re-evaluate"):
        make_record(inst, Solution((1, 1), 99, "fake"), 0.0)


def test_cap_exceeded_surfaces(monkeypatch):
    monkeypatch.setenv("HAPPY_MAX_SUBSETS", "4")
    rng = random.Random(SEED + 4)
    edges = [
        (u, v)
        for u in range(1, 31)
        for v in range(u + 1, 31)
        if rng.random() < 0.3
    ]
    inst = Instance(Graph(30, edges), MHV, 4)
    with pytest.raises(CapExceeded):
        dispatch(inst)

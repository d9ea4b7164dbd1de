"""Shared generators and small reference oracles for the test suite."""

from __future__ import annotations

import random

from happysolver.model import MHE, MHV, Graph, Instance


def rand_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if rng.random() < p
    ]
    return Graph(n, edges)


def rand_instance(
    rng: random.Random,
    n_max: int = 10,
    k_choices: tuple[int, ...] = (2, 3, 4),
    variant: str | None = None,
    p: float | None = None,
    weighted: bool | None = None,
    wmax: int = 5,
    n_min: int = 2,
    max_uncolored: int = 9,
    min_precolored: int = 0,
    forest: bool = False,
) -> Instance:
    """Random instance within the oracle-friendly envelope."""
    n = rng.randint(n_min, n_max)
    k = rng.choice(k_choices)
    var = variant or rng.choice((MHE, MHV))
    if forest:
        edges = []
        for v in range(2, n + 1):
            if rng.random() < 0.9:
                edges.append((rng.randint(1, v - 1), v))
        g = Graph(n, edges)
    else:
        g = rand_graph(rng, n, p if p is not None else rng.uniform(0.15, 0.75))
    lo = max(min_precolored, n - max_uncolored)
    n_pre = rng.randint(min(lo, n), n) if lo <= n else n
    pre_vertices = rng.sample(range(1, n + 1), n_pre)
    precoloring = {v: rng.randint(1, k) for v in pre_vertices}
    wanted = weighted if weighted is not None else rng.random() < 0.5
    ew = {}
    vw = {}
    if wanted and var == MHE:
        ew = {e: rng.randint(1, wmax) for e in g.edges}
    if wanted and var == MHV:
        vw = {v: rng.randint(1, wmax) for v in g.vertices()}
    return Instance(
        graph=g,
        variant=var,
        k=k,
        precoloring=precoloring,
        edge_weights=ew,
        vertex_weights=vw,
    )


def is_split_graph(g: Graph) -> bool:
    """Degree-sequence split test: sum of the top m degrees equals
    m(m-1) + sum of the rest, where m = #{i : d_i >= i-1} (1-based,
    degrees sorted descending)."""
    degs = sorted((g.degree(v) for v in g.vertices()), reverse=True)
    m = 0
    for i, d in enumerate(degs, start=1):
        if d >= i - 1:
            m = i
    lhs = sum(degs[:m])
    rhs = m * (m - 1) + sum(degs[m:])
    return lhs == rhs


def rand_forest_core_instance(
    rng: random.Random,
    n_unc_max: int = 7,
    n_pre_max: int = 4,
    k_choices: tuple[int, ...] = (2, 3, 4),
    weighted: bool | None = None,
    wmax: int = 5,
) -> Instance:
    """MHE instance whose uncolored vertices induce a random forest;
    precolored vertices are wired arbitrarily (cycles allowed there)."""
    n_unc = rng.randint(1, n_unc_max)
    n_pre = rng.randint(0, n_pre_max)
    n = n_unc + n_pre
    ids = list(range(1, n + 1))
    rng.shuffle(ids)
    unc = sorted(ids[:n_unc])
    pre_v = sorted(ids[n_unc:])
    edges: set[tuple[int, int]] = set()
    order = list(unc)
    rng.shuffle(order)
    for i, v in enumerate(order):
        if i and rng.random() < 0.85:
            u = rng.choice(order[:i])
            edges.add((min(u, v), max(u, v)))
    for p in pre_v:
        for v in unc:
            if rng.random() < 0.35:
                edges.add((min(p, v), max(p, v)))
        for q in pre_v:
            if q > p and rng.random() < 0.3:
                edges.add((p, q))
    k = rng.choice(k_choices)
    g = Graph(n, sorted(edges))
    wanted = weighted if weighted is not None else rng.random() < 0.5
    ew = {e: rng.randint(1, wmax) for e in g.edges} if wanted else {}
    return Instance(g, MHE, k, {v: rng.randint(1, k) for v in pre_v}, ew)

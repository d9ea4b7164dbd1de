"""Instance transformations, closed-form fast paths, and generators.

The transforms rebuild one problem inside another while preserving the
optimum (possibly shifted by a known constant), so each one doubles as a
cross-validation gadget: solving both sides must agree.  The fast paths
handle complete-graph instances in closed form.
"""

from __future__ import annotations

import random

from .model import (
    MHE,
    MHV,
    ContractError,
    Graph,
    Instance,
    Solution,
    ValidationError,
    make_solution,
)


def _is_complete(g: Graph) -> bool:
    return g.m == g.n * (g.n - 1) // 2


def solve_complete_mhv(inst: Instance) -> Solution:
    """Closed form for the vertex variant on complete graphs.

    Every closed neighborhood is the whole vertex set, so either the
    precoloring fits in one color and everything is happy, or nothing is.
    """
    if inst.variant != MHV:
        raise ContractError("solve_complete_mhv expects the vertex variant")
    if not _is_complete(inst.graph):
        raise ContractError("graph is not complete")
    used = sorted(set(inst.precoloring.values()))
    if len(used) <= 1:
        c = used[0] if used else 1
        coloring = tuple(c for _ in inst.graph.vertices())
    else:
        coloring = tuple(
            inst.precoloring.get(v, 1) for v in inst.graph.vertices()
        )
    sol = make_solution(inst, coloring, "complete")
    want = (
        sum(inst.vertex_weight(v) for v in inst.graph.vertices())
        if len(used) <= 1
        else 0
    )
    if sol.happy_weight != want:
        raise ContractError("closed-form value disagrees with evaluation")
    return sol


def solve_complete_mhe(inst: Instance) -> Solution:
    """Plurality rule for the edge variant when every precolored vertex
    is adjacent to every uncolored one (complete graphs qualify).

    Coloring all uncolored vertices with the most frequent precolor
    keeps every edge among them happy and p edges per uncolored vertex
    into the precolored side, and no coloring beats either count.
    """
    if inst.variant != MHE:
        raise ContractError("solve_complete_mhe expects the edge variant")
    if inst.edge_weights:
        raise ContractError("solve_complete_mhe expects unit edge weights")
    pre = inst.precoloring
    unc = [v for v in inst.graph.vertices() if v not in pre]
    for u in unc:
        for v in pre:
            if not inst.graph.has_edge(u, v):
                raise ContractError(
                    f"precolored vertex {v} is not adjacent to uncolored {u}"
                )
    counts: dict[int, int] = {}
    for c in pre.values():
        counts[c] = counts.get(c, 0) + 1
    p = max(counts.values(), default=0)
    best_color = min((c for c, m in counts.items() if m == p), default=1)
    fixed = sum(
        1 for u, v in inst.graph.edges if u in pre and v in pre and pre[u] == pre[v]
    )
    inner = sum(1 for u, v in inst.graph.edges if u not in pre and v not in pre)
    coloring = tuple(pre.get(v, best_color) for v in inst.graph.vertices())
    sol = make_solution(inst, coloring, "complete")
    if sol.happy_weight != fixed + p * len(unc) + inner:
        raise ContractError("closed-form value disagrees with evaluation")
    return sol


def _require_unweighted_mhe(inst: Instance, what: str) -> None:
    if inst.variant != MHE:
        raise ContractError(f"{what} expects the edge variant")
    if inst.edge_weights:
        raise ContractError(f"{what} expects unit edge weights")


def to_split_mhv(inst: Instance) -> Instance:
    """Edge variant on G becomes the vertex variant on a split graph.

    Vertex copies form a clique holding two clashing precolors, so only
    the degree-two edge vertices can be happy, one per happy edge of G.
    """
    _require_unweighted_mhe(inst, "to_split_mhv")
    if len(set(inst.precoloring.values())) < 2:
        raise ContractError("need precolored vertices in two distinct colors")
    g = inst.graph
    n = g.n
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    for i, (u, v) in enumerate(g.edges):
        ev = n + 1 + i
        edges.append((u, ev))
        edges.append((v, ev))
    return Instance(
        Graph(n + g.m, edges), MHV, inst.k, dict(inst.precoloring)
    )


def to_bipartite_mhv(inst: Instance) -> Instance:
    """Edge variant on G becomes the vertex variant on a bipartite graph.

    Like the split construction but without the clique: instead each
    vertex copy rides a four-cycle of three guards precolored 1, 2, 3,
    which can never be happy themselves and spoil the copy.
    """
    _require_unweighted_mhe(inst, "to_bipartite_mhv")
    if inst.k < 3:
        raise ContractError("the guard gadget needs k of at least 3")
    if len(set(inst.precoloring.values())) < 2:
        raise ContractError("need precolored vertices in two distinct colors")
    g = inst.graph
    n = g.n
    edges = []
    pre = dict(inst.precoloring)
    for i, (u, v) in enumerate(g.edges):
        ev = n + 1 + i
        edges.append((u, ev))
        edges.append((v, ev))
    base = n + g.m
    for v in range(1, n + 1):
        s = base + 3 * (v - 1)
        edges += [(v, s + 1), (s + 1, s + 2), (s + 2, s + 3), (v, s + 3)]
        pre[s + 1] = 1
        pre[s + 2] = 2
        pre[s + 3] = 3
    out = Instance(Graph(base + 3 * n, edges), MHV, inst.k, pre)
    assert _is_bipartite(out.graph)
    return out


def subdivide_mhe(inst: Instance) -> Instance:
    """Replace every edge with a two-edge path through a new vertex.

    A happy edge stays worth two in the subdivision and an unhappy one
    worth one, so the optimum shifts by exactly m.
    """
    _require_unweighted_mhe(inst, "subdivide_mhe")
    g = inst.graph
    edges = []
    for i, (u, v) in enumerate(g.edges):
        mid = g.n + 1 + i
        edges.append((u, mid))
        edges.append((mid, v))
    out = Instance(Graph(g.n + g.m, edges), MHE, inst.k, dict(inst.precoloring))
    assert _is_bipartite(out.graph)
    return out


def to_weighted_complete(inst: Instance) -> Instance:
    """Embed an unweighted instance in a complete weighted graph.

    Original edges get weight a = C(n,2) - m + 1 and filler edges weight
    1; all filler happiness together stays below a, so the original
    optimum is the weighted optimum divided by a, rounded down.
    """
    _require_unweighted_mhe(inst, "to_weighted_complete")
    g = inst.graph
    n = g.n
    alpha = n * (n - 1) // 2 - g.m + 1
    weights = {}
    edges = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            edges.append((u, v))
            weights[(u, v)] = alpha if g.has_edge(u, v) else 1
    return Instance(
        Graph(n, edges), MHE, inst.k, dict(inst.precoloring), weights
    )


def _is_bipartite(g: Graph) -> bool:
    side: dict[int, int] = {}
    for start in g.vertices():
        if start in side:
            continue
        side[start] = 0
        stack = [start]
        while stack:
            x = stack.pop()
            for y in g.neighbors(x):
                if y not in side:
                    side[y] = 1 - side[x]
                    stack.append(y)
                elif side[y] == side[x]:
                    return False
    return True


def generate(model: str, seed: int, **params) -> Instance:
    """Reproducible random instance; the same seed gives identical bytes.

    Models: gnp, random-tree, random-split, planted.  Common parameters:
    n, k, variant, precolor_fraction, weighted, wmax; gnp takes p, and
    planted takes p_in/p_out for its hidden partition.
    """
    known = {"gnp", "random-tree", "random-split", "planted"}
    if model not in known:
        raise ValidationError(f"unknown generator model {model!r}")
    n = int(params.pop("n", 10))
    k = int(params.pop("k", 3))
    variant = params.pop("variant", MHE)
    frac = float(params.pop("precolor_fraction", 0.3))
    weighted = bool(params.pop("weighted", False))
    wmax = int(params.pop("wmax", 5))
    p = float(params.pop("p", 0.3))
    p_in = float(params.pop("p_in", 0.7))
    p_out = float(params.pop("p_out", 0.1))
    if params:
        raise ValidationError(f"unknown parameters {sorted(params)}")
    if n < 0 or k < 1 or not 0 <= frac <= 1:
        raise ValidationError("need n >= 0, k >= 1, and a fraction in [0, 1]")
    if variant not in (MHE, MHV):
        raise ValidationError(f"unknown variant {variant!r}")
    rng = random.Random(seed)
    hidden: dict[int, int] = {}
    if model == "gnp":
        edges = [
            (u, v)
            for u in range(1, n + 1)
            for v in range(u + 1, n + 1)
            if rng.random() < p
        ]
    elif model == "random-tree":
        edges = [(rng.randint(1, v - 1), v) for v in range(2, n + 1)]
    elif model == "random-split":
        ids = list(range(1, n + 1))
        rng.shuffle(ids)
        clique = sorted(ids[: rng.randint(0, n)])
        rest = sorted(set(ids) - set(clique))
        edges = [(u, v) for u in clique for v in clique if u < v]
        edges += [
            (min(u, v), max(u, v))
            for u in clique
            for v in rest
            if rng.random() < 0.4
        ]
    else:
        hidden = {v: rng.randint(1, k) for v in range(1, n + 1)}
        edges = [
            (u, v)
            for u in range(1, n + 1)
            for v in range(u + 1, n + 1)
            if rng.random() < (p_in if hidden[u] == hidden[v] else p_out)
        ]
    g = Graph(n, sorted(set(edges)))
    count = round(frac * n)
    chosen = sorted(rng.sample(sorted(g.vertices()), count)) if count else []
    if model == "planted":
        pre = {v: hidden[v] for v in chosen}
    else:
        pre = {v: rng.randint(1, k) for v in chosen}
    ew = {}
    vw = {}
    if weighted and variant == MHE:
        ew = {e: rng.randint(1, wmax) for e in g.edges}
    if weighted and variant == MHV:
        vw = {v: rng.randint(1, wmax) for v in g.vertices()}
    return Instance(g, variant, k, pre, ew, vw)

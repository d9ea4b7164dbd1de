"""Edge-variant DP for instances whose uncolored vertices induce a forest.

Precolored vertices may be wired arbitrarily (to each other and into the
forest); only the subgraph induced by the uncolored vertices has to be
acyclic.  For each forest vertex v and color i the table row gain[v][i]
holds the best happy weight among edges of v's subtree (edges to
precolored neighbors included) when v takes color i:

    leaf:     gain[v][i] = weight of edges to color-i precolored neighbors
    internal: ... + sum over children u of
              max(w(vu) + gain[u][i], max_{j != i} gain[u][j])

The optimum is the happy precolored-precolored weight plus, per
component, the best root row.  Traversal is iterative post-order so deep
paths cannot hit the recursion limit; runtime is O(k (n + m)).
"""

from __future__ import annotations

from .model import MHE, ContractError, Instance, Solution, components, make_solution


def uncolored_forest(inst: Instance) -> tuple[bool, list[list[int]]]:
    """Whether the uncolored vertices induce a forest, plus components."""
    free = set(inst.uncolored())
    comps = components(inst.graph, free)
    edges_inside = sum(
        1 for u, v in inst.graph.edges if u in free and v in free
    )
    is_forest = edges_inside == len(free) - len(comps)
    return is_forest, comps


def solve_tree_mhe(inst: Instance) -> Solution:
    """Exact edge-variant optimum when the uncolored part is a forest."""
    if inst.variant != MHE:
        raise ContractError("solve_tree_mhe handles the edge variant only")
    ok, comps = uncolored_forest(inst)
    if not ok:
        raise ContractError("uncolored vertices do not induce a forest")
    g = inst.graph
    k = inst.k
    pre = inst.precoloring
    free = set(inst.uncolored())

    coloring = [0] * g.n
    for v, c in pre.items():
        coloring[v - 1] = c

    base = sum(
        inst.edge_weight(u, v)
        for u, v in g.edges
        if u in pre and v in pre and pre[u] == pre[v]
    )

    total = base
    for comp in comps:
        total += _solve_component(inst, comp, free, coloring)
    sol = make_solution(inst, coloring, "treedp")
    assert sol.happy_weight == total
    return sol


def _solve_component(inst, comp, free, coloring) -> int:
    g = inst.graph
    k = inst.k
    pre = inst.precoloring
    root = comp[0]  # comp is sorted, lowest index roots the tree

    parent = {root: 0}
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        for u in g.neighbors(v):
            if u in free and u != parent[v]:
                parent[u] = v
                stack.append(u)

    gain = {}
    for v in reversed(order):  # children before parents
        row = [0] * (k + 1)
        for u in g.neighbors(v):
            if u in pre:
                row[pre[u]] += inst.edge_weight(v, u)
        for u in g.neighbors(v):
            if u in free and parent.get(u) == v:
                child = gain[u]
                w = inst.edge_weight(v, u)
                for i in range(1, k + 1):
                    keep = w + child[i]
                    drop = max(c for j, c in enumerate(child[1:], start=1) if j != i) if k > 1 else keep
                    row[i] += keep if keep >= drop else drop
        gain[v] = row

    root_row = gain[root]
    best = max(root_row[1:])
    coloring[root - 1] = root_row.index(best, 1)
    stack = [root]
    while stack:
        v = stack.pop()
        i = coloring[v - 1]
        for u in g.neighbors(v):
            if u in free and parent.get(u) == v:
                child = gain[u]
                w = inst.edge_weight(v, u)
                others = [child[j] for j in range(1, k + 1) if j != i]
                drop = max(others) if others else -1
                if w + child[i] >= drop:
                    coloring[u - 1] = i
                else:
                    want = max(
                        range(1, k + 1),
                        key=lambda j: (child[j] if j != i else -1, -j),
                    )
                    coloring[u - 1] = want
                stack.append(u)
    return best

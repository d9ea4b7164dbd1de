"""Solvers parameterized by neighborhood diversity.

Vertices of the same type (equal neighborhoods outside the pair) are
interchangeable, and some optimum colors every uncolored type class
with a single color.  Merging classes therefore shrinks the instance to
at most t + k*t vertices, which the subset-partition solver finishes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    MHE,
    MHV,
    ContractError,
    Graph,
    Instance,
    Solution,
    make_solution,
)
from .partition import solve_exact


@dataclass(frozen=True)
class TypePartition:
    """Type classes split by precoloring status.

    ``t`` counts the classes before the precolored/uncolored split, so
    ``len(classes)`` is at most ``2 * t``.
    """

    classes: tuple[tuple[int, ...], ...]
    kinds: tuple[str, ...]  # "clique" | "independent"
    status: tuple[str, ...]  # "precolored" | "uncolored"
    t: int


def type_partition(g: Graph, precoloring) -> TypePartition:
    """Coarsest type partition of g, split by precoloring status.

    Same-type non-adjacent vertices share an open neighborhood and
    same-type adjacent vertices share a closed one, so two rounds of
    grouping find every same-type pair.
    """
    parent = {v: v for v in g.vertices()}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    open_groups: dict[frozenset, int] = {}
    closed_groups: dict[frozenset, int] = {}
    for v in g.vertices():
        nb = frozenset(g.neighbors(v))
        if nb in open_groups:
            union(open_groups[nb], v)
        else:
            open_groups[nb] = v
        cl = nb | {v}
        if cl in closed_groups:
            union(closed_groups[cl], v)
        else:
            closed_groups[cl] = v
    raw: dict[int, list[int]] = {}
    for v in g.vertices():
        raw.setdefault(find(v), []).append(v)
    t = len(raw)
    classes = []
    status = []
    for members in sorted(raw.values(), key=min):
        pre = sorted(v for v in members if v in precoloring)
        unc = sorted(v for v in members if v not in precoloring)
        for part, st in ((pre, "precolored"), (unc, "uncolored")):
            if part:
                classes.append(tuple(part))
                status.append(st)
    order = sorted(range(len(classes)), key=lambda i: classes[i][0])
    classes = [classes[i] for i in order]
    status = [status[i] for i in order]
    kinds = [
        "clique" if len(c) < 2 or g.has_edge(c[0], c[1]) else "independent"
        for c in classes
    ]
    return TypePartition(tuple(classes), tuple(kinds), tuple(status), t)


def _merge_groups(tp: TypePartition, precoloring) -> list[list[int]]:
    """Merged-vertex groups: one per uncolored class, one per color used
    inside a precolored class.  Ordered by smallest member."""
    groups: list[list[int]] = []
    for cls, st in zip(tp.classes, tp.status):
        if st == "uncolored":
            groups.append(list(cls))
            continue
        by_color: dict[int, list[int]] = {}
        for v in cls:
            by_color.setdefault(precoloring[v], []).append(v)
        groups.extend(by_color[c] for c in sorted(by_color))
    groups.sort(key=lambda grp: grp[0])
    return groups


def nd_reduce_mhe(inst: Instance, tp: TypePartition) -> tuple[Instance, int]:
    """Merge type classes into single vertices for the edge variant.

    Edges inside a merged group are guaranteed happy and come back as
    the returned constant; edges across groups collapse to one weighted
    edge, so optimum(inst) = optimum(reduced) + constant.
    """
    if inst.variant != MHE:
        raise ContractError("nd_reduce_mhe expects the edge variant")
    groups = _merge_groups(tp, inst.precoloring)
    gid = {v: i + 1 for i, grp in enumerate(groups) for v in grp}
    constant = 0
    cross: dict[tuple[int, int], int] = {}
    for u, v in inst.graph.edges:
        w = inst.edge_weight(u, v)
        a, b = gid[u], gid[v]
        if a == b:
            constant += w
        else:
            key = (min(a, b), max(a, b))
            cross[key] = cross.get(key, 0) + w
    pre = {
        i + 1: inst.precoloring[grp[0]]
        for i, grp in enumerate(groups)
        if grp[0] in inst.precoloring
    }
    reduced = Instance(
        Graph(len(groups), sorted(cross)), MHE, inst.k, pre, cross
    )
    return reduced, constant


def nd_reduce_mhv(inst: Instance, tp: TypePartition) -> Instance:
    """Merge type classes for the vertex variant.

    Merged vertices carry the summed weight of their members; parallel
    edges and self-loops vanish.  The optimum is preserved as is.
    """
    if inst.variant != MHV:
        raise ContractError("nd_reduce_mhv expects the vertex variant")
    groups = _merge_groups(tp, inst.precoloring)
    gid = {v: i + 1 for i, grp in enumerate(groups) for v in grp}
    edges = set()
    for u, v in inst.graph.edges:
        a, b = gid[u], gid[v]
        if a != b:
            edges.add((min(a, b), max(a, b)))
    pre = {
        i + 1: inst.precoloring[grp[0]]
        for i, grp in enumerate(groups)
        if grp[0] in inst.precoloring
    }
    weights = {
        i + 1: sum(inst.vertex_weight(v) for v in grp)
        for i, grp in enumerate(groups)
    }
    return Instance(
        Graph(len(groups), sorted(edges)), MHV, inst.k, pre, {}, weights
    )


def solve_nd(inst: Instance) -> Solution:
    """Type-merge reduction followed by the exact partition solver."""
    tp = type_partition(inst.graph, inst.precoloring)
    if inst.variant == MHE:
        reduced, constant = nd_reduce_mhe(inst, tp)
    else:
        reduced = nd_reduce_mhv(inst, tp)
        constant = 0
    sub = solve_exact(reduced)
    groups = _merge_groups(tp, inst.precoloring)
    colors = [0] * inst.graph.n
    for i, grp in enumerate(groups):
        for v in grp:
            colors[v - 1] = sub.coloring[i]
    sol = make_solution(inst, tuple(colors), "nddiv")
    if sol.happy_weight != sub.happy_weight + constant:
        raise ContractError("merged optimum did not lift back exactly")
    return sol

"""Two-color solvers via blocking-flow max flow / min cut.

With k = 2 the edge variant reduces to a minimum s-t edge cut after
merging the two color classes into terminals, and the vertex variant to
a minimum vertex cut in the distance-<=2 graph separating the closed
neighborhoods of the two classes.  Both run in polynomial time.
"""

from __future__ import annotations

from collections import deque

from .model import (
    MHE,
    MHV,
    ContractError,
    Instance,
    Solution,
    make_solution,
)


class FlowNetwork:
    """Directed flow network over arbitrary hashable node names."""

    def __init__(self):
        self.index: dict = {}
        self.names: list = []
        # arcs as parallel lists: to, capacity, index of reverse arc
        self.head: list[list[int]] = []
        self.to: list[int] = []
        self.cap: list[int] = []

    def node(self, name) -> int:
        if name not in self.index:
            self.index[name] = len(self.names)
            self.names.append(name)
            self.head.append([])
        return self.index[name]

    def add_arc(self, u, v, capacity: int) -> None:
        a, b = self.node(u), self.node(v)
        self.head[a].append(len(self.to))
        self.to.append(b)
        self.cap.append(capacity)
        self.head[b].append(len(self.to))
        self.to.append(a)
        self.cap.append(0)

    def add_undirected(self, u, v, capacity: int) -> None:
        a, b = self.node(u), self.node(v)
        self.head[a].append(len(self.to))
        self.to.append(b)
        self.cap.append(capacity)
        self.head[b].append(len(self.to))
        self.to.append(a)
        self.cap.append(capacity)


def max_flow(net: FlowNetwork, s, t) -> tuple[int, set[tuple]]:
    """Dinic blocking flows.  Returns (flow value, min cut arc set).

    The cut set contains original (u, v) node-name pairs of saturated
    arcs crossing from the source side of the residual graph; its total
    capacity equals the flow value.
    """
    src, sink = net.node(s), net.node(t)
    to, cap, head = net.to, net.cap, net.head
    nnodes = len(net.names)
    orig_cap = list(cap)
    total = 0
    level = [0] * nnodes
    it = [0] * nnodes

    def bfs() -> bool:
        for i in range(nnodes):
            level[i] = -1
        level[src] = 0
        q = deque([src])
        while q:
            v = q.popleft()
            for e in head[v]:
                if cap[e] > 0 and level[to[e]] < 0:
                    level[to[e]] = level[v] + 1
                    q.append(to[e])
        return level[sink] >= 0

    def augment() -> int:
        # iterative blocking-flow DFS along the level graph
        path: list[int] = []
        v = src
        while True:
            if v == sink:
                bottleneck = min(cap[e] for e in path)
                for e in path:
                    cap[e] -= bottleneck
                    cap[e ^ 1] += bottleneck
                return bottleneck
            advanced = False
            while it[v] < len(head[v]):
                e = head[v][it[v]]
                u = to[e]
                if cap[e] > 0 and level[u] == level[v] + 1:
                    path.append(e)
                    v = u
                    advanced = True
                    break
                it[v] += 1
            if advanced:
                continue
            level[v] = -1  # dead end, prune
            if not path:
                return 0
            e = path.pop()
            v = src if not path else to[path[-1]]
            it[v] += 1

    while bfs():
        it = [0] * nnodes
        while True:
            f = augment()
            if f == 0:
                break
            total += f

    reachable = [False] * nnodes
    reachable[src] = True
    q = deque([src])
    while q:
        v = q.popleft()
        for e in head[v]:
            if cap[e] > 0 and not reachable[to[e]]:
                reachable[to[e]] = True
                q.append(to[e])
    cut = set()
    cut_value = 0
    for v in range(nnodes):
        if not reachable[v]:
            continue
        for e in head[v]:
            if e % 2 == 1 and orig_cap[e] == 0:
                continue  # pure reverse arc
            u = to[e]
            if not reachable[u] and orig_cap[e] > 0:
                cut.add((net.names[v], net.names[u]))
                cut_value += orig_cap[e]
    assert cut_value == total, (cut_value, total)
    return total, cut


def source_side(net: FlowNetwork, s) -> set:
    """Residual-reachable node names after max_flow ran on ``net``."""
    src = net.node(s)
    reachable = {src}
    q = deque([src])
    while q:
        v = q.popleft()
        for e in net.head[v]:
            if net.cap[e] > 0 and net.to[e] not in reachable:
                reachable.add(net.to[e])
                q.append(net.to[e])
    return {net.names[i] for i in reachable}


def _monochromatic(inst: Instance, algorithm: str) -> Solution:
    used = sorted(set(inst.precoloring.values()))
    fill = used[0] if used else 1
    coloring = [inst.precoloring.get(v, fill) for v in inst.graph.vertices()]
    return make_solution(inst, coloring, algorithm)


def solve_mhe_2(inst: Instance) -> Solution:
    """Exact 2-color edge variant: total weight minus a minimum cut."""
    if inst.variant != MHE:
        raise ContractError("solve_mhe_2 handles the edge variant only")
    if inst.k != 2:
        raise ContractError(f"solve_mhe_2 needs k=2, got k={inst.k}")
    side1 = {v for v, c in inst.precoloring.items() if c == 1}
    side2 = {v for v, c in inst.precoloring.items() if c == 2}
    if not side1 or not side2:
        return _monochromatic(inst, "flow2-mhe")

    net = FlowNetwork()
    net.node("s")
    net.node("t")
    merged: dict[tuple, int] = {}
    for u, v in inst.graph.edges:
        w = inst.edge_weight(u, v)
        a = "s" if u in side1 else "t" if u in side2 else u
        b = "s" if v in side1 else "t" if v in side2 else v
        if a == b:
            continue  # always happy, inside one merged side
        if {a, b} == {"s", "t"}:
            continue  # always unhappy, excluded from the cut network
        key = tuple(sorted((a, b), key=repr))
        merged[key] = merged.get(key, 0) + w
    network_total = sum(merged.values())
    for (a, b), w in sorted(merged.items(), key=repr):
        net.add_undirected(a, b, w)
    cut_value, _ = max_flow(net, "s", "t")
    side = source_side(net, "s")

    coloring = []
    for v in inst.graph.vertices():
        if v in inst.precoloring:
            coloring.append(inst.precoloring[v])
        elif v in side:
            coloring.append(1)
        elif v in net.index:
            coloring.append(2)
        else:
            coloring.append(1)  # touched by no cut-network edge
    sol = make_solution(inst, coloring, "flow2-mhe")
    always_happy = sum(
        inst.edge_weight(u, v)
        for u, v in inst.graph.edges
        if _merged_side(u, side1, side2) == _merged_side(v, side1, side2)
        and _merged_side(u, side1, side2) is not None
    )
    assert sol.happy_weight == always_happy + network_total - cut_value
    return sol


def _merged_side(v: int, side1: set, side2: set):
    if v in side1:
        return 1
    if v in side2:
        return 2
    return None


def _dist2_adjacency(inst: Instance) -> list[set[int]]:
    g = inst.graph
    bits = [0] * (g.n + 1)
    for v in g.vertices():
        for u in g.neighbors(v):
            bits[v] |= 1 << u
    close = [set() for _ in range(g.n + 1)]
    for v in g.vertices():
        for u in range(v + 1, g.n + 1):
            if bits[v] >> u & 1 or bits[v] & bits[u]:
                close[v].add(u)
                close[u].add(v)
    return close


def solve_mhv_2(inst: Instance) -> Solution:
    """Exact 2-color vertex variant via a vertex cut in the
    distance-<=2 graph separating the closed neighborhoods of the two
    precolored classes."""
    if inst.variant != MHV:
        raise ContractError("solve_mhv_2 handles the vertex variant only")
    if inst.k != 2:
        raise ContractError(f"solve_mhv_2 needs k=2, got k={inst.k}")
    g = inst.graph
    side1 = {v for v, c in inst.precoloring.items() if c == 1}
    side2 = {v for v, c in inst.precoloring.items() if c == 2}
    if not side1 or not side2:
        return _monochromatic(inst, "flow2-mhv")

    hood1 = set(side1)
    for v in side1:
        hood1.update(g.neighbors(v))
    hood2 = set(side2)
    for v in side2:
        hood2.update(g.neighbors(v))

    close = _dist2_adjacency(inst)
    inf = inst.total_vertex_weight() + 1
    net = FlowNetwork()
    for v in g.vertices():
        net.add_arc(("in", v), ("out", v), inst.vertex_weight(v))
    for v in g.vertices():
        for u in sorted(close[v]):
            net.add_arc(("out", v), ("in", u), inf)
    for v in sorted(hood1):
        net.add_arc("s", ("in", v), inf)
    for v in sorted(hood2):
        net.add_arc(("out", v), "t", inf)
    cut_value, _ = max_flow(net, "s", "t")
    side = source_side(net, "s")
    # v is cut iff its splitting arc crosses the residual boundary; this
    # keeps zero-weight vertices eligible for the cut at no cost
    unhappy = {v for v in g.vertices() if ("in", v) in side and ("out", v) not in side}

    # color the distance-<=2 components left after removing the cut
    color = {}
    for v in sorted(set(g.vertices()) - unhappy):
        if v in color:
            continue
        comp = [v]
        seen = {v}
        touches1 = touches2 = False
        stack = [v]
        while stack:
            x = stack.pop()
            touches1 |= x in hood1
            touches2 |= x in hood2
            for u in close[x]:
                if u not in unhappy and u not in seen:
                    seen.add(u)
                    comp.append(u)
                    stack.append(u)
        assert not (touches1 and touches2), "cut failed to separate"
        side_color = 1 if touches1 else 2 if touches2 else 1
        for x in comp:
            color[x] = side_color
    for v in sorted(unhappy):
        if v in inst.precoloring:
            color[v] = inst.precoloring[v]
        else:
            neighbor_happy = [color[u] for u in g.neighbors(v) if u not in unhappy]
            color[v] = neighbor_happy[0] if neighbor_happy else 1

    coloring = [color[v] for v in g.vertices()]
    sol = make_solution(inst, coloring, "flow2-mhv")
    assert sol.happy_weight == inst.total_vertex_weight() - cut_value
    return sol

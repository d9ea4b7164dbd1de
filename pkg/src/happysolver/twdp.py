"""Dynamic programming over nice tree decompositions.

Decompositions come from a fill-minimizing elimination order and are
verified independently, so the tables only ever rely on validity, not on
the width being optimal.  Happy-edge tables are indexed by bag
colorings; happy-vertex tables additionally carry one bit per bag vertex
noting whether its neighborhood is still monochromatic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .instfile import ParseError
from .model import (
    MHE,
    MHV,
    ContractError,
    Graph,
    Instance,
    Solution,
    make_solution,
)


@dataclass
class TreeDecomposition:
    """Bags indexed by tree nodes; ``edges`` connect node indices."""

    bags: list[tuple[int, ...]]
    edges: list[tuple[int, int]]
    root: int = 0

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1


@dataclass(frozen=True)
class NiceNode:
    kind: str  # "leaf" | "introduce" | "forget" | "join"
    bag: tuple[int, ...]
    vertex: int | None
    children: tuple[int, ...]


@dataclass
class NiceDecomposition:
    """Nodes stored children-before-parents; the root bag is empty."""

    nodes: list[NiceNode]
    root: int

    @property
    def width(self) -> int:
        return max(len(n.bag) for n in self.nodes) - 1


def decompose(g: Graph) -> TreeDecomposition:
    """Tree decomposition from a fill-minimizing elimination order.

    Ties fall to smaller degree, then smaller id.  The result is always
    valid; the width is heuristic.
    """
    if g.n == 0:
        return TreeDecomposition([()], [], 0)
    adj = {v: set(g.neighbors(v)) for v in g.vertices()}
    order: list[int] = []
    vertex_bag: dict[int, tuple[int, ...]] = {}
    while adj:
        best = None
        for v in sorted(adj):
            nb = sorted(adj[v])
            fill = sum(
                1
                for ai in range(len(nb))
                for bi in range(ai + 1, len(nb))
                if nb[bi] not in adj[nb[ai]]
            )
            key = (fill, len(nb), v)
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        nb = sorted(adj[v])
        vertex_bag[v] = tuple(sorted([v] + nb))
        for a in nb:
            for b in nb:
                if a < b and b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
            adj[a].discard(v)
        del adj[v]
        order.append(v)
    pos = {v: i for i, v in enumerate(order)}
    edges = []
    roots = []
    for i, v in enumerate(order):
        rest = [u for u in vertex_bag[v] if u != v]
        if rest:
            edges.append((i, pos[min(rest, key=lambda u: pos[u])]))
        else:
            roots.append(i)
    for extra in roots[:-1]:
        # disconnected pieces hang off the final root; the bags need
        # not intersect
        edges.append((extra, roots[-1]))
    return TreeDecomposition([vertex_bag[v] for v in order], edges, roots[-1])


def _tree_errors(td: TreeDecomposition) -> list[str]:
    errors = []
    nb = len(td.bags)
    if nb == 0:
        return ["decomposition has no bags"]
    if not 0 <= td.root < nb:
        errors.append(f"root {td.root} out of range")
    neigh = [[] for _ in range(nb)]
    ok_edges = True
    for a, b in td.edges:
        if not (0 <= a < nb and 0 <= b < nb):
            errors.append(f"tree edge ({a}, {b}) out of range")
            ok_edges = False
            continue
        neigh[a].append(b)
        neigh[b].append(a)
    if len(td.edges) != nb - 1:
        errors.append(f"tree has {len(td.edges)} edges, expected {nb - 1}")
        ok_edges = False
    if ok_edges and nb > 1:
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in neigh[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != nb:
            errors.append("tree is disconnected")
    occupants: dict[int, list[int]] = {}
    for i, bag in enumerate(td.bags):
        for v in bag:
            occupants.setdefault(v, []).append(i)
    for v, nodes in sorted(occupants.items()):
        nodeset = set(nodes)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            x = stack.pop()
            for y in neigh[x]:
                if y in nodeset and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(nodeset):
            errors.append(f"bags containing vertex {v} are not connected")
    return errors


def verify_decomposition(g: Graph, td: TreeDecomposition) -> list[str]:
    """Independent validity check; returns a list of problems, empty if valid."""
    errors = _tree_errors(td)
    covered = set()
    for bag in td.bags:
        for v in bag:
            if not 1 <= v <= g.n:
                errors.append(f"bag vertex {v} is not a graph vertex")
            covered.add(v)
    missing = [v for v in g.vertices() if v not in covered]
    if missing:
        errors.append(f"vertices {missing} appear in no bag")
    for u, v in g.edges:
        if not any(u in bag and v in bag for bag in td.bags):
            errors.append(f"edge ({u}, {v}) is covered by no bag")
    return errors


def read_td(text: str) -> TreeDecomposition:
    """Parse a decomposition: 's td <bags> <maxsize> <n>' header, 'b'
    bag lines, and 1-based tree edge pairs.  Lines starting with 'c'
    are comments."""
    header = None
    bags: dict[int, tuple[int, ...]] = {}
    edges: list[tuple[int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "s":
                if header is not None:
                    raise ParseError(line_no, "duplicate header")
                if len(parts) != 5 or parts[1] != "td":
                    raise ParseError(line_no, "header must be 's td <bags> <maxsize> <n>'")
                header = (int(parts[2]), int(parts[3]), int(parts[4]))
            elif parts[0] == "b":
                if len(parts) < 2:
                    raise ParseError(line_no, "bag line needs an id")
                i = int(parts[1])
                if i in bags:
                    raise ParseError(line_no, f"duplicate bag {i}")
                bags[i] = tuple(sorted({int(x) for x in parts[2:]}))
            else:
                if len(parts) != 2:
                    raise ParseError(line_no, "expected a tree edge 'i j'")
                edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
        except ValueError:
            raise ParseError(line_no, f"bad integer in {line!r}") from None
    if header is None:
        raise ParseError(0, "missing 's td' header")
    nb = header[0]
    if set(bags) != set(range(1, nb + 1)):
        raise ParseError(0, f"expected bags 1..{nb}")
    return TreeDecomposition([bags[i] for i in range(1, nb + 1)], edges, 0)


def make_nice(td: TreeDecomposition) -> NiceDecomposition:
    """Rewrite a decomposition into leaf/introduce/forget/join nodes.

    The node list is in children-before-parents order and the root bag
    is empty, so a single bottom-up sweep reaches a one-entry table.
    """
    errors = _tree_errors(td)
    if errors:
        raise ContractError("invalid decomposition: " + "; ".join(errors))
    nb = len(td.bags)
    neigh = [[] for _ in range(nb)]
    for a, b in td.edges:
        neigh[a].append(b)
        neigh[b].append(a)
    parent = {td.root: -1}
    dfs_order = [td.root]
    stack = [td.root]
    while stack:
        x = stack.pop()
        for y in neigh[x]:
            if y not in parent:
                parent[y] = x
                dfs_order.append(y)
                stack.append(y)
    children: dict[int, list[int]] = {i: [] for i in range(nb)}
    for y, x in parent.items():
        if x >= 0:
            children[x].append(y)
    # drop empty-bag leaves so leaf chains always start from a vertex
    alive = set(range(nb))
    changed = True
    while changed:
        changed = False
        for i in sorted(alive):
            kids = [c for c in children[i] if c in alive]
            if not kids and not td.bags[i] and i != td.root:
                alive.discard(i)
                changed = True
    if all(not td.bags[i] for i in alive):
        raise ContractError("decomposition has only empty bags")

    nodes: list[NiceNode] = []

    def emit(kind: str, bag: Iterable[int], vertex: int | None, kids: list[int]) -> int:
        nodes.append(NiceNode(kind, tuple(sorted(bag)), vertex, tuple(kids)))
        return len(nodes) - 1

    def leaf_chain(bag: set[int]) -> int:
        vs = sorted(bag)
        i = emit("leaf", [vs[0]], vs[0], [])
        cur = [vs[0]]
        for v in vs[1:]:
            cur.append(v)
            i = emit("introduce", cur, v, [i])
        return i

    def bridge(idx: int, source: set[int], target: set[int]) -> int:
        cur = set(source)
        i = idx
        for v in sorted(source - target, reverse=True):
            cur.discard(v)
            i = emit("forget", cur, v, [i])
        for v in sorted(target - cur):
            cur.add(v)
            i = emit("introduce", cur, v, [i])
        return i

    built: dict[int, int] = {}
    for nd_i in reversed(dfs_order):
        if nd_i not in alive:
            continue
        bag = set(td.bags[nd_i])
        kids = [c for c in children[nd_i] if c in alive]
        if not kids:
            if not bag:
                raise ContractError("empty leaf bag at the root")
            built[nd_i] = leaf_chain(bag)
            continue
        shaped = [bridge(built[c], set(td.bags[c]), bag) for c in kids]
        acc = shaped[0]
        for nxt in shaped[1:]:
            acc = emit("join", bag, None, [acc, nxt])
        built[nd_i] = acc
    top = bridge(built[td.root], set(td.bags[td.root]), set())
    return NiceDecomposition(nodes, top)


def _check_match(g: Graph, nd: NiceDecomposition) -> None:
    covered: set[int] = set()
    for node in nd.nodes:
        for v in node.bag:
            if not 1 <= v <= g.n:
                raise ContractError(
                    f"decomposition vertex {v} is not in the graph"
                )
        covered.update(node.bag)
    if covered != set(g.vertices()):
        raise ContractError("decomposition does not cover every vertex")
    bags = [set(node.bag) for node in nd.nodes]
    for u, v in g.edges:
        if not any(u in bag and v in bag for bag in bags):
            raise ContractError(f"decomposition covers no bag with edge ({u}, {v})")
    if nd.nodes[nd.root].bag != ():
        raise ContractError("root bag must be empty")


def _mhe_tables(inst: Instance, nd: NiceDecomposition) -> list[dict]:
    g = inst.graph
    k = inst.k
    pre = inst.precoloring

    def allowed(v: int):
        c = pre.get(v)
        return (c,) if c is not None else range(1, k + 1)

    tables: list[dict] = [None] * len(nd.nodes)
    for i, node in enumerate(nd.nodes):
        bag = node.bag
        if node.kind == "leaf":
            t = {(c,): 0 for c in allowed(node.vertex)}
        elif node.kind == "introduce":
            v = node.vertex
            child = nd.nodes[node.children[0]]
            ct = tables[node.children[0]]
            p = bag.index(v)
            nbr = [
                (j, inst.edge_weight(v, u))
                for j, u in enumerate(child.bag)
                if g.has_edge(v, u)
            ]
            t = {}
            for f, val in ct.items():
                for c in allowed(v):
                    gain = sum(w for j, w in nbr if f[j] == c)
                    t[f[:p] + (c,) + f[p:]] = val + gain
        elif node.kind == "forget":
            child = nd.nodes[node.children[0]]
            ct = tables[node.children[0]]
            p = child.bag.index(node.vertex)
            t = {}
            for f, val in ct.items():
                key = f[:p] + f[p + 1 :]
                if t.get(key, -1) < val:
                    t[key] = val
        else:
            t1 = tables[node.children[0]]
            t2 = tables[node.children[1]]
            pairs = [
                (a, b, inst.edge_weight(bag[a], bag[b]))
                for a in range(len(bag))
                for b in range(a + 1, len(bag))
                if g.has_edge(bag[a], bag[b])
            ]
            t = {}
            for f, v1 in t1.items():
                v2 = t2.get(f)
                if v2 is None:
                    continue
                # bag-internal happy edges were counted in both subtrees
                q = sum(w for a, b, w in pairs if f[a] == f[b])
                t[f] = v1 + v2 - q
        assert len(t) <= k ** len(bag)
        tables[i] = t
    return tables


def _mhv_tables(inst: Instance, nd: NiceDecomposition) -> list[dict]:
    g = inst.graph
    k = inst.k
    pre = inst.precoloring

    def allowed(v: int):
        c = pre.get(v)
        return (c,) if c is not None else range(1, k + 1)

    tables: list[dict] = [None] * len(nd.nodes)
    for i, node in enumerate(nd.nodes):
        bag = node.bag
        if node.kind == "leaf":
            t = {((c,), (1,)): 0 for c in allowed(node.vertex)}
        elif node.kind == "introduce":
            v = node.vertex
            child = nd.nodes[node.children[0]]
            ct = tables[node.children[0]]
            p = bag.index(v)
            nbr = [j for j, u in enumerate(child.bag) if g.has_edge(v, u)]
            t = {}
            for (f, bits), val in ct.items():
                for c in allowed(v):
                    vb = 1
                    nb = list(bits)
                    for j in nbr:
                        if f[j] != c:
                            vb = 0
                            nb[j] = 0
                    key = (f[:p] + (c,) + f[p:], tuple(nb[:p]) + (vb,) + tuple(nb[p:]))
                    if t.get(key, -1) < val:
                        t[key] = val
        elif node.kind == "forget":
            v = node.vertex
            child = nd.nodes[node.children[0]]
            ct = tables[node.children[0]]
            p = child.bag.index(v)
            w = inst.vertex_weight(v)
            t = {}
            for (f, bits), val in ct.items():
                gain = w if bits[p] else 0
                key = (f[:p] + f[p + 1 :], bits[:p] + bits[p + 1 :])
                if t.get(key, -1) < val + gain:
                    t[key] = val + gain
        else:
            t1 = tables[node.children[0]]
            t2 = tables[node.children[1]]
            grouped: dict[tuple, list[tuple]] = {}
            for (f, b2), v2 in t2.items():
                grouped.setdefault(f, []).append((b2, v2))
            t = {}
            for (f, b1), v1 in t1.items():
                for b2, v2 in grouped.get(f, ()):
                    # forgotten vertices split between the subtrees, so
                    # values add without correction
                    key = (f, tuple(x & y for x, y in zip(b1, b2)))
                    if t.get(key, -1) < v1 + v2:
                        t[key] = v1 + v2
        assert len(t) <= (2 * k) ** len(bag)
        tables[i] = t
    return tables


def _walk_mhe(inst: Instance, nd: NiceDecomposition, tables: list[dict]) -> list[int]:
    g = inst.graph
    colors = [0] * g.n
    pre = inst.precoloring
    k = inst.k

    def allowed(v: int):
        c = pre.get(v)
        return (c,) if c is not None else range(1, k + 1)

    stack = [(nd.root, ())]
    while stack:
        i, f = stack.pop()
        node = nd.nodes[i]
        val = tables[i][f]
        if node.kind == "leaf":
            continue
        if node.kind == "forget":
            ci = node.children[0]
            p = nd.nodes[ci].bag.index(node.vertex)
            for c in allowed(node.vertex):
                key = f[:p] + (c,) + f[p:]
                if tables[ci].get(key) == val:
                    colors[node.vertex - 1] = c
                    stack.append((ci, key))
                    break
            else:
                raise ContractError("table walk lost the optimum at a forget")
        elif node.kind == "introduce":
            ci = node.children[0]
            p = node.bag.index(node.vertex)
            stack.append((ci, f[:p] + f[p + 1 :]))
        else:
            stack.append((node.children[0], f))
            stack.append((node.children[1], f))
    return colors


def _walk_mhv(inst: Instance, nd: NiceDecomposition, tables: list[dict]) -> list[int]:
    g = inst.graph
    colors = [0] * g.n
    k = inst.k
    pre = inst.precoloring

    def allowed(v: int):
        c = pre.get(v)
        return (c,) if c is not None else range(1, k + 1)

    stack = [(nd.root, ((), ()))]
    while stack:
        i, state = stack.pop()
        node = nd.nodes[i]
        f, bits = state
        val = tables[i][state]
        if node.kind == "leaf":
            continue
        if node.kind == "forget":
            v = node.vertex
            ci = node.children[0]
            p = nd.nodes[ci].bag.index(v)
            w = inst.vertex_weight(v)
            hit = None
            for (cf, cb), cval in sorted(tables[ci].items()):
                if cf[:p] + cf[p + 1 :] != f or cb[:p] + cb[p + 1 :] != bits:
                    continue
                if cval + (w if cb[p] else 0) == val:
                    hit = (cf, cb)
                    break
            if hit is None:
                raise ContractError("table walk lost the optimum at a forget")
            colors[v - 1] = hit[0][p]
            stack.append((ci, hit))
        elif node.kind == "introduce":
            v = node.vertex
            ci = node.children[0]
            child = nd.nodes[ci]
            p = node.bag.index(v)
            nbr = [j for j, u in enumerate(child.bag) if g.has_edge(v, u)]
            hit = None
            for (cf, cb), cval in sorted(tables[ci].items()):
                if cval != val:
                    continue
                for c in allowed(v):
                    vb = 1
                    nb = list(cb)
                    for j in nbr:
                        if cf[j] != c:
                            vb = 0
                            nb[j] = 0
                    key = (
                        cf[:p] + (c,) + cf[p:],
                        tuple(nb[:p]) + (vb,) + tuple(nb[p:]),
                    )
                    if key == state:
                        hit = (cf, cb)
                        break
                if hit:
                    break
            if hit is None:
                raise ContractError("table walk lost the optimum at an introduce")
            stack.append((ci, hit))
        else:
            c1, c2 = node.children
            grouped: dict[tuple, list[tuple]] = {}
            for (cf, cb), cval in sorted(tables[c2].items()):
                grouped.setdefault(cf, []).append((cb, cval))
            hit = None
            for (cf, b1), v1 in sorted(tables[c1].items()):
                if cf != f:
                    continue
                for b2, v2 in grouped.get(cf, ()):
                    if v1 + v2 == val and tuple(x & y for x, y in zip(b1, b2)) == bits:
                        hit = (b1, b2)
                        break
                if hit:
                    break
            if hit is None:
                raise ContractError("table walk lost the optimum at a join")
            stack.append((c1, (f, hit[0])))
            stack.append((c2, (f, hit[1])))
    return colors


def solve_twdp(inst: Instance, nd: NiceDecomposition | None = None) -> Solution:
    """Optimal coloring by bag-table dynamic programming.

    Builds a decomposition when none is supplied.  The table at the
    empty root bag holds the optimum; the witness comes from re-deriving
    each table entry top-down.
    """
    if inst.graph.n == 0:
        return make_solution(inst, (), "twdp")
    if nd is None:
        nd = make_nice(decompose(inst.graph))
    _check_match(inst.graph, nd)
    if inst.variant == MHE:
        tables = _mhe_tables(inst, nd)
        colors = _walk_mhe(inst, nd, tables)
    elif inst.variant == MHV:
        tables = _mhv_tables(inst, nd)
        colors = _walk_mhv(inst, nd, tables)
    else:
        raise ContractError(f"unknown variant {inst.variant!r}")
    root = tables[nd.root]
    if len(root) != 1:
        raise ContractError("root table should have exactly one entry")
    value = next(iter(root.values()))
    if 0 in colors:
        raise ContractError("table walk left a vertex uncolored")
    sol = make_solution(inst, tuple(colors), "twdp")
    if sol.happy_weight != value:
        raise ContractError("table optimum disagrees with the recovered coloring")
    return sol

"""Core data model: graphs, coloring instances, solutions.

Vertices are integers 1..n.  A precoloring maps some vertices to colors
1..k; a full coloring is a sequence of n colors indexed by vertex - 1.
Objectives:

* MHE: an edge is happy iff both endpoints get the same color; the
  objective is the total weight of happy edges.
* MHV: a vertex is happy iff its closed neighborhood is monochromatic;
  the objective is the total weight of happy vertices.

All model objects are immutable after construction and safe to share
between solvers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

MHE = "mhe"
MHV = "mhv"


class HappyError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(HappyError):
    """An instance or coloring violates the format contract."""


class ContractError(HappyError):
    """A solver was invoked outside its precondition."""


class CapExceeded(HappyError):
    """A configured resource cap would be exceeded."""


class BudgetExceeded(CapExceeded):
    """A memory or precision budget would be exceeded (fallback advised)."""


class Graph:
    """Simple undirected graph on vertices 1..n.

    Edges are stored as (min, max) pairs in input order.  Construction
    does not reject self-loops or duplicates; ``validate_instance``
    reports them so malformed input can be diagnosed rather than
    silently repaired.
    """

    __slots__ = ("n", "edges", "_adj", "_edge_set")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        self.n = n
        norm = []
        for u, v in edges:
            if u > v:
                u, v = v, u
            norm.append((u, v))
        self.edges = tuple(norm)
        adj: list[list[int]] = [[] for _ in range(n + 1)]
        for u, v in self.edges:
            if 1 <= u <= n and 1 <= v <= n and u != v:
                adj[u].append(v)
                adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._edge_set = frozenset(self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._edge_set

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and sorted(self.edges) == sorted(other.edges)
        )

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.edges)))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def is_complete(g: Graph) -> bool:
    return g.m == g.n * (g.n - 1) // 2 and len(g._edge_set) == g.m


def is_bipartite(g: Graph) -> bool:
    side = [0] * (g.n + 1)
    for start in g.vertices():
        if side[start]:
            continue
        side[start] = 1
        queue = [start]
        while queue:
            v = queue.pop()
            for u in g.neighbors(v):
                if side[u] == 0:
                    side[u] = -side[v]
                    queue.append(u)
                elif side[u] == side[v]:
                    return False
    return True


def components(g: Graph, subset: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components (sorted vertex lists) of the induced subgraph."""
    allowed = set(subset) if subset is not None else set(g.vertices())
    seen: set[int] = set()
    comps = []
    for start in sorted(allowed):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in g.neighbors(v):
                if u in allowed and u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def induced_edge_count(g: Graph, subset: Iterable[int]) -> int:
    inside = set(subset)
    return sum(1 for u, v in g.edges if u in inside and v in inside)


@dataclass(frozen=True)
class Instance:
    """A happy-coloring instance.

    ``variant`` is ``"mhe"`` or ``"mhv"``.  Weight dicts hold only
    non-unit entries (unit weights are implicit), with edge keys
    normalized to (min, max); helper accessors fill in the defaults.
    ``target`` of None or 0 means plain optimization; a positive target
    switches dispatch into decision mode ("is the optimum >= target?").
    """

    graph: Graph
    variant: str
    k: int
    precoloring: Mapping[int, int] = field(default_factory=dict)
    edge_weights: Mapping[tuple[int, int], int] = field(default_factory=dict)
    vertex_weights: Mapping[int, int] = field(default_factory=dict)
    target: int | None = None

    def __post_init__(self):
        ew = {}
        for (u, v), w in dict(self.edge_weights).items():
            if u > v:
                u, v = v, u
            if w != 1:
                ew[(u, v)] = int(w)
        vw = {v: int(w) for v, w in dict(self.vertex_weights).items() if w != 1}
        object.__setattr__(self, "precoloring", dict(self.precoloring))
        object.__setattr__(self, "edge_weights", ew)
        object.__setattr__(self, "vertex_weights", vw)
        tgt = self.target
        object.__setattr__(self, "target", int(tgt) if tgt else None)

    def edge_weight(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self.edge_weights.get((u, v), 1)

    def vertex_weight(self, v: int) -> int:
        return self.vertex_weights.get(v, 1)

    def uncolored(self) -> list[int]:
        pre = self.precoloring
        return [v for v in self.graph.vertices() if v not in pre]

    def total_edge_weight(self) -> int:
        return sum(self.edge_weight(u, v) for u, v in self.graph.edges)

    def total_vertex_weight(self) -> int:
        return sum(self.vertex_weight(v) for v in self.graph.vertices())

    def is_weighted(self) -> bool:
        if self.variant == MHE:
            return bool(self.edge_weights)
        return bool(self.vertex_weights)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.variant == other.variant
            and self.k == other.k
            and dict(self.precoloring) == dict(other.precoloring)
            and dict(self.edge_weights) == dict(other.edge_weights)
            and dict(self.vertex_weights) == dict(other.vertex_weights)
            and self.target == other.target
        )

    def __hash__(self) -> int:
        return hash((self.graph, self.variant, self.k, frozenset(self.precoloring.items())))


@dataclass(frozen=True)
class Solution:
    """A full coloring together with its evaluated objective."""

    coloring: tuple[int, ...]
    happy_weight: int
    algorithm: str


def validate_instance(inst: Instance) -> list[str]:
    """Return a list of violation messages; empty means valid."""
    g = inst.graph
    out = []
    if g.n < 0:
        out.append(f"vertex count {g.n} is negative")
    if inst.variant not in (MHE, MHV):
        out.append(f"unknown variant {inst.variant!r}")
    if inst.k < 1:
        out.append(f"color count k={inst.k} must be at least 1")
    seen = set()
    for u, v in g.edges:
        if u == v:
            out.append(f"self-loop at vertex {u}")
            continue
        if not (1 <= u <= g.n and 1 <= v <= g.n):
            out.append(f"edge ({u}, {v}) has endpoint outside 1..{g.n}")
            continue
        if (u, v) in seen:
            out.append(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
    for v, c in sorted(inst.precoloring.items()):
        if not (1 <= v <= g.n):
            out.append(f"precolored vertex {v} outside 1..{g.n}")
        if not (1 <= c <= inst.k):
            out.append(f"vertex {v} precolored {c} outside 1..{inst.k}")
    for (u, v), w in sorted(inst.edge_weights.items()):
        if (u, v) not in g._edge_set:
            out.append(f"weight on missing edge ({u}, {v})")
        if w < 1:
            out.append(f"edge ({u}, {v}) weight {w} must be >= 1")
    for v, w in sorted(inst.vertex_weights.items()):
        if not (1 <= v <= g.n):
            out.append(f"weight on missing vertex {v}")
        if w < 1:
            out.append(f"vertex {v} weight {w} must be >= 1")
    if inst.variant == MHE and inst.vertex_weights:
        out.append("vertex weights are meaningless for the edge variant")
    if inst.variant == MHV and inst.edge_weights:
        out.append("edge weights are meaningless for the vertex variant")
    if inst.target is not None and inst.target < 0:
        out.append(f"target {inst.target} is negative")
    return out


def require_valid(inst: Instance) -> None:
    problems = validate_instance(inst)
    if problems:
        raise ValidationError("; ".join(problems))


def check_coloring(inst: Instance, coloring: Sequence[int]) -> None:
    """Raise ValidationError unless ``coloring`` is a total extension."""
    n = inst.graph.n
    if len(coloring) != n:
        raise ValidationError(f"coloring has {len(coloring)} entries, expected {n}")
    for v in range(1, n + 1):
        c = coloring[v - 1]
        if not (1 <= c <= inst.k):
            raise ValidationError(f"vertex {v} has color {c} outside 1..{inst.k}")
    for v, c in inst.precoloring.items():
        if coloring[v - 1] != c:
            raise ValidationError(
                f"vertex {v} colored {coloring[v - 1]}, conflicts with precolor {c}"
            )


def evaluate_objective(inst: Instance, coloring: Sequence[int]) -> int:
    """Happy weight of a full coloring (validates the coloring first)."""
    check_coloring(inst, coloring)
    return objective_unchecked(inst, coloring)


def objective_unchecked(inst: Instance, coloring: Sequence[int]) -> int:
    g = inst.graph
    if inst.variant == MHE:
        ew = inst.edge_weights
        total = 0
        for e in g.edges:
            u, v = e
            if coloring[u - 1] == coloring[v - 1]:
                total += ew.get(e, 1)
        return total
    total = 0
    for v in g.vertices():
        c = coloring[v - 1]
        if all(coloring[u - 1] == c for u in g.neighbors(v)):
            total += inst.vertex_weight(v)
    return total


def make_solution(inst: Instance, coloring: Sequence[int], algorithm: str) -> Solution:
    """Build a Solution, enforcing that the objective matches the coloring."""
    value = evaluate_objective(inst, coloring)
    return Solution(tuple(int(c) for c in coloring), value, algorithm)

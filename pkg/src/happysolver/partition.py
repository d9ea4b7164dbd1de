"""Exact solvers that route happy coloring through weighted set partition.

The uncolored vertices split into one class per color, and the happy
weight decomposes into a value function per class: edges count when both
endpoints land in the same class, vertices when their closed
neighborhood does.  The resulting maximum weighted partition problem is
solved either by a 3^n submask dynamic program or by a 2^n layered
subset convolution along the value axis, and a k=3 specialization
guesses the smallest class and finishes with the two-color cut solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _mwp_kernel
from .config import enum_cap, ground_cap, mwp_memory_budget
from .flow2 import solve_mhe_2, solve_mhv_2
from .model import (
    MHE,
    MHV,
    BudgetExceeded,
    CapExceeded,
    ContractError,
    Graph,
    Instance,
    Solution,
    make_solution,
)

NEG = -(1 << 60)

# below this ground size the python DP beats the compile overhead
_COMPILED_MIN_GROUND = 14


@dataclass(frozen=True, eq=False)
class PartitionProblem:
    """Maximum weighted partition over a finite ground set.

    ``tables[i]`` gives the value of making subset ``S`` part ``i + 1``,
    indexed by bitmask over ``ground`` in listed order.  ``total_bound``
    is an upper bound on the value of any partition into ``d`` parts; it
    defaults to the sum of the per-part maxima and is never loosened
    beyond that.
    """

    ground: tuple[int, ...]
    d: int
    tables: tuple[np.ndarray, ...]
    total_bound: int | None = None
    value_bound: int = field(init=False)

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ContractError("need at least one part")
        if len(self.tables) != self.d:
            raise ContractError(
                f"expected {self.d} value tables, got {len(self.tables)}"
            )
        size = 1 << len(self.ground)
        norm = []
        for t in self.tables:
            arr = np.ascontiguousarray(np.asarray(t, dtype=np.int64))
            if arr.shape != (size,):
                raise ContractError(
                    f"value table has shape {arr.shape}, expected ({size},)"
                )
            norm.append(arr)
        object.__setattr__(self, "ground", tuple(self.ground))
        object.__setattr__(self, "tables", tuple(norm))
        object.__setattr__(
            self, "value_bound", max(int(np.abs(t).max()) for t in norm)
        )
        cap = sum(int(t.max()) for t in norm)
        if self.total_bound is not None:
            cap = min(cap, int(self.total_bound))
        object.__setattr__(self, "total_bound", cap)

    @property
    def size(self) -> int:
        return 1 << len(self.ground)

    def index(self, subset: Iterable[int]) -> int:
        """Bitmask of a subset given by ground elements."""
        pos = {v: j for j, v in enumerate(self.ground)}
        mask = 0
        for v in subset:
            if v not in pos:
                raise ContractError(f"{v} is not a ground element")
            mask |= 1 << pos[v]
        return mask

    def value(self, part: int, subset: Iterable[int]) -> int:
        """Value of assigning ``subset`` to ``part`` (1-based)."""
        if not 1 <= part <= self.d:
            raise ContractError(f"part {part} out of range 1..{self.d}")
        return int(self.tables[part - 1][self.index(subset)])

    @classmethod
    def from_functions(
        cls,
        ground: Iterable[int],
        fns: Sequence[Callable[[tuple[int, ...]], int]],
        total_bound: int | None = None,
    ) -> "PartitionProblem":
        """Tabulate callables over every subset of ``ground``."""
        ground = tuple(ground)
        n = len(ground)
        size = 1 << n
        tables = []
        for fn in fns:
            arr = np.empty(size, dtype=np.int64)
            for mask in range(size):
                arr[mask] = fn(tuple(ground[j] for j in range(n) if mask >> j & 1))
            tables.append(arr)
        return cls(ground, len(fns), tuple(tables), total_bound)


def _popcounts(size: int) -> np.ndarray:
    pc = np.zeros(size, dtype=np.int64)
    for b in range(size.bit_length() - 1):
        pc[1 << b : 2 << b] = pc[: 1 << b] + 1
    return pc


def reduce_to_mwp(inst: Instance) -> PartitionProblem:
    """Express an instance as weighted partition of its uncolored vertices.

    Part ``i`` scores the happy weight realized inside color class ``i``
    once the guessed subset is colored ``i``; precolored contributions
    live in the tables too (as constants where they do not depend on the
    subset), so the partition optimum equals the instance optimum.
    """
    free = sorted(inst.uncolored())
    if inst.variant == MHE:
        tables = _edge_tables(inst, free)
        cap = inst.total_edge_weight()
    elif inst.variant == MHV:
        tables = _vertex_tables(inst, free)
        cap = inst.total_vertex_weight()
    else:
        raise ContractError(f"unknown variant {inst.variant!r}")
    return PartitionProblem(tuple(free), inst.k, tuple(tables), total_bound=cap)


def _edge_tables(inst: Instance, free: list[int]) -> list[np.ndarray]:
    k = inst.k
    n = len(free)
    pre = inst.precoloring
    # cross[t][m]: weight from free[t] into subset m of free[0..t-1]
    cross = []
    for t in range(n):
        c = np.zeros(1, dtype=np.int64)
        for b in range(t):
            w = inst.edge_weight(free[t], free[b]) if inst.graph.has_edge(free[t], free[b]) else 0
            c = np.concatenate([c, c + w])
        cross.append(c)
    into = [[0] * (k + 1) for _ in range(n)]
    for t, v in enumerate(free):
        for u in inst.graph.neighbors(v):
            col = pre.get(u)
            if col is not None:
                into[t][col] += inst.edge_weight(v, u)
    internal = [0] * (k + 1)
    for u, v in inst.graph.edges:
        cu, cv = pre.get(u), pre.get(v)
        if cu is not None and cu == cv:
            internal[cu] += inst.edge_weight(u, v)
    tables = []
    for i in range(1, k + 1):
        arr = np.array([internal[i]], dtype=np.int64)
        for t in range(n):
            arr = np.concatenate([arr, arr + cross[t] + into[t][i]])
        tables.append(arr)
    return tables


def _vertex_tables(inst: Instance, free: list[int]) -> list[np.ndarray]:
    k = inst.k
    n = len(free)
    size = 1 << n
    pos = {v: j for j, v in enumerate(free)}
    pre = inst.precoloring
    masks = np.arange(size, dtype=np.int64)
    tables = [np.zeros(size, dtype=np.int64) for _ in range(k)]
    for v in inst.graph.vertices():
        w = inst.vertex_weight(v)
        if w == 0:
            continue
        nbrs = inst.graph.neighbors(v)
        pre_cols = {pre[u] for u in nbrs if u in pre}
        req = 0
        for u in nbrs:
            if u in pos:
                req |= 1 << pos[u]
        own = pre.get(v)
        if own is not None:
            # happy only inside its own class, and only if no neighbor
            # is precolored differently
            if pre_cols <= {own}:
                tables[own - 1][(masks & req) == req] += w
            continue
        req |= 1 << pos[v]
        if not pre_cols:
            hit = (masks & req) == req
            for i in range(k):
                tables[i][hit] += w
        elif len(pre_cols) == 1:
            only = next(iter(pre_cols))
            tables[only - 1][(masks & req) == req] += w
    return tables


def solve_mwp_3n(
    problem: PartitionProblem, *, use_compiled: bool | None = None
) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Submask dynamic program over all 3^n (subset, part) splits.

    Handles negative values.  ``use_compiled`` forces the numba kernel
    on or off; by default it engages from ground size 14 up.
    """
    n = len(problem.ground)
    if n > ground_cap():
        raise CapExceeded(
            f"ground set of {n} exceeds the exact solver cap {ground_cap()}"
        )
    size = 1 << n
    need = (problem.d + 1) * size * 8
    if need > mwp_memory_budget():
        raise BudgetExceeded(
            f"DP rows need about {need} bytes, budget {mwp_memory_budget()}"
        )
    stacked = np.ascontiguousarray(np.stack(problem.tables))
    if use_compiled is None:
        use_compiled = (
            _mwp_kernel.submask_layers is not None and n >= _COMPILED_MIN_GROUND
        )
    if use_compiled:
        if _mwp_kernel.submask_layers is None:
            raise ContractError("compiled kernel requested but numba is unavailable")
        g = _mwp_kernel.submask_layers(stacked, np.int64(NEG))
        rows = [g[j] for j in range(problem.d + 1)]
    else:
        rows = _submask_layers_py(stacked)
    value = int(rows[-1][size - 1])
    parts = _recover_partition(problem, rows)
    return value, parts


def _submask_layers_py(stacked: np.ndarray) -> list[np.ndarray]:
    d, size = stacked.shape
    first = np.full(size, NEG, dtype=np.int64)
    first[0] = 0
    rows = [first]
    prev = first.tolist()
    for j in range(d):
        f = stacked[j].tolist()
        cur = [NEG] * size
        for s in range(size):
            best = NEG
            t = s
            while True:
                v = prev[s ^ t] + f[t]
                if v > best:
                    best = v
                if t == 0:
                    break
                t = (t - 1) & s
            cur[s] = best
        rows.append(np.array(cur, dtype=np.int64))
        prev = cur
    return rows


def solve_mwp_2n(
    problem: PartitionProblem, *, memory_budget: int | None = None
) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Layered fast subset convolution along the value axis.

    Requires nonnegative values.  Raises ``BudgetExceeded`` when the
    ranked value tensors would overflow the memory budget or when the
    floating point convolution cannot certify integer counts.
    """
    n = len(problem.ground)
    if n > ground_cap():
        raise CapExceeded(
            f"ground set of {n} exceeds the exact solver cap {ground_cap()}"
        )
    if min(int(t.min()) for t in problem.tables) < 0:
        raise ContractError("subset convolution needs nonnegative values")
    vcap = int(problem.total_bound)
    if max(int(t.max()) for t in problem.tables) > vcap:
        raise ContractError("value table exceeds the stated total bound")
    size = 1 << n
    v1 = vcap + 1
    budget = mwp_memory_budget() if memory_budget is None else memory_budget
    if problem.d >= 2:
        length = 1
        while length < 2 * v1 - 1:
            length <<= 1
        halves = length // 2 + 1
        est = (n + 1) * size * (16 * v1 + 48 * halves + 8 * length)
        est += 4 * size * v1 * 8
        if est > budget:
            raise BudgetExceeded(
                f"subset convolution needs about {est} bytes, budget {budget}"
            )
    first = np.full(size, NEG, dtype=np.int64)
    first[0] = 0
    rows = [first, problem.tables[0].copy()]
    presence = _one_hot(problem.tables[0], v1)
    for j in range(1, problem.d):
        presence = _subset_convolve(presence, _one_hot(problem.tables[j], v1), n)
        rows.append(_max_value(presence))
    value = int(rows[-1][size - 1])
    parts = _recover_partition(problem, rows)
    return value, parts


def _one_hot(table: np.ndarray, v1: int) -> np.ndarray:
    size = table.shape[0]
    out = np.zeros((size, v1), dtype=np.float64)
    out[np.arange(size), table] = 1.0
    return out


def _max_value(presence: np.ndarray) -> np.ndarray:
    vals = np.arange(presence.shape[1], dtype=np.int64)
    out = np.where(presence > 0, vals[None, :], NEG).max(axis=1)
    if int(out.min()) == NEG:
        raise ContractError("a subset lost all achievable values")
    return out


def _subset_convolve(a: np.ndarray, b: np.ndarray, nbits: int) -> np.ndarray:
    """Exact presence table of f(S) = union over T of a[T] + b[S - T].

    Counts ride through a rank-indexed zeta transform and an FFT along
    the value axis; they stay well under 2^53 at budgeted sizes, and the
    rounding residual is checked before counts become presence bits.
    """
    size, v1 = a.shape
    pc = _popcounts(size)
    idx = np.arange(size)
    length = 1
    while length < 2 * v1 - 1:
        length <<= 1
    spectra = []
    for src in (a, b):
        ranked = np.zeros((nbits + 1, size, v1), dtype=np.float64)
        ranked[pc, idx] = src
        for bit in range(nbits):
            view = ranked.reshape(nbits + 1, size >> (bit + 1), 2, (1 << bit) * v1)
            view[:, :, 1] += view[:, :, 0]
        spectra.append(np.fft.rfft(ranked, n=length, axis=2))
        del ranked
    fa, fb = spectra
    del spectra
    fh = np.zeros_like(fa)
    for ra in range(nbits + 1):
        for rb in range(nbits + 1 - ra):
            fh[ra + rb] += fa[ra] * fb[rb]
    del fa, fb
    h = np.ascontiguousarray(np.fft.irfft(fh, n=length, axis=2)[:, :, :v1])
    del fh
    for bit in range(nbits):
        view = h.reshape(nbits + 1, size >> (bit + 1), 2, (1 << bit) * v1)
        view[:, :, 1] -= view[:, :, 0]
    raw = h[pc, idx]
    counts = np.rint(raw)
    if float(np.abs(raw - counts).max()) > 0.25:
        raise BudgetExceeded("convolution counts drifted past the rounding guard")
    return (counts > 0.5).astype(np.float64)


def _recover_partition(
    problem: PartitionProblem, rows: list[np.ndarray]
) -> tuple[tuple[int, ...], ...]:
    # rows[j][S] = best value of covering S with parts 1..j; peel from
    # the top, taking the smallest submask that sustains the optimum
    n = len(problem.ground)
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    remaining = size - 1
    chosen = [0] * problem.d
    for j in range(problem.d, 0, -1):
        subs = masks[(masks & ~remaining) == 0]
        cand = rows[j - 1][remaining ^ subs] + problem.tables[j - 1][subs]
        hits = subs[cand == int(rows[j][remaining])]
        if hits.size == 0:
            raise ContractError("partition backtrack lost the optimum")
        t = int(hits[0])
        chosen[j - 1] = t
        remaining ^= t
    if remaining:
        raise ContractError("partition backtrack did not cover the ground set")
    return tuple(
        tuple(problem.ground[b] for b in range(n) if mask >> b & 1)
        for mask in chosen
    )


def solve_exact(inst: Instance, *, method: str = "auto") -> Solution:
    """Optimal coloring via weighted partition of the uncolored vertices.

    ``method`` picks the partition solver: ``"2n"``, ``"3n"``, or
    ``"auto"``, which tries the convolution and falls back on the
    submask program when the memory budget stops it.
    """
    free = sorted(inst.uncolored())
    if len(free) > ground_cap():
        raise CapExceeded(
            f"{len(free)} uncolored vertices exceed the exact solver cap"
        )
    if not free:
        coloring = tuple(inst.precoloring[v] for v in inst.graph.vertices())
        return make_solution(inst, coloring, "exact-3n" if method == "3n" else "exact-2n")
    problem = reduce_to_mwp(inst)
    if method == "auto":
        try:
            value, parts = solve_mwp_2n(problem)
            algo = "exact-2n"
        except BudgetExceeded:
            value, parts = solve_mwp_3n(problem)
            algo = "exact-3n"
    elif method == "2n":
        value, parts = solve_mwp_2n(problem)
        algo = "exact-2n"
    elif method == "3n":
        value, parts = solve_mwp_3n(problem)
        algo = "exact-3n"
    else:
        raise ContractError(f"unknown method {method!r}")
    coloring = [0] * inst.graph.n
    for v, c in inst.precoloring.items():
        coloring[v - 1] = c
    for i, part in enumerate(parts, start=1):
        for v in part:
            coloring[v - 1] = i
    sol = make_solution(inst, tuple(coloring), algo)
    if sol.happy_weight != value:
        raise ContractError("partition value disagrees with the recovered coloring")
    return sol


def solve_k3_split(inst: Instance, *, stats: dict | None = None) -> Solution:
    """Exact three-color solver that guesses the smallest color class.

    In any coloring some class holds at most a third of the uncolored
    vertices; each guess fixes that class and leaves a two-color
    instance for the cut solver.  Visits 3 * sum of C(n', j) subsets for
    j up to floor(n'/3).
    """
    if inst.k != 3:
        raise ContractError("split solver needs exactly three colors")
    free = sorted(inst.uncolored())
    limit = len(free) // 3
    guesses = 3 * sum(math.comb(len(free), j) for j in range(limit + 1))
    if guesses > enum_cap():
        raise CapExceeded(f"{guesses} subset guesses exceed the enumeration cap")
    classes = {
        i: [v for v, c in inst.precoloring.items() if c == i] for i in (1, 2, 3)
    }
    best_val: int | None = None
    best_col: tuple[int, ...] | None = None
    count = 0
    for color in (1, 2, 3):
        rest = [i for i in (1, 2, 3) if i != color]
        for r in range(limit + 1):
            for extra in combinations(free, r):
                count += 1
                val, coloring = _fixed_class_value(
                    inst, color, extra, classes[color], rest
                )
                if best_val is None or val > best_val:
                    best_val = val
                    best_col = coloring
    if count != guesses:
        raise ContractError("subset guess count drifted")
    if stats is not None:
        stats["guesses"] = count
    return make_solution(inst, best_col, "k3-split")


def _fixed_class_value(
    inst: Instance,
    color: int,
    extra: tuple[int, ...],
    preclass: list[int],
    rest: list[int],
) -> tuple[int, tuple[int, ...]]:
    fixed = set(extra) | set(preclass)
    keep = [v for v in inst.graph.vertices() if v not in fixed]
    index = {v: j for j, v in enumerate(keep, start=1)}
    pre = {}
    for v, c in inst.precoloring.items():
        if v not in fixed:
            pre[index[v]] = 1 if c == rest[0] else 2
    sub_edges = []
    sub_ew = {}
    base = 0
    for u, v in inst.graph.edges:
        if u in fixed and v in fixed:
            if inst.variant == MHE:
                base += inst.edge_weight(u, v)
        elif u not in fixed and v not in fixed:
            e = (index[u], index[v])
            sub_edges.append(e)
            if inst.variant == MHE:
                w = inst.edge_weight(u, v)
                if w != 1:
                    sub_ew[e] = w
    sub_graph = Graph(len(keep), sub_edges)
    if inst.variant == MHE:
        sub = Instance(sub_graph, MHE, 2, pre, sub_ew, {}, None)
        subsol = solve_mhe_2(sub)
    else:
        base = sum(
            inst.vertex_weight(v)
            for v in fixed
            if all(u in fixed for u in inst.graph.neighbors(v))
        )
        # a vertex beside the fixed class can never be happy: weight 0
        sub_vw = {}
        for v in keep:
            if any(u in fixed for u in inst.graph.neighbors(v)):
                sub_vw[index[v]] = 0
            else:
                w = inst.vertex_weight(v)
                if w != 1:
                    sub_vw[index[v]] = w
        sub = Instance(sub_graph, MHV, 2, pre, {}, sub_vw, None)
        subsol = solve_mhv_2(sub)
    coloring = [0] * inst.graph.n
    for v in fixed:
        coloring[v - 1] = color
    for v in keep:
        coloring[v - 1] = rest[subsol.coloring[index[v] - 1] - 1]
    return base + subsol.happy_weight, tuple(coloring)

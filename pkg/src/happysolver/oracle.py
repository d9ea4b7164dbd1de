"""Reference solver: full enumeration over the uncolored vertices.

The oracle tries every extension of the precoloring in lexicographic
order (uncolored vertices in increasing index order, colors 1..k) and
keeps the first coloring attaining the maximum, so ties always resolve
to the lexicographically smallest full coloring.

Enumeration is capped at k^(n') colorings, default 2*10^7.  A chunked
numpy path evaluates larger ranges; it visits candidates in the same
order and keeps the earliest maximum, so both paths agree bit for bit.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .config import enum_cap
from .model import (
    MHE,
    CapExceeded,
    Instance,
    Solution,
    make_solution,
    objective_unchecked,
)

_PY_LIMIT = 4096
_CHUNK = 1 << 18


def solve_brute(inst: Instance, cap: int | None = None) -> Solution:
    """Exact optimum by enumeration; raises CapExceeded past the cap."""
    free = inst.uncolored()
    k = inst.k
    total = k ** len(free)
    limit = cap if cap is not None else enum_cap()
    if total > limit:
        raise CapExceeded(
            f"brute force would enumerate {total} colorings, cap is {limit}"
        )
    if not free:
        base = [0] * inst.graph.n
        for v, c in inst.precoloring.items():
            base[v - 1] = c
        return make_solution(inst, base, "brute")
    if total <= _PY_LIMIT:
        coloring, _ = _enumerate_python(inst, free)
    else:
        coloring, _ = _enumerate_numpy(inst, free, total)
    return make_solution(inst, coloring, "brute")


def _enumerate_python(inst: Instance, free: list[int]) -> tuple[list[int], int]:
    base = [0] * inst.graph.n
    for v, c in inst.precoloring.items():
        base[v - 1] = c
    best_val = -1
    best = None
    for assignment in product(range(1, inst.k + 1), repeat=len(free)):
        for v, c in zip(free, assignment):
            base[v - 1] = c
        val = objective_unchecked(inst, base)
        if val > best_val:
            best_val = val
            best = list(base)
    assert best is not None
    return best, best_val


def _enumerate_numpy(inst: Instance, free: list[int], total: int) -> tuple[list[int], int]:
    g = inst.graph
    k = inst.k
    npos = len(free)
    pos = {v: j for j, v in enumerate(free)}
    pre = inst.precoloring
    best_val = -1
    best_idx = -1
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        digits = []
        for j in range(npos):
            shift = k ** (npos - 1 - j)
            digits.append(((idx // shift) % k).astype(np.int16) + 1)

        def color_of(v: int):
            if v in pre:
                return pre[v]
            return digits[pos[v]]

        obj = np.zeros(stop - start, dtype=np.int64)
        if inst.variant == MHE:
            for u, v in g.edges:
                w = inst.edge_weight(u, v)
                obj += w * (color_of(u) == color_of(v))
        else:
            for v in g.vertices():
                cv = color_of(v)
                happy = np.ones(stop - start, dtype=bool)
                for u in g.neighbors(v):
                    happy &= color_of(u) == cv
                obj += inst.vertex_weight(v) * happy
        local = int(np.argmax(obj))
        val = int(obj[local])
        if val > best_val:
            best_val = val
            best_idx = start + local
    coloring = [0] * g.n
    for v, c in pre.items():
        coloring[v - 1] = c
    rem = best_idx
    for j in range(npos):
        shift = k ** (npos - 1 - j)
        coloring[free[j] - 1] = rem // shift % k + 1
    return coloring, best_val

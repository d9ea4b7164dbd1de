"""Algorithm registry, automatic routing, and result records.

Routing tries the cheapest structure first: closed forms on complete
graphs, cuts for two colors, the forest DP, the kernel when a decision
target is present, then the exponential routes guarded by practical size
estimates, ending at the brute-force oracle.  A route that raises a cap
or budget error falls through to the next one.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace

from .flow2 import solve_mhe_2, solve_mhv_2
from .instfile import instance_digest
from .kernel import Reduced, kernelize, solve_decision
from .model import (
    MHE,
    MHV,
    BudgetExceeded,
    CapExceeded,
    ContractError,
    Instance,
    Solution,
    ValidationError,
    evaluate_objective,
    make_solution,
)
from .nddiv import solve_nd, type_partition
from .oracle import solve_brute
from .partition import solve_exact, solve_k3_split
from .transforms import solve_complete_mhe, solve_complete_mhv
from .treedp import solve_tree_mhe, uncolored_forest
from .twdp import decompose, make_nice, solve_twdp
from .config import enum_cap

# practical ceilings for the exponential routes; hard caps still apply
# inside the solvers themselves
_EXACT_LIMIT = 20
_K3_GUESS_LIMIT = 25_000
_TABLE_LIMIT = 300_000
_DECOMPOSE_LIMIT = 400


def _solve_trivial_k1(inst: Instance) -> Solution:
    return make_solution(inst, [1] * inst.graph.n, "trivial-k1")


def _solve_complete(inst: Instance) -> Solution:
    if inst.variant == MHV:
        return solve_complete_mhv(inst)
    return solve_complete_mhe(inst)


def _solve_flow2(inst: Instance) -> Solution:
    if inst.variant == MHE:
        return solve_mhe_2(inst)
    return solve_mhv_2(inst)


def _solve_kernel(inst: Instance) -> Solution:
    """Kernelize, then solve exactly: the kernel when one is produced,
    the original instance when the rules decide on their own."""
    if inst.target is None:
        raise ContractError("the kernel route needs a decision target")
    outcome = kernelize(inst)
    if isinstance(outcome, Reduced):
        answer, sol = solve_decision(inst)
        return sol
    return solve_exact(inst)


def _solve_exact_2n(inst: Instance) -> Solution:
    return solve_exact(inst, method="2n")


def _solve_exact_3n(inst: Instance) -> Solution:
    return solve_exact(inst, method="3n")


ALGORITHMS = {
    "brute": solve_brute,
    "complete": _solve_complete,
    "flow2": _solve_flow2,
    "tree": solve_tree_mhe,
    "kernel": _solve_kernel,
    "exact": solve_exact,
    "exact-2n": _solve_exact_2n,
    "exact-3n": _solve_exact_3n,
    "k3": solve_k3_split,
    "nddiv": solve_nd,
    "twdp": solve_twdp,
}


def _k3_guess_estimate(n_unc: int) -> int:
    from math import comb

    return 3 * sum(comb(n_unc, j) for j in range(n_unc // 3 + 1))


def dispatch(inst: Instance, algo: str = "auto") -> Solution:
    """Solve with an explicit algorithm or the automatic routing order."""
    if algo != "auto":
        fn = ALGORITHMS.get(algo)
        if fn is None:
            raise ValidationError(f"unknown algorithm {algo!r}")
        return fn(inst)
    g = inst.graph
    unc = len(inst.uncolored())
    if g.n and g.m == g.n * (g.n - 1) // 2:
        if inst.variant == MHV or not inst.edge_weights:
            return _solve_complete(inst)
    if inst.k == 1:
        return _solve_trivial_k1(inst)
    if inst.k == 2:
        return _solve_flow2(inst)
    if inst.variant == MHE and uncolored_forest(inst)[0]:
        return solve_tree_mhe(inst)
    if (
        inst.variant == MHE
        and inst.target is not None
        and all(w >= 1 for w in inst.edge_weights.values())
    ):
        outcome = kernelize(inst)
        if isinstance(outcome, Reduced):
            try:
                answer, sol = solve_decision(inst)
                return sol
            except (CapExceeded, BudgetExceeded):
                pass
    if inst.k == 3 and _k3_guess_estimate(unc) <= min(enum_cap(), _K3_GUESS_LIMIT):
        try:
            return solve_k3_split(inst)
        except CapExceeded:
            pass
    tp = type_partition(g, inst.precoloring)
    unc_classes = sum(1 for st in tp.status if st == "uncolored")
    if unc_classes < unc and unc_classes <= _EXACT_LIMIT:
        try:
            return solve_nd(inst)
        except (CapExceeded, BudgetExceeded):
            pass
    if 0 < g.n <= _DECOMPOSE_LIMIT:
        td = decompose(g)
        base = 2 * inst.k if inst.variant == MHV else inst.k
        if g.n * base ** (td.width + 1) <= _TABLE_LIMIT:
            return solve_twdp(inst, make_nice(td))
    if unc <= _EXACT_LIMIT:
        try:
            return solve_exact(inst)
        except (CapExceeded, BudgetExceeded):
            pass
    return solve_brute(inst)


@dataclass(frozen=True)
class ResultRecord:
    """One solve, serialized as a stable line of JSON."""

    variant: str
    algorithm: str
    optimum: int
    coloring: tuple[int, ...]
    happy_weight: int
    elapsed_ms: float
    instance_digest: str
    answer: str | None = None

    def to_json(self) -> str:
        fields = {
            "variant": self.variant,
            "algorithm": self.algorithm,
            "optimum": self.optimum,
            "coloring": list(self.coloring),
            "happyWeight": self.happy_weight,
            "elapsedMs": round(self.elapsed_ms, 3),
            "instanceDigest": self.instance_digest,
        }
        if self.answer is not None:
            fields["answer"] = self.answer
        return json.dumps(fields)


def make_record(inst: Instance, sol: Solution, elapsed_ms: float) -> ResultRecord:
    """Build the output record, re-evaluating the coloring first."""
    value = evaluate_objective(inst, sol.coloring)
    if value != sol.happy_weight:
        raise ContractError("solution value does not re-evaluate to its optimum")
    answer = None
    if inst.target is not None:
        answer = "yes" if sol.happy_weight >= inst.target else "no"
    return ResultRecord(
        variant=inst.variant,
        algorithm=sol.algorithm,
        optimum=sol.happy_weight,
        coloring=sol.coloring,
        happy_weight=sol.happy_weight,
        elapsed_ms=elapsed_ms,
        instance_digest=instance_digest(inst),
        answer=answer,
    )


def solve_to_record(inst: Instance, algo: str = "auto") -> ResultRecord:
    start = time.perf_counter()
    sol = dispatch(inst, algo)
    elapsed = (time.perf_counter() - start) * 1000.0
    return make_record(inst, sol, elapsed)


def with_target(inst: Instance, target: int | None) -> Instance:
    """Copy of the instance with a different decision target."""
    return replace(inst, target=target)

"""Exact solvers for maximum happy edges / happy vertices colorings."""

from .model import (
    MHE,
    MHV,
    BudgetExceeded,
    CapExceeded,
    ContractError,
    Graph,
    HappyError,
    Instance,
    Solution,
    ValidationError,
    evaluate_objective,
    make_solution,
    validate_instance,
)
from .instfile import ParseError, instance_digest, parse_instance, write_instance
from .oracle import solve_brute
from .flow2 import solve_mhe_2, solve_mhv_2
from .treedp import solve_tree_mhe, uncolored_forest
from .partition import (
    PartitionProblem,
    reduce_to_mwp,
    solve_exact,
    solve_k3_split,
    solve_mwp_2n,
    solve_mwp_3n,
)
from .kernel import Decided, KernelTrace, Reduced, kernelize, solve_decision
from .twdp import (
    NiceDecomposition,
    TreeDecomposition,
    decompose,
    make_nice,
    read_td,
    solve_twdp,
    verify_decomposition,
)
from .nddiv import TypePartition, nd_reduce_mhe, nd_reduce_mhv, solve_nd, type_partition
from .transforms import (
    generate,
    solve_complete_mhe,
    solve_complete_mhv,
    subdivide_mhe,
    to_bipartite_mhv,
    to_split_mhv,
    to_weighted_complete,
)
from .dispatch import ALGORITHMS, ResultRecord, dispatch, make_record, solve_to_record
from .bench import run_bench

__all__ = [
    "ALGORITHMS",
    "BudgetExceeded",
    "CapExceeded",
    "ContractError",
    "Decided",
    "Graph",
    "HappyError",
    "Instance",
    "KernelTrace",
    "MHE",
    "MHV",
    "NiceDecomposition",
    "ParseError",
    "PartitionProblem",
    "Reduced",
    "ResultRecord",
    "Solution",
    "TreeDecomposition",
    "TypePartition",
    "ValidationError",
    "decompose",
    "dispatch",
    "evaluate_objective",
    "generate",
    "instance_digest",
    "kernelize",
    "make_nice",
    "make_record",
    "make_solution",
    "nd_reduce_mhe",
    "nd_reduce_mhv",
    "parse_instance",
    "read_td",
    "reduce_to_mwp",
    "run_bench",
    "solve_brute",
    "solve_complete_mhe",
    "solve_complete_mhv",
    "solve_decision",
    "solve_exact",
    "solve_k3_split",
    "solve_mhe_2",
    "solve_mhv_2",
    "solve_mwp_2n",
    "solve_mwp_3n",
    "solve_nd",
    "solve_to_record",
    "solve_tree_mhe",
    "solve_twdp",
    "subdivide_mhe",
    "to_bipartite_mhv",
    "to_split_mhv",
    "to_weighted_complete",
    "type_partition",
    "uncolored_forest",
    "validate_instance",
    "verify_decomposition",
    "write_instance",
]

"""Out-branchings with many leaves: parameterized search, exact solver, DAG kernel."""

from .digraph import (
    Digraph,
    derived_graph,
    out_branching_root_component,
    reachable_set,
    strong_components,
)
from .exact import ExactOutcome, adml, leaves_feasible
from .formats import format_instance, format_witness, parse_instance, parse_witness
from .generate import InstanceSpec, generate
from .kernel import KernelResult, kernelize, lift_witness
from .kernel import reduce as reduce_acyclic
from .oracle import oracle_max_leaves, oracle_tl_max
from .outtree import OutTree, extend_to_branching, grow_tree, is_out_branching, subtree
from .search import SearchState, SolveOutcome, Telemetry, algo_a, algo_b

__version__ = "0.1.0"

__all__ = [
    "Digraph",
    "ExactOutcome",
    "InstanceSpec",
    "KernelResult",
    "OutTree",
    "SearchState",
    "SolveOutcome",
    "Telemetry",
    "adml",
    "algo_a",
    "algo_b",
    "derived_graph",
    "extend_to_branching",
    "format_instance",
    "format_witness",
    "generate",
    "grow_tree",
    "is_out_branching",
    "kernelize",
    "leaves_feasible",
    "lift_witness",
    "oracle_max_leaves",
    "oracle_tl_max",
    "out_branching_root_component",
    "parse_instance",
    "parse_witness",
    "reachable_set",
    "reduce_acyclic",
    "strong_components",
    "subtree",
]

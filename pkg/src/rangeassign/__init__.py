"""Two-level symmetric range assignment.

Pick a minimum set of network nodes to boost to max transmission power
so that the symmetric (mutual-link) communication graph is connected.
The package provides the problem model, a parameterized greedy solver
with a guaranteed approximation ratio, an almost-linear union-find
solver for the k=3 case, a spanning-tree baseline, a brute-force exact
oracle, instance generators (including the adversarial worst-case
family), and a CLI tying them together.
"""

from .exact import BudgetExceededError, ExactResult, solve_exact
from .fast3 import DisjointSets, fast3_solve, op_count
from .generators import (GenerationError, WorstCaseFamily,
                         fast3_adversarial_scan_order, gen_geometric,
                         gen_random_abstract, gen_worst_case)
from .greedy import (exists_k_merging, find_k_merging, is_k_merging,
                     lower_bound_cc, solve_greedy, spanning_tree_baseline)
from .instance import (ComponentLabeling, Instance, InstanceError,
                       InvalidInstanceError, PowerGraph, Violation,
                       components, derive_edges, is_feasible, load,
                       min_max_graph, save, validate)
from .solution import (InvalidScheduleError, Merging, MergingOrder, Solution,
                       load_schedule, load_solution, save_schedule,
                       save_solution)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError", "ComponentLabeling", "DisjointSets",
    "ExactResult", "GenerationError", "Instance", "InstanceError",
    "InvalidInstanceError", "InvalidScheduleError", "Merging",
    "MergingOrder", "PowerGraph", "Solution", "Violation",
    "WorstCaseFamily", "components", "derive_edges", "exists_k_merging",
    "fast3_adversarial_scan_order", "fast3_solve", "find_k_merging",
    "gen_geometric", "gen_random_abstract", "gen_worst_case",
    "is_feasible", "is_k_merging", "load", "load_schedule",
    "load_solution", "lower_bound_cc", "min_max_graph", "op_count",
    "save", "save_schedule", "save_solution", "solve_exact",
    "solve_greedy", "spanning_tree_baseline", "validate",
]

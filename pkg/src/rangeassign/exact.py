"""Brute-force optimal solver: the ground truth for ratio checks.

Enumerates candidate boost sets by increasing size, so the first
feasible set found is provably minimum. Candidates that miss a
min-power component can never be feasible and are skipped by default.
Practical up to roughly n = 20; the value of this module is
auditability, not speed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .instance import components


class BudgetExceededError(Exception):
    """No feasible set within the size budget (a larger one still exists,
    since a valid instance always has a solution)."""

    def __init__(self, budget, nodes_explored):
        self.budget = budget
        self.nodes_explored = nodes_explored
        super().__init__(f"no solution of size <= {budget} "
                         f"({nodes_explored} candidate sets tested)")


@dataclass(frozen=True)
class ExactResult:
    u_opt: tuple          # sorted node ids of a minimum feasible set
    size: int
    nodes_explored: int   # candidate sets feasibility-tested

    def to_dict(self):
        return {
            "size": self.size,
            "u_opt": list(self.u_opt),
            "nodes_explored": self.nodes_explored,
            "proof": f"exhausted sizes < {self.size}",
        }


def solve_exact(inst, budget=None, *, use_component_pruning=True):
    """Minimum feasible boost set by exhaustive search.

    Sizes run upward from the component lower bound (or from 1 when the
    pruning is disabled), subsets in lexicographic order, so ties break
    to the lexicographically smallest set. With a budget, exceeding it
    raises BudgetExceededError rather than claiming infeasibility.
    """
    inst.ensure_valid()
    n = inst.n
    pg = inst.graph()
    labeling = components(n, pg.e_min)
    cc = labeling.count
    if cc == 1:
        return ExactResult((), 0, 0)

    labels = labeling.label
    # cross-component max edges as (u, v, label_u, label_v); feasibility of
    # a set only depends on which component labels its boosted edges join
    qedges = [(int(u), int(v), int(labels[u]), int(labels[v]))
              for u, v in pg.e_max if labels[u] != labels[v]]

    explored = 0
    start = cc if use_component_pruning else 1
    top = n if budget is None else min(n, budget)
    for s in range(start, top + 1):
        for comb in itertools.combinations(range(n), s):
            if use_component_pruning:
                if len({labels[v] for v in comb}) != cc:
                    continue
            explored += 1
            if _quotient_connected(comb, qedges, cc):
                return ExactResult(tuple(comb), s, explored)
    if budget is not None:
        raise BudgetExceededError(budget, explored)
    raise AssertionError("a valid instance always has a feasible set")


def _quotient_connected(subset, qedges, cc):
    """Whether boosting `subset` joins all component labels into one."""
    member = set(subset)
    if len(member) < cc:
        return False
    parent = list(range(cc))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merges = 0
    for u, v, lu, lv in qedges:
        if u in member and v in member:
            ru, rv = find(lu), find(lv)
            if ru != rv:
                parent[ru] = rv
                merges += 1
                if merges == cc - 1:
                    return True
    return merges == cc - 1


def count_feasible_sets(inst, size):
    """Number of feasible boost sets of exactly the given size, by full
    enumeration with the public feasibility check (uniqueness audits)."""
    from .instance import is_feasible
    count = 0
    for comb in itertools.combinations(range(inst.n), size):
        if is_feasible(inst, comb):
            count += 1
    return count

"""Parameterized greedy merging solver and the spanning-tree baseline.

A k-merging is a k-node set, connected under max-power edges, whose
nodes lie in k distinct current components; taking it boosts those nodes
and cuts the component count by k-1. The greedy solver starts from the
min-power components and, for phase sizes k' = k down to 2, repeatedly
takes k'-mergings while any exist. Phase 2 always finishes the job
because the max-power graph is connected.

Which merging to take when several exist is a free choice; MergingOrder
pins it down (lexicographic default, seeded permutation, or an explicit
replay schedule).
"""

from __future__ import annotations

import numpy as np

from .fast3 import DisjointSets
from .instance import components
from .solution import InvalidScheduleError, Merging, MergingOrder, Solution


def lower_bound_cc(inst):
    """Component-count lower bound on any feasible boost set.

    Every feasible set must contain a node of each min-power component,
    so |CC(G(min))| bounds the optimum from below; a min-connected
    instance needs no boosted node at all, giving 0.
    """
    inst.ensure_valid()
    cc = components(inst.n, inst.graph().e_min).count
    return cc if cc > 1 else 0


def is_k_merging(m, labeling, graph):
    """True iff m induces a connected max-power subgraph spanning
    len(m) distinct components.

    labeling may be a ComponentLabeling or a raw per-node label array
    (equal values meaning same component).
    """
    nodes = sorted(set(int(x) for x in m))
    if not nodes:
        return False
    labels = getattr(labeling, "label", labeling)
    seen = set()
    for v in nodes:
        lab = int(labels[v])
        if lab in seen:
            return False
        seen.add(lab)
    # connectivity of the induced max subgraph, by traversal
    member = set(nodes)
    stack = [nodes[0]]
    reached = {nodes[0]}
    while stack:
        v = stack.pop()
        for u in graph.max_neighbors(v):
            u = int(u)
            if u in member and u not in reached:
                reached.add(u)
                stack.append(u)
    return len(reached) == len(nodes)


def _mergings_from_root(graph, labels, k, root, collect):
    """k-mergings whose smallest node is root, grown as connected subsets.

    Connected-subgraph enumeration with an exclusive-neighborhood rule,
    so each candidate set is produced exactly once; branches die as soon
    as a component label repeats. With collect=False, stops at the first
    hit (existence check).
    """
    found = []
    root_label = int(labels[root])

    def rec(sub, sub_labels, nbhd, ext):
        if len(sub) == k:
            found.append(tuple(sorted(sub)))
            return not collect
        ext = list(ext)
        while ext:
            w = ext.pop()
            lw = int(labels[w])
            if lw in sub_labels:
                continue
            new_nbhd = set(nbhd)
            fresh = []
            for u in graph.max_neighbors(w):
                u = int(u)
                if u > root and u not in nbhd:
                    fresh.append(u)
                    new_nbhd.add(u)
            if rec(sub + [w], sub_labels | {lw}, new_nbhd, ext + fresh):
                return True
        return False

    init_ext = [int(u) for u in graph.max_neighbors(root) if u > root]
    nbhd = set(init_ext) | {root}
    rec([root], {root_label}, nbhd, init_ext)
    return found


def exists_k_merging(k, labels, graph):
    """Whether any k-merging exists for the given component labels."""
    if k < 2:
        return False
    for root in range(graph.n):
        if _mergings_from_root(graph, labels, k, root, collect=False):
            return True
    return False


def find_k_merging(k, labeling, graph, order=None):
    """First k-merging under the order, or None when none exists.

    Only lexicographic and permutation orders select here; explicit
    schedules are consumed step-by-step by solve_greedy.
    """
    if k < 2:
        raise ValueError(f"merging size must be at least 2, got {k}")
    order = order or MergingOrder.lexicographic()
    labels = getattr(labeling, "label", labeling)
    if order.mode == MergingOrder.LEX:
        for root in range(graph.n):
            cands = _mergings_from_root(graph, labels, k, root, collect=True)
            if cands:
                return min(cands)
        return None
    if order.mode == MergingOrder.PERM:
        perm = np.random.default_rng(order.seed).permutation(graph.n)
        best, best_key = None, None
        for root in range(graph.n):
            for cand in _mergings_from_root(graph, labels, k, root, collect=True):
                key = tuple(sorted(int(perm[v]) for v in cand))
                if best_key is None or key < best_key:
                    best, best_key = cand, key
        return best
    raise ValueError("explicit schedules are replayed by solve_greedy, "
                     "not searched by find_k_merging")


def _seed_min_components(inst, pg):
    dsu = DisjointSets(inst.n)
    for u, v in pg.e_min:
        dsu.union(int(u), int(v))
    return dsu


def _take(dsu, nodes, phase_k, trace, u_set):
    roots = {dsu.find(int(v)) for v in nodes}
    assert len(roots) == len(nodes), "merging nodes must sit in distinct components"
    first = nodes[0]
    for v in nodes[1:]:
        dsu.union(int(first), int(v))
    trace.append(Merging(tuple(sorted(int(v) for v in nodes)), phase_k,
                         len(trace)))
    u_set.update(int(v) for v in nodes)


def _edge_sweep_order(pg, order):
    if order.mode == MergingOrder.PERM:
        perm = np.random.default_rng(order.seed).permutation(pg.n)
        keys = [tuple(sorted((int(perm[u]), int(perm[v])))) for u, v in pg.e_max]
        return [pg.e_max[i] for i in np.lexsort(
            (np.array([key[1] for key in keys]),
             np.array([key[0] for key in keys])))]
    return list(pg.e_max)


def solve_greedy(inst, k, order=None):
    """Greedy merging solver for a fixed phase parameter k >= 2.

    Returns a feasible Solution whose trace lists every merging taken,
    largest phases first. With an explicit schedule the run must replay
    it exactly; any deviation raises InvalidScheduleError.
    """
    if k < 2:
        raise ValueError(f"phase parameter k must be at least 2, got {k}")
    order = order or MergingOrder.lexicographic()
    inst.ensure_valid()
    pg = inst.graph()
    dsu = _seed_min_components(inst, pg)
    trace = []
    u_set = set()

    if order.mode == MergingOrder.SCHEDULE:
        _replay_schedule(inst, pg, dsu, k, order.entries, trace, u_set)
    else:
        for phase_k in range(k, 2, -1):
            if dsu.n_roots == 1:
                break
            while True:
                labels = dsu.roots()
                cand = find_k_merging(phase_k, labels, pg, order)
                if cand is None:
                    break
                _take(dsu, cand, phase_k, trace, u_set)
        if dsu.n_roots > 1:
            for u, v in _edge_sweep_order(pg, order):
                u, v = int(u), int(v)
                if dsu.find(u) != dsu.find(v):
                    _take(dsu, (u, v), 2, trace, u_set)
                    if dsu.n_roots == 1:
                        break

    assert dsu.n_roots == 1, "run must end with a connected graph"
    return Solution(
        algorithm=f"greedy-{k}",
        u_set=tuple(sorted(u_set)),
        trace=tuple(trace),
        instance_digest=inst.digest(),
        k=k,
    )


def _replay_schedule(inst, pg, dsu, k, entries, trace, u_set):
    """Drive the phase loop from an explicit merging sequence.

    An entry is consumed only when its size matches the current phase and
    it is a valid merging at that point; the phase descends only once no
    merging of the phase size exists. Every mismatch is an error rather
    than a silent repair.
    """
    pos = 0
    phase_k = k
    while dsu.n_roots > 1:
        if phase_k < 2:
            raise InvalidScheduleError(
                "graph still disconnected after the 2-merging phase")
        entry = entries[pos] if pos < len(entries) else None
        if entry is not None and len(entry) == phase_k:
            labels = dsu.roots()
            if not is_k_merging(entry, labels, pg):
                raise InvalidScheduleError(
                    f"entry {pos} {list(entry)} is not a valid "
                    f"{phase_k}-merging at its replay point")
            _take(dsu, entry, phase_k, trace, u_set)
            pos += 1
            continue
        # no consumable entry: phase may only descend if truly exhausted
        if exists_k_merging(phase_k, dsu.roots(), pg):
            if entry is None:
                raise InvalidScheduleError(
                    f"schedule exhausted while a {phase_k}-merging still exists")
            raise InvalidScheduleError(
                f"entry {pos} has size {len(entry)} but a {phase_k}-merging "
                "still exists")
        phase_k -= 1
    if pos != len(entries):
        raise InvalidScheduleError(
            f"{len(entries) - pos} schedule entries left over after the "
            "graph became connected")


def spanning_tree_baseline(inst):
    """Boost one mutual max pair per spanning-tree edge over the
    min-power components.

    Sweeps the canonical max edges Kruskal-style over the component
    quotient, so ties resolve to the smallest (u, v) pair. The result is
    feasible and uses at most 2·(|CC(G(min))| - 1) nodes.
    """
    inst.ensure_valid()
    pg = inst.graph()
    labeling = components(inst.n, pg.e_min)
    trace = []
    u_set = set()
    if labeling.count > 1:
        dsu = DisjointSets(labeling.count)
        needed = labeling.count - 1
        for u, v in pg.e_max:
            lu, lv = int(labeling.label[u]), int(labeling.label[v])
            if lu != lv and dsu.find(lu) != dsu.find(lv):
                dsu.union(lu, lv)
                trace.append(Merging((int(u), int(v)), 2, len(trace)))
                u_set.update((int(u), int(v)))
                needed -= 1
                if needed == 0:
                    break
        assert needed == 0, "max-power graph connectivity guarantees a tree"
    return Solution(
        algorithm="spanning-tree",
        u_set=tuple(sorted(u_set)),
        trace=tuple(trace),
        instance_digest=inst.digest(),
        k=None,
    )

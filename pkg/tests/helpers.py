"""Independent re-implementations used as test oracles.

Everything here derives its answers straight from the instance mappings
(or plain edge lists) with its own traversal code, so agreement with the
library is a real cross-check rather than a tautology.
"""

import itertools


def bfs_components(n, edges):
    """(labels, count) by plain BFS, labels dense in first-occurrence order."""
    adj = {v: [] for v in range(n)}
    for u, v in edges:
        adj[int(u)].append(int(v))
        adj[int(v)].append(int(u))
    labels = [-1] * n
    count = 0
    for start in range(n):
        if labels[start] != -1:
            continue
        labels[start] = count
        queue = [start]
        while queue:
            v = queue.pop(0)
            for u in adj[v]:
                if labels[u] == -1:
                    labels[u] = count
                    queue.append(u)
        count += 1
    return labels, count


def mutual_edges(inst, level):
    """Mutual pairs recomputed directly from the reachability mappings."""
    reach = inst.d_min if level == "min" else inst.d_max
    sets = [set(int(x) for x in reach(v)) for v in range(inst.n)]
    return {(u, v) for u in range(inst.n) for v in sets[u] if u < v and u in sets[v]}


def brute_force_k_mergings(inst, labels, k):
    """All k-mergings by full subset scan, independent of the library search.

    Connectivity of the induced subgraph is checked by DFS over mutual
    max links recomputed from the raw mappings.
    """
    emax = mutual_edges(inst, "max")
    adj = {v: set() for v in range(inst.n)}
    for u, v in emax:
        adj[u].add(v)
        adj[v].add(u)
    out = []
    for m in itertools.combinations(range(inst.n), k):
        if len({labels[v] for v in m}) != k:
            continue
        member = set(m)
        seen = {m[0]}
        stack = [m[0]]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u in member and u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) == k:
            out.append(m)
    return out


def replay_component_counts(inst, trace):
    """Component count after seeding with min edges and each trace step."""
    labels, _ = bfs_components(inst.n, mutual_edges(inst, "min"))
    labels = list(labels)
    counts = [len(set(labels))]
    for merging in trace:
        targets = {labels[v] for v in merging.nodes}
        keep = min(targets)
        labels = [keep if lab in targets else lab for lab in labels]
        counts.append(len(set(labels)))
    return counts


def feasible_by_hand(inst, u_set):
    """Feasibility recomputed from the raw mappings with BFS."""
    u = set(int(x) for x in u_set)
    edges = set(mutual_edges(inst, "min"))
    edges |= {(a, b) for a, b in mutual_edges(inst, "max") if a in u and b in u}
    _, count = bfs_components(inst.n, edges)
    return count == 1

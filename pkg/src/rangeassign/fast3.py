"""Almost-linear 3-merging solver built on union-find.

Runs the k=3 greedy in three passes: seed a disjoint-set structure with
the min-power components, then scan each node's max-power edges once to
harvest 3-mergings (a scan node plus two neighbors in two other
components), then sweep the max edges once more taking every remaining
cross-component pair. Total union/find work is linear in the relation
sizes s_min + s_max, so the whole run costs O((s_min+s_max) · α).

The hot loop is compiled with numba over CSR arrays; the DisjointSets
class below is the plain-Python counterpart with an operation counter,
used by the other solvers and as a test surface.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .instance import InvalidInstanceError, Violation
from .solution import Merging, Solution


class DisjointSets:
    """Union-find with path compression and union by size.

    op_counter counts public find() and union() calls; the scaling
    benchmark reads it off completed runs.
    """

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n
        self.n_roots = n
        self.op_counter = 0

    def find(self, x):
        parent = self.parent
        if x < 0 or x >= len(parent):
            raise IndexError(f"node id {x} out of range")
        self.op_counter += 1
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        """Merge the sets of a and b; returns the surviving root."""
        self.op_counter += 1
        ra, rb = self._root(a), self._root(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.n_roots -= 1
        return ra

    def _root(self, x):
        # internal find without touching op_counter
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def same(self, a, b):
        return self._root(a) == self._root(b)

    def roots(self):
        """Current root per node (bulk introspection; not counted)."""
        return np.array([self._root(v) for v in range(len(self.parent))],
                        dtype=np.int64)


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def _union_roots(parent, size, ra, rb):
    if ra == rb:
        return ra
    if size[ra] < size[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    size[ra] += size[rb]
    return ra


@njit(cache=True)
def _fast3_kernel(n, min_edges, max_indptr, max_indices, max_edges, scan_order):
    parent = np.arange(n, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    ops = 0

    # pass 1: seed with the min-power components (2 finds + 1 union per edge)
    for i in range(min_edges.shape[0]):
        ra = _find(parent, min_edges[i, 0])
        rb = _find(parent, min_edges[i, 1])
        _union_roots(parent, size, ra, rb)
        ops += 3

    # pass 2: harvest 3-mergings. For each scan node v, hold the first
    # max-neighbor in a foreign component; a second neighbor in a third
    # component completes {v, held, u}, merged with two unions. Emitting
    # clears the held slot and the scan continues over v's edges, so one
    # node can center several mergings. Held roots stay current between
    # emissions because unions happen only at emissions.
    threes = np.empty((n // 2 + 1, 3), dtype=np.int64)
    n3 = 0
    for si in range(n):
        v = scan_order[si]
        rv = _find(parent, v)
        ops += 1
        held = np.int64(-1)
        held_root = np.int64(-1)
        for j in range(max_indptr[v], max_indptr[v + 1]):
            u = max_indices[j]
            ru = _find(parent, u)
            ops += 1
            if ru == rv:
                continue
            if held < 0:
                held = u
                held_root = ru
                continue
            if ru == held_root:
                continue
            merged = _union_roots(parent, size, rv, held_root)
            rv = _union_roots(parent, size, merged, ru)
            ops += 2
            threes[n3, 0] = v
            threes[n3, 1] = held
            threes[n3, 2] = u
            n3 += 1
            held = np.int64(-1)
            held_root = np.int64(-1)

    # pass 3: every remaining cross-component max edge is a 2-merging
    twos = np.empty((n, 2), dtype=np.int64)
    n2 = 0
    for i in range(max_edges.shape[0]):
        ra = _find(parent, max_edges[i, 0])
        rb = _find(parent, max_edges[i, 1])
        ops += 2
        if ra != rb:
            _union_roots(parent, size, ra, rb)
            ops += 1
            twos[n2, 0] = max_edges[i, 0]
            twos[n2, 1] = max_edges[i, 1]
            n2 += 1

    roots_left = 0
    for v in range(n):
        if _find(parent, v) == v:
            roots_left += 1
    return threes[:n3], twos[:n2], ops, roots_left


def fast3_solve(inst, scan_order=None):
    """Solve with the union-find 3-merging scan; returns a Solution.

    scan_order optionally overrides the node visiting order of the
    3-merging pass (a permutation of range(n)); adjacency order within a
    node is always ascending. Defaults to ascending node ids.
    """
    inst.ensure_valid()
    pg = inst.graph()
    n = inst.n
    if scan_order is None:
        scan_order = np.arange(n, dtype=np.int64)
    else:
        scan_order = np.asarray(scan_order, dtype=np.int64)
        if scan_order.shape != (n,) or not np.array_equal(
                np.sort(scan_order), np.arange(n)):
            raise ValueError("scan_order must be a permutation of range(n)")

    threes, twos, ops, roots_left = _fast3_kernel(
        n, pg.e_min, pg.max_indptr, pg.max_indices, pg.e_max, scan_order)
    if roots_left != 1:
        raise InvalidInstanceError([Violation(
            "disconnected", (),
            f"max-power graph has {roots_left} components, must be connected")])

    trace = []
    u_set = set()
    for row in threes:
        nodes = tuple(sorted(int(x) for x in row))
        trace.append(Merging(nodes, 3, len(trace)))
        u_set.update(nodes)
    for row in twos:
        nodes = tuple(sorted(int(x) for x in row))
        trace.append(Merging(nodes, 2, len(trace)))
        u_set.update(nodes)

    return Solution(
        algorithm="fast3",
        u_set=tuple(sorted(u_set)),
        trace=tuple(trace),
        instance_digest=inst.digest(),
        k=3,
        op_count=int(ops),
    )


def op_count(sol):
    """Union/find operation count of a completed fast3 run."""
    if sol.op_count is None:
        raise ValueError(f"solution from '{sol.algorithm}' carries no op count")
    return sol.op_count

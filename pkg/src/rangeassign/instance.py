"""Problem instances and the derived symmetric power graphs.

An instance is a node count n plus two directed reachability mappings:
d_min(v) is the set of nodes v reaches at min power, d_max(v) the set it
reaches at max power. Only mutual links become edges: {u, v} is a
min-power edge iff u ∈ d_min(v) and v ∈ d_min(u), and likewise for max
power. The min-max-power graph for a boost set U contains every min edge
plus every max edge whose endpoints are both in U; a set U is feasible
when that graph connects all n nodes.

Reachability sets are stored CSR-style (offsets + sorted index arrays) so
million-node instances stay cheap to build and scan.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _scipy_cc

logger = logging.getLogger(__name__)


class InstanceError(ValueError):
    """Malformed instance file or out-of-range node reference."""


class InvalidInstanceError(ValueError):
    """Instance violates a structural invariant (see validate())."""

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(v.message for v in self.violations) or "invalid instance"
        super().__init__(msg)


@dataclass(frozen=True)
class Violation:
    """One failed instance invariant, as data rather than an exception."""

    kind: str          # "containment" | "self_loop" | "disconnected" | "range"
    nodes: tuple       # offending node id(s)
    message: str


@dataclass(frozen=True)
class ComponentLabeling:
    """Dense component ids per node; label[u] == label[v] iff connected."""

    label: np.ndarray  # shape (n,), int64, values dense in [0, count)
    count: int

    def same(self, u, v):
        return self.label[u] == self.label[v]


def _build_csr(n, rows, *, strip_self_loops=False):
    """Normalize per-node neighbor iterables into (indptr, indices).

    Neighbors are deduplicated and sorted ascending. Returns the arrays
    plus the number of self-loop entries removed.
    """
    if len(rows) != n:
        raise InstanceError(f"expected {n} adjacency rows, got {len(rows)}")
    stripped = 0
    counts = np.zeros(n + 1, dtype=np.int64)
    cleaned = []
    for v, row in enumerate(rows):
        arr = np.asarray(sorted(set(int(x) for x in row)), dtype=np.int64)
        if arr.size and (arr[0] < 0 or arr[-1] >= n):
            bad = arr[(arr < 0) | (arr >= n)][0]
            raise InstanceError(
                f"neighbor id {bad} in row {v} out of range for n={n}"
            )
        if strip_self_loops:
            before = arr.size
            arr = arr[arr != v]
            stripped += before - arr.size
        cleaned.append(arr)
        counts[v + 1] = arr.size
    indptr = np.cumsum(counts)
    indices = np.concatenate(cleaned) if cleaned else np.zeros(0, dtype=np.int64)
    return indptr, indices, stripped


def _csr_from_pairs(n, pairs):
    """CSR adjacency from an (m, 2) array of directed pairs."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    pairs = pairs[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, pairs[:, 0] + 1, 1)
    indptr = np.cumsum(indptr)
    return indptr, np.ascontiguousarray(pairs[:, 1])


class Instance:
    """Immutable problem input: n nodes and directed d_min/d_max sets.

    Do not mutate the CSR arrays after construction; solvers and the
    digest cache assume they are frozen.
    """

    def __init__(self, n, dmin_indptr, dmin_indices, dmax_indptr, dmax_indices,
                 meta=None):
        if n <= 0:
            raise InstanceError(f"node count must be positive, got {n}")
        self.n = int(n)
        self.dmin_indptr = np.asarray(dmin_indptr, dtype=np.int64)
        self.dmin_indices = np.asarray(dmin_indices, dtype=np.int64)
        self.dmax_indptr = np.asarray(dmax_indptr, dtype=np.int64)
        self.dmax_indices = np.asarray(dmax_indices, dtype=np.int64)
        self.meta = meta or {}
        self._graph = None
        self._digest = None
        self._validated = False

    @classmethod
    def from_mappings(cls, n, dmin, dmax, meta=None, *, normalize=False):
        """Build from per-node neighbor iterables (dict or sequence).

        Self-loops are stripped with a logged warning count. With
        normalize=True, d_max(v) is widened to d_max(v) ∪ d_min(v);
        otherwise a containment violation surfaces in validate().
        """
        def as_rows(mapping):
            if isinstance(mapping, dict):
                return [mapping.get(v, ()) for v in range(n)]
            return list(mapping)

        min_rows = as_rows(dmin)
        max_rows = as_rows(dmax)
        if normalize:
            max_rows = [set(a) | set(b) for a, b in zip(min_rows, max_rows)]
        p1, i1, s1 = _build_csr(n, min_rows, strip_self_loops=True)
        p2, i2, s2 = _build_csr(n, max_rows, strip_self_loops=True)
        if s1 or s2:
            logger.warning("stripped %d self-loop entries", s1 + s2)
        return cls(n, p1, i1, p2, i2, meta)

    @classmethod
    def from_undirected_pairs(cls, n, min_pairs, max_pairs, meta=None):
        """Build a symmetric instance from undirected edge lists.

        Every edge {u, v} yields both directed entries, so the mutual-link
        rule reproduces exactly these edges.
        """
        def both_ways(pairs):
            pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
            return np.concatenate([pairs, pairs[:, ::-1]], axis=0)

        p1, i1 = _csr_from_pairs(n, both_ways(min_pairs))
        p2, i2 = _csr_from_pairs(n, both_ways(max_pairs))
        return cls(n, p1, i1, p2, i2, meta)

    def d_min(self, v):
        """Sorted array of nodes reachable from v at min power."""
        return self.dmin_indices[self.dmin_indptr[v]:self.dmin_indptr[v + 1]]

    def d_max(self, v):
        """Sorted array of nodes reachable from v at max power."""
        return self.dmax_indices[self.dmax_indptr[v]:self.dmax_indptr[v + 1]]

    @property
    def s_min(self):
        """Relation size |V| + Σ|d_min(v)|."""
        return self.n + int(self.dmin_indices.size)

    @property
    def s_max(self):
        """Relation size |V| + Σ|d_max(v)|."""
        return self.n + int(self.dmax_indices.size)

    def graph(self):
        """Derived PowerGraph, cached."""
        if self._graph is None:
            self._graph = derive_edges(self, _checked=True)
        return self._graph

    def to_dict(self):
        d = {
            "n": self.n,
            "dmin": [self.d_min(v).tolist() for v in range(self.n)],
            "dmax": [self.d_max(v).tolist() for v in range(self.n)],
        }
        if self.meta:
            d["meta"] = self.meta
        return d

    def canonical_bytes(self):
        """Canonical file serialization; the digest is taken over these bytes."""
        return (json.dumps(self.to_dict(), sort_keys=True,
                           separators=(",", ":")) + "\n").encode("utf-8")

    def digest(self):
        """SHA-256 hex digest of the canonical serialization."""
        if self._digest is None:
            self._digest = hashlib.sha256(self.canonical_bytes()).hexdigest()
        return self._digest

    def ensure_valid(self):
        """Raise InvalidInstanceError unless all invariants hold (cached)."""
        if not self._validated:
            violations = validate(self)
            if violations:
                raise InvalidInstanceError(violations)
            self._validated = True
        return self

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.n == other.n
                and np.array_equal(self.dmin_indptr, other.dmin_indptr)
                and np.array_equal(self.dmin_indices, other.dmin_indices)
                and np.array_equal(self.dmax_indptr, other.dmax_indptr)
                and np.array_equal(self.dmax_indices, other.dmax_indices)
                and self.meta == other.meta)

    def __repr__(self):
        return (f"Instance(n={self.n}, s_min={self.s_min}, "
                f"s_max={self.s_max})")


class PowerGraph:
    """Derived undirected edge sets plus per-level adjacency.

    Edges are stored once, canonically as (min(u,v), max(u,v)), sorted
    lexicographically. Adjacency arrays list each edge from both ends,
    neighbors sorted ascending.
    """

    def __init__(self, n, e_min, e_max):
        self.n = int(n)
        self.e_min = np.asarray(e_min, dtype=np.int64).reshape(-1, 2)
        self.e_max = np.asarray(e_max, dtype=np.int64).reshape(-1, 2)
        self.min_indptr, self.min_indices = _csr_from_pairs(
            n, _both_directions(self.e_min))
        self.max_indptr, self.max_indices = _csr_from_pairs(
            n, _both_directions(self.e_max))

    def max_neighbors(self, v):
        return self.max_indices[self.max_indptr[v]:self.max_indptr[v + 1]]

    def min_neighbors(self, v):
        return self.min_indices[self.min_indptr[v]:self.min_indptr[v + 1]]

    def has_max_edge(self, u, v):
        nb = self.max_neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def __repr__(self):
        return (f"PowerGraph(n={self.n}, |e_min|={len(self.e_min)}, "
                f"|e_max|={len(self.e_max)})")


def _both_directions(edges):
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return np.concatenate([edges, edges[:, ::-1]], axis=0)


def _mutual_pairs(n, indptr, indices):
    """Canonical (u < v) pairs present in both directions of a relation."""
    u = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    v = indices
    keys_fwd = u[u < v] * n + v[u < v]          # entries (u, v) with u < v
    keys_bwd = v[u > v] * n + u[u > v]          # entries (u, v) with u > v, swapped
    mutual = np.intersect1d(keys_fwd, keys_bwd)
    return np.column_stack([mutual // n, mutual % n])


def validate(inst):
    """Check all instance invariants; returns a list of Violation.

    Violations are data, not failures: an empty list means the instance
    is a valid problem input (no stored self-reachability, d_min ⊆ d_max
    per node, and a connected max-power graph).
    """
    violations = []
    n = inst.n
    for name, indptr, indices in (("d_min", inst.dmin_indptr, inst.dmin_indices),
                                  ("d_max", inst.dmax_indptr, inst.dmax_indices)):
        if indices.size and (indices.min() < 0 or indices.max() >= n):
            bad = int(indices[(indices < 0) | (indices >= n)][0])
            violations.append(Violation(
                "range", (bad,), f"{name} refers to node {bad} outside [0, {n})"))
            return violations  # remaining checks assume in-range ids
        u = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
        loops = u[u == indices]
        for v in np.unique(loops):
            violations.append(Violation(
                "self_loop", (int(v),), f"{name}({v}) contains {v} itself"))

    # containment d_min(v) ⊆ d_max(v), via directed-pair keys
    u_min = np.repeat(np.arange(n, dtype=np.int64), np.diff(inst.dmin_indptr))
    keys_min = u_min * n + inst.dmin_indices
    u_max = np.repeat(np.arange(n, dtype=np.int64), np.diff(inst.dmax_indptr))
    keys_max = u_max * n + inst.dmax_indices
    missing = keys_min[~np.isin(keys_min, keys_max)]
    for key in missing[:50]:
        v, w = int(key // n), int(key % n)
        violations.append(Violation(
            "containment", (v, w),
            f"d_min({v}) contains {w} but d_max({v}) does not"))

    # max-power graph connectivity (mutual max edges over all nodes)
    e_max = _mutual_pairs(n, inst.dmax_indptr, inst.dmax_indices)
    labeling = components(n, e_max)
    if labeling.count != 1:
        iso = int(np.argmax(np.bincount(labeling.label) == 1)) \
            if (np.bincount(labeling.label) == 1).any() else -1
        detail = f" (e.g. node {np.flatnonzero(labeling.label == iso)[0]} isolated)" \
            if iso >= 0 else ""
        violations.append(Violation(
            "disconnected", (),
            f"max-power graph has {labeling.count} components, must be connected"
            + detail))
    return violations


def derive_edges(inst, *, _checked=False):
    """Derive the mutual min- and max-power edge sets of an instance.

    Only symmetric links count: {u, v} is an edge iff each endpoint
    reaches the other at the given level. Rejects invalid instances.
    """
    if not _checked:
        inst.ensure_valid()
    e_min = _mutual_pairs(inst.n, inst.dmin_indptr, inst.dmin_indices)
    e_max = _mutual_pairs(inst.n, inst.dmax_indptr, inst.dmax_indices)
    return PowerGraph(inst.n, e_min, e_max)


def components(n, edges):
    """Connected components of (range(n), edges) as a dense labeling.

    Labels are renumbered in order of first node occurrence, so the
    result is deterministic regardless of the backend's label choice.
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        raise InstanceError("edge endpoint out of range")
    if edges.size == 0:
        return ComponentLabeling(np.arange(n, dtype=np.int64), n)
    data = np.ones(len(edges), dtype=np.int8)
    mat = csr_matrix((data, (edges[:, 0], edges[:, 1])), shape=(n, n))
    count, raw = _scipy_cc(mat, directed=False)
    raw = raw.astype(np.int64)
    first = np.full(count, n, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(n, dtype=np.int64))
    remap = np.empty(count, dtype=np.int64)
    remap[np.argsort(first, kind="stable")] = np.arange(count, dtype=np.int64)
    return ComponentLabeling(remap[raw], int(count))


def min_max_graph(inst, u_set):
    """Edge set E_min(V) ∪ E_max(U) for a boost set U, as an (m, 2) array.

    With U = ∅ this is exactly the min-power graph; with U = V, exactly
    the max-power graph.
    """
    pg = inst.graph()
    u_arr = np.fromiter((int(x) for x in u_set), dtype=np.int64,
                        count=len(u_set)) if len(u_set) else np.zeros(0, np.int64)
    if u_arr.size and (u_arr.min() < 0 or u_arr.max() >= inst.n):
        raise InstanceError("boost set contains node id outside [0, n)")
    mask = np.zeros(inst.n, dtype=bool)
    mask[u_arr] = True
    boosted = pg.e_max[mask[pg.e_max[:, 0]] & mask[pg.e_max[:, 1]]]
    if pg.e_min.size == 0:
        return boosted.copy()
    merged = np.unique(np.concatenate([pg.e_min, boosted], axis=0), axis=0)
    return merged


def is_feasible(inst, u_set):
    """True iff boosting exactly the nodes of u_set connects all n nodes."""
    edges = min_max_graph(inst, u_set)
    return components(inst.n, edges).count == 1


def save(inst, path):
    """Write the canonical JSON instance file (UTF-8, one line)."""
    with open(path, "wb") as fh:
        fh.write(inst.canonical_bytes())


def load(path, *, normalize=False, require_valid=True):
    """Read an instance file, canonicalize, and (by default) validate.

    Raises InstanceError with field context on malformed files and
    InvalidInstanceError when invariants fail (e.g. a disconnected
    max-power graph). normalize=True repairs d_min ⊄ d_max by widening
    d_max instead of rejecting.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"{path}: not valid JSON at line {exc.lineno}: "
                                f"{exc.msg}") from exc
    if not isinstance(raw, dict):
        raise InstanceError(f"{path}: top level must be an object")
    for field in ("n", "dmin", "dmax"):
        if field not in raw:
            raise InstanceError(f"{path}: missing field '{field}'")
    n = raw["n"]
    if not isinstance(n, int) or n <= 0:
        raise InstanceError(f"{path}: field 'n' must be a positive integer")
    for field in ("dmin", "dmax"):
        rows = raw[field]
        if not isinstance(rows, list) or len(rows) != n:
            raise InstanceError(f"{path}: '{field}' must be a list of {n} arrays")
        for v, row in enumerate(rows):
            if not isinstance(row, list):
                raise InstanceError(f"{path}: {field}[{v}] is not an array")
            for x in row:
                if not isinstance(x, int) or x < 0 or x >= n:
                    raise InstanceError(
                        f"{path}: {field}[{v}] contains {x!r}, "
                        f"expected integer in [0, {n})")
    meta = raw.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise InstanceError(f"{path}: 'meta' must be an object")
    inst = Instance.from_mappings(n, raw["dmin"], raw["dmax"], meta,
                                  normalize=normalize)
    if require_valid:
        inst.ensure_valid()
    return inst

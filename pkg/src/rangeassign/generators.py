"""Instance generators: the adversarial chain family, random geometric
instances, and random abstract instances.

The worst-case family is a parameterized chain construction on which the
greedy solver, if it picks mergings adversarially, lands exactly on its
guaranteed lower-bound ratio (3k-2)/(1/t + 2k-2). The generator emits
the instance, the adversarial merging schedule, and the closed-form
expected sizes, all keyed by a documented bijection from structural node
labels (d, r, c) to dense ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .instance import Instance, components

_RETRY_DEFAULT = 100


class GenerationError(RuntimeError):
    """Could not produce a connected instance within the retry budget."""


@dataclass(frozen=True)
class WorstCaseFamily:
    """One member of the adversarial family plus its replay data."""

    instance: Instance
    schedule: tuple                 # merging node-id lists, replay order
    expected_solution_size: int     # k*t + 2*(k-1)*t under the schedule
    expected_optimum_size: int      # 1 + 2*(k-1)*t
    labels: tuple                   # id -> (d, r, c) triple
    k: int
    t: int

    def expected_ratio(self):
        return Fraction(self.expected_solution_size,
                        self.expected_optimum_size)


def gen_worst_case(k, t):
    """Build the adversarial chain instance for parameters k >= 3, t >= 1.

    Nodes carry labels (d, r, c): a hub (0,0,0); per block d a spine node
    (d,3,0) min-linked to the hub; and rows r in {1,2,3} by columns
    c in {1,..,k-1}, where each (d,2,c)-(d,3,c) pair is min-linked and
    the (d,1,c) nodes start isolated. Max-power edges add the hub to
    (d,2,1), row chains along r in {2,3}, the (d,3,0)-(d,3,1) link, and
    the (d,1,c)-(d,2,c) links. Ids are assigned by sorting the labels.

    The schedule lists, per block, the k-merging over row 3 (columns
    0..k-1), then all {(d,1,c),(d,2,c)} 2-mergings; replaying it yields
    exactly k*t + 2*(k-1)*t boosted nodes against an optimum of
    1 + 2*(k-1)*t.
    """
    if k < 3:
        raise ValueError(f"the adversarial family needs k >= 3, got {k}")
    if t < 1:
        raise ValueError(f"block count t must be positive, got {t}")

    labels = [(0, 0, 0)]
    labels += [(d, 3, 0) for d in range(1, t + 1)]
    labels += [(d, r, c)
               for d in range(1, t + 1) for r in (1, 2, 3)
               for c in range(1, k)]
    labels = sorted(labels)
    ident = {lab: i for i, lab in enumerate(labels)}

    min_pairs = []
    for d in range(1, t + 1):
        min_pairs.append((ident[(0, 0, 0)], ident[(d, 3, 0)]))
        for c in range(1, k):
            min_pairs.append((ident[(d, 2, c)], ident[(d, 3, c)]))

    max_pairs = list(min_pairs)
    for d in range(1, t + 1):
        max_pairs.append((ident[(0, 0, 0)], ident[(d, 2, 1)]))
        for r in (2, 3):
            for c in range(1, k - 1):
                max_pairs.append((ident[(d, r, c)], ident[(d, r, c + 1)]))
        max_pairs.append((ident[(d, 3, 0)], ident[(d, 3, 1)]))
        for c in range(1, k):
            max_pairs.append((ident[(d, 1, c)], ident[(d, 2, c)]))

    meta = {
        "generator": "worst-case",
        "k": k,
        "t": t,
        "labels": [list(lab) for lab in labels],
    }
    inst = Instance.from_undirected_pairs(len(labels), min_pairs, max_pairs,
                                          meta)

    schedule = []
    for d in range(1, t + 1):
        schedule.append(tuple(sorted(ident[(d, 3, c)] for c in range(k))))
    for d in range(1, t + 1):
        for c in range(1, k):
            schedule.append(tuple(sorted((ident[(d, 1, c)],
                                          ident[(d, 2, c)]))))

    return WorstCaseFamily(
        instance=inst,
        schedule=tuple(schedule),
        expected_solution_size=k * t + 2 * (k - 1) * t,
        expected_optimum_size=1 + 2 * (k - 1) * t,
        labels=tuple(labels),
        k=k,
        t=t,
    )


def fast3_adversarial_scan_order(family):
    """Node scan order that makes the union-find solver replay the k=3
    adversarial schedule: each 3-merging's center node (the one
    max-adjacent to both others) first, then everything else ascending.
    """
    if family.k != 3:
        raise ValueError("adversarial scan orders are derived for k=3 only")
    pg = family.instance.graph()
    centers = []
    for entry in family.schedule:
        if len(entry) != 3:
            continue
        a, b, c = entry
        for center, rest in ((a, (b, c)), (b, (a, c)), (c, (a, b))):
            if all(pg.has_max_edge(center, x) for x in rest):
                centers.append(center)
                break
        else:
            raise ValueError(f"schedule entry {entry} has no center node")
    rest = [v for v in range(family.instance.n) if v not in set(centers)]
    return np.array(centers + rest, dtype=np.int64)


def gen_geometric(n, r_min, r_max, side=1.0, seed=0, *,
                  max_retries=_RETRY_DEFAULT, store_coords=True):
    """Uniform random points in a square with two closed-ball radii.

    u reaches v at min power iff dist(u,v) <= r_min, at max power iff
    dist(u,v) <= r_max, so both relations are symmetric and nested.
    Redraws the points (same seeded stream) until the max-power graph is
    connected; deterministic for fixed parameters and seed.
    """
    if n < 1:
        raise ValueError(f"node count must be positive, got {n}")
    if not (0 < r_min <= r_max):
        raise ValueError(f"need 0 < r_min <= r_max, got {r_min}, {r_max}")
    if side <= 0:
        raise ValueError(f"area side must be positive, got {side}")

    rng = np.random.default_rng(seed)
    for attempt in range(max_retries):
        pts = rng.random((n, 2)) * side
        if n == 1:
            max_pairs = np.zeros((0, 2), dtype=np.int64)
            min_pairs = np.zeros((0, 2), dtype=np.int64)
        else:
            tree = cKDTree(pts)
            max_pairs = tree.query_pairs(r_max, output_type="ndarray")
            if components(n, max_pairs).count != 1:
                continue
            if r_min == r_max:
                min_pairs = max_pairs
            else:
                min_pairs = tree.query_pairs(r_min, output_type="ndarray")
        meta = {
            "generator": "geometric",
            "n": n,
            "r_min": r_min,
            "r_max": r_max,
            "side": side,
            "seed": seed,
            "attempt": attempt,
        }
        if store_coords:
            meta["coords"] = pts.tolist()
        return Instance.from_undirected_pairs(n, min_pairs, max_pairs, meta)
    raise GenerationError(
        f"no connected max-power graph in {max_retries} attempts "
        f"(n={n}, r_max={r_max}, side={side}, seed={seed})")


def gen_random_abstract(n, min_density, max_density, seed=0, *,
                        max_retries=_RETRY_DEFAULT):
    """Random directed reachability sets, possibly asymmetric.

    Each ordered pair draws one uniform value: it enters d_min below
    min_density and d_max below max_density, so d_min ⊆ d_max holds by
    construction (requires min_density <= max_density). Materializes an
    n x n matrix; intended for test corpora, not large n.
    """
    if n < 1:
        raise ValueError(f"node count must be positive, got {n}")
    if not (0 <= min_density <= max_density <= 1):
        raise ValueError("need 0 <= min_density <= max_density <= 1, got "
                         f"{min_density}, {max_density}")

    rng = np.random.default_rng(seed)
    for attempt in range(max_retries):
        draw = rng.random((n, n))
        np.fill_diagonal(draw, 2.0)  # never below any density
        dmax_rows = [np.flatnonzero(draw[v] < max_density) for v in range(n)]
        dmin_rows = [np.flatnonzero(draw[v] < min_density) for v in range(n)]
        meta = {
            "generator": "random-abstract",
            "n": n,
            "min_density": min_density,
            "max_density": max_density,
            "seed": seed,
            "attempt": attempt,
        }
        inst = Instance.from_mappings(n, dmin_rows, dmax_rows, meta)
        e_max = inst.graph().e_max
        if n == 1 or components(n, e_max).count == 1:
            return inst
    raise GenerationError(
        f"no connected max-power graph in {max_retries} attempts "
        f"(n={n}, max_density={max_density}, seed={seed})")

"""Solver outputs: merging traces, solutions, and merging-selection orders."""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class Merging:
    """One accepted merging: a node set joining that many components.

    At the moment it was taken, the nodes induced a connected max-power
    subgraph and sat in pairwise-distinct components, so taking it cut
    the component count by len(nodes) - 1.
    """

    nodes: tuple      # sorted node ids
    phase_k: int      # the k' in effect when taken
    step_index: int   # position in the trace


@dataclass(frozen=True)
class Solution:
    """A feasible boost set plus the trace that produced it."""

    algorithm: str
    u_set: tuple              # sorted node ids
    trace: tuple              # Merging entries, in order taken
    instance_digest: str
    k: int | None = None
    op_count: int | None = None   # union-find operation count (fast3 only)

    @property
    def size(self):
        return len(self.u_set)

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "k": self.k,
            "u_set": list(self.u_set),
            "trace": [{"nodes": list(m.nodes), "phase_k": m.phase_k}
                      for m in self.trace],
            "instance_digest": self.instance_digest,
        }

    def canonical_bytes(self):
        return (json.dumps(self.to_dict(), sort_keys=True,
                           separators=(",", ":")) + "\n").encode("utf-8")


class InvalidScheduleError(ValueError):
    """An explicit merging schedule that cannot drive a valid run."""


class MergingOrder:
    """How a solver picks among the candidate mergings at each step.

    lexicographic: smallest sorted node tuple first; fully deterministic.
    permutation(seed): lexicographic under a seeded relabeling of ids.
    schedule(entries): an explicit sequence of mergings that must replay
    exactly (used to reproduce worst-case behavior).
    """

    LEX = "lexicographic"
    PERM = "permutation"
    SCHEDULE = "schedule"

    def __init__(self, mode, seed=None, entries=None):
        self.mode = mode
        self.seed = seed
        self.entries = entries

    @classmethod
    def lexicographic(cls):
        return cls(cls.LEX)

    @classmethod
    def permutation(cls, seed):
        return cls(cls.PERM, seed=int(seed))

    @classmethod
    def schedule(cls, entries):
        norm = tuple(tuple(sorted(int(x) for x in e)) for e in entries)
        for e in norm:
            if len(e) < 2 or len(set(e)) != len(e):
                raise InvalidScheduleError(f"schedule entry {list(e)} is not a "
                                           "set of at least two distinct nodes")
        return cls(cls.SCHEDULE, entries=norm)

    def __repr__(self):
        if self.mode == self.PERM:
            return f"MergingOrder.permutation({self.seed})"
        if self.mode == self.SCHEDULE:
            return f"MergingOrder.schedule(<{len(self.entries)} entries>)"
        return "MergingOrder.lexicographic()"


def save_solution(sol, path):
    """Write the canonical solution JSON file."""
    with open(path, "wb") as fh:
        fh.write(sol.canonical_bytes())


def load_solution(path):
    """Read a solution JSON file back into a Solution."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    trace = tuple(Merging(tuple(entry["nodes"]), int(entry["phase_k"]), i)
                  for i, entry in enumerate(raw.get("trace", [])))
    k = raw.get("k")
    return Solution(
        algorithm=raw["algorithm"],
        u_set=tuple(raw["u_set"]),
        trace=trace,
        instance_digest=raw["instance_digest"],
        k=None if k is None else int(k),
    )


def save_schedule(entries, path):
    """Write a merging schedule file: {"mergings": [[ids], ...]}."""
    payload = {"mergings": [list(e) for e in entries]}
    with open(path, "wb") as fh:
        fh.write((json.dumps(payload, sort_keys=True,
                             separators=(",", ":")) + "\n").encode("utf-8"))


def load_schedule(path):
    """Read a merging schedule file into a MergingOrder."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict) or "mergings" not in raw:
        raise InvalidScheduleError(f"{path}: expected an object with 'mergings'")
    return MergingOrder.schedule(raw["mergings"])

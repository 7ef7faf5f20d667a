"""Command-line front end: generate, solve, verify, bench, ratio-table.

Everything is reproducible: generators are seeded, solvers are
deterministic for a fixed order, and instance/solution files are written
in canonical form, so identical invocations produce byte-identical
artifacts (timing columns aside).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import generators
from .exact import BudgetExceededError, solve_exact
from .generators import GenerationError
from .fast3 import fast3_solve
from .greedy import lower_bound_cc, solve_greedy, spanning_tree_baseline
from .instance import (InstanceError, InvalidInstanceError, components,
                       is_feasible, load, min_max_graph, save)
from .solution import (InvalidScheduleError, MergingOrder, Solution,
                       load_schedule, load_solution, save_schedule,
                       save_solution)

CSV_COLUMNS = ["instance", "digest", "algorithm", "k", "n", "s_min", "s_max",
               "cc_min", "size", "exact", "ratio", "op_count", "wall_ns"]

WORKERS_ENV = "RANGEASSIGN_WORKERS"


@dataclass
class RunRecord:
    """One solver execution on one instance, as reported to CSV/stdout."""

    instance: str
    digest: str
    algorithm: str
    k: int | None
    n: int
    s_min: int
    s_max: int
    cc_min: int
    size: int
    exact: int | None
    ratio: float | None
    op_count: int | None
    wall_ns: int

    def to_row(self):
        def cell(x):
            return "" if x is None else str(x)
        return [cell(getattr(self, col)) for col in CSV_COLUMNS]

    def to_json(self):
        return json.dumps(self.__dict__, sort_keys=True)


def _parse_algorithm(name):
    """Map an algorithm string to (tag, k). greedy-k carries its k."""
    if name.startswith("greedy-"):
        try:
            k = int(name.split("-", 1)[1])
        except ValueError:
            raise ValueError(f"bad greedy algorithm '{name}', use greedy-<k>")
        if k < 2:
            raise ValueError(f"greedy phase parameter must be >= 2, got {k}")
        return "greedy", k
    if name in ("fast3", "spanning-tree", "exact"):
        return name, None
    raise ValueError(f"unknown algorithm '{name}'")


def _run_algorithm(inst, name, *, order=None, scan_order=None, budget=None):
    """Execute one algorithm; returns (size, k, op_count, solution|None)."""
    tag, k = _parse_algorithm(name)
    if tag == "greedy":
        sol = solve_greedy(inst, k, order)
        return sol.size, k, None, sol
    if tag == "fast3":
        sol = fast3_solve(inst, scan_order=scan_order)
        return sol.size, 3, sol.op_count, sol
    if tag == "spanning-tree":
        sol = spanning_tree_baseline(inst)
        return sol.size, None, None, sol
    res = solve_exact(inst, budget=budget)
    sol = Solution(algorithm="exact", u_set=res.u_opt, trace=(),
                   instance_digest=inst.digest(), k=None)
    return res.size, None, None, sol


def cmd_gen(args):
    if args.family == "worst-case":
        fam = generators.gen_worst_case(args.k, args.t)
        save(fam.instance, args.out)
        schedule_out = args.schedule_out or args.out + ".schedule.json"
        save_schedule(fam.schedule, schedule_out)
        print(json.dumps({
            "out": args.out,
            "schedule": schedule_out,
            "n": fam.instance.n,
            "expected_solution_size": fam.expected_solution_size,
            "expected_optimum_size": fam.expected_optimum_size,
            "digest": fam.instance.digest(),
        }, sort_keys=True))
    elif args.family == "geometric":
        inst = generators.gen_geometric(args.n, args.rmin, args.rmax,
                                        side=args.side, seed=args.seed)
        save(inst, args.out)
        print(json.dumps({"out": args.out, "n": inst.n,
                          "digest": inst.digest()}, sort_keys=True))
    else:
        inst = generators.gen_random_abstract(args.n, args.min_density,
                                              args.max_density, seed=args.seed)
        save(inst, args.out)
        print(json.dumps({"out": args.out, "n": inst.n,
                          "digest": inst.digest()}, sort_keys=True))
    return 0


def _make_order(args):
    if args.schedule:
        return load_schedule(args.schedule)
    if args.order == "perm":
        return MergingOrder.permutation(args.seed)
    return MergingOrder.lexicographic()


def cmd_solve(args):
    inst = load(args.instance)
    order = _make_order(args)
    scan_order = None
    if args.scan_order:
        with open(args.scan_order, "r", encoding="utf-8") as fh:
            scan_order = np.asarray(json.load(fh), dtype=np.int64)
    inst.digest()  # cache outside the timed region
    inst.graph()
    start = time.perf_counter_ns()
    size, k, ops, sol = _run_algorithm(
        inst, args.algorithm, order=order, scan_order=scan_order,
        budget=args.budget)
    wall = time.perf_counter_ns() - start
    if args.out:
        save_solution(sol, args.out)
    cc = components(inst.n, inst.graph().e_min).count
    record = RunRecord(
        instance=args.instance,
        digest=inst.digest(),
        algorithm=args.algorithm,
        k=k,
        n=inst.n,
        s_min=inst.s_min,
        s_max=inst.s_max,
        cc_min=cc,
        size=size,
        exact=size if args.algorithm == "exact" else None,
        ratio=1.0 if args.algorithm == "exact" else None,
        op_count=ops,
        wall_ns=wall,
    )
    print(record.to_json())
    return 0


def cmd_verify(args):
    inst = load(args.instance)
    sol = load_solution(args.solution)
    if sol.instance_digest != inst.digest():
        print(f"error: solution digest {sol.instance_digest[:12]}… does not "
              f"match instance digest {inst.digest()[:12]}…", file=sys.stderr)
        return 2
    edges = min_max_graph(inst, sol.u_set)
    count = components(inst.n, edges).count
    verdict = "feasible" if count == 1 else "infeasible"
    print(json.dumps({"verdict": verdict, "components": count,
                      "size": len(sol.u_set)}, sort_keys=True))
    return 0 if count == 1 else 1


def _bench_one(path, algorithms, reps, want_exact, exact_max_n):
    """All rows for one instance file; raises only on load failure."""
    inst = load(path)
    inst.digest()
    inst.graph()
    cc = components(inst.n, inst.graph().e_min).count
    exact_size = None
    if want_exact and inst.n <= exact_max_n:
        exact_size = solve_exact(inst).size
    rows = []
    name = os.path.basename(path)
    for alg in algorithms:
        walls = []
        size = k = ops = None
        for _ in range(reps):
            t0 = time.perf_counter_ns()
            size, k, ops, _sol = _run_algorithm(inst, alg)
            walls.append(time.perf_counter_ns() - t0)
        ratio = None
        if exact_size is not None and exact_size > 0:
            ratio = size / exact_size
        elif exact_size == 0:
            ratio = 1.0 if size == 0 else None
        rows.append(RunRecord(
            instance=name, digest=inst.digest(), algorithm=alg, k=k,
            n=inst.n, s_min=inst.s_min, s_max=inst.s_max, cc_min=cc,
            size=size, exact=exact_size, ratio=ratio, op_count=ops,
            wall_ns=int(statistics.median(walls)),
        ))
    return rows


def cmd_bench(args):
    paths = sorted(
        os.path.join(args.corpus, f) for f in os.listdir(args.corpus)
        if f.endswith(".json") and not f.endswith(".schedule.json"))
    if not paths:
        print(f"error: no instance files in {args.corpus}", file=sys.stderr)
        return 2
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    for alg in algorithms:
        _parse_algorithm(alg)

    workers = int(os.environ.get(WORKERS_ENV, "1"))
    all_rows = []
    failures = 0
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = {pool.submit(_bench_one, p, algorithms, args.reps,
                                args.exact, args.exact_max_n): p
                    for p in paths}
            for fut, path in futs.items():
                try:
                    all_rows.extend(fut.result())
                except Exception as exc:  # per-instance failure, run continues
                    failures += 1
                    print(f"bench: {path}: {exc}", file=sys.stderr)
    else:
        for path in paths:
            try:
                all_rows.extend(_bench_one(path, algorithms, args.reps,
                                           args.exact, args.exact_max_n))
            except Exception as exc:
                failures += 1
                print(f"bench: {path}: {exc}", file=sys.stderr)

    all_rows.sort(key=lambda r: (r.instance, algorithms.index(r.algorithm)))
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in all_rows:
            writer.writerow(row.to_row())
    print(f"wrote {len(all_rows)} rows to {args.out}"
          + (f" ({failures} instances failed)" if failures else ""))
    return 0


def upper_bound(k):
    """Guaranteed approximation-ratio upper bound for phase parameter k."""
    return Fraction(1, k - 1) + sum(Fraction(1, i * i) for i in range(1, k))


def worst_case_limit(k):
    """Large-t limit of the adversarial family's ratio for parameter k."""
    return Fraction(3 * k - 2, 2 * k - 2)


def cmd_ratio_table(args):
    print(f"{'k':>3}  {'upper bound':>18}  {'(decimal)':>10}  "
          f"{'worst-case limit':>18}  {'(decimal)':>10}")
    for k in range(2, args.max_k + 1):
        ub = upper_bound(k)
        lb = worst_case_limit(k) if k >= 3 else Fraction(3 * k - 2, 2 * k - 2)
        print(f"{k:>3}  {str(ub):>18}  {float(ub):>10.6f}  "
              f"{str(lb):>18}  {float(lb):>10.6f}")
    print("upper bound tends to pi^2/6 ≈ 1.644934 as k grows")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rangeassign",
        description="Two-level symmetric range assignment toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate instances")
    gen_sub = p_gen.add_subparsers(dest="family", required=True)

    p_wc = gen_sub.add_parser("worst-case", help="adversarial chain family")
    p_wc.add_argument("--k", type=int, required=True)
    p_wc.add_argument("--t", type=int, required=True)
    p_wc.add_argument("--out", required=True)
    p_wc.add_argument("--schedule-out", default=None)

    p_geo = gen_sub.add_parser("geometric", help="random two-radius points")
    p_geo.add_argument("--n", type=int, required=True)
    p_geo.add_argument("--rmin", type=float, required=True)
    p_geo.add_argument("--rmax", type=float, required=True)
    p_geo.add_argument("--side", type=float, default=1.0)
    p_geo.add_argument("--seed", type=int, default=0)
    p_geo.add_argument("--out", required=True)

    p_rand = gen_sub.add_parser("random", help="random abstract relations")
    p_rand.add_argument("--n", type=int, required=True)
    p_rand.add_argument("--min-density", type=float, required=True)
    p_rand.add_argument("--max-density", type=float, required=True)
    p_rand.add_argument("--seed", type=int, default=0)
    p_rand.add_argument("--out", required=True)

    p_solve = sub.add_parser("solve", help="run one solver on one instance")
    p_solve.add_argument("instance")
    p_solve.add_argument("--algorithm", required=True,
                         help="greedy-<k>, fast3, spanning-tree, or exact")
    p_solve.add_argument("--order", choices=["lex", "perm"], default="lex")
    p_solve.add_argument("--seed", type=int, default=0,
                         help="seed for --order perm")
    p_solve.add_argument("--schedule", default=None,
                         help="explicit merging schedule file (greedy only)")
    p_solve.add_argument("--scan-order", default=None,
                         help="JSON node permutation for fast3")
    p_solve.add_argument("--budget", type=int, default=None,
                         help="size budget for exact")
    p_solve.add_argument("--out", default=None, help="solution file path")

    p_verify = sub.add_parser("verify", help="check a solution file")
    p_verify.add_argument("instance")
    p_verify.add_argument("solution")

    p_bench = sub.add_parser("bench", help="run algorithms over a corpus dir")
    p_bench.add_argument("corpus")
    p_bench.add_argument("--algorithms", required=True,
                         help="comma-separated algorithm list")
    p_bench.add_argument("--reps", type=int, default=5)
    p_bench.add_argument("--out", required=True)
    p_bench.add_argument("--exact", action="store_true",
                         help="also compute exact sizes and ratios")
    p_bench.add_argument("--exact-max-n", type=int, default=16)

    p_ratio = sub.add_parser("ratio-table",
                             help="print per-k ratio bounds")
    p_ratio.add_argument("--max-k", type=int, default=10)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen": cmd_gen,
        "solve": cmd_solve,
        "verify": cmd_verify,
        "bench": cmd_bench,
        "ratio-table": cmd_ratio_table,
    }
    try:
        return handlers[args.command](args)
    except (InstanceError, InvalidInstanceError, InvalidScheduleError,
            BudgetExceededError, GenerationError, ValueError,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

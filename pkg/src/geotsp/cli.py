"""Command-line surface: instance generation, solves, benchmark matrices,
per-pair statistics export and oracle verification.

Exit codes: 0 success/optimal, 2 timeout, 1 usage or parse error.
"""

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import NoReturn

from .engine import ModelKind, SolveStatus, StrategyConfig, VarHeuristic, solve
from .instances import (
    DistanceMode,
    Instance,
    gen_clustered,
    gen_uniform,
    parse_tsplib,
    write_tsplib,
)
from .oracle import (
    ENUMERATE_MAX_N,
    TooLargeError,
    count_crossings,
    enumerate_optimal,
    held_karp_dp,
    verify_hull_order,
)

__all__ = ["main", "BenchRecord", "BENCH_HEADER", "STATS_HEADER", "CACTUS_HEADER"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TIMEOUT = 2

BENCH_HEADER = [
    "instance",
    "n",
    "kind",
    "model",
    "strategy",
    "status",
    "length",
    "nodes",
    "failures",
    "elapsed",
    "seed",
]
STATS_HEADER = ["i", "j", "deletions", "failures", "no_prune"]
CACTUS_HEADER = ["model", "strategy", "solved", "time"]


@dataclass
class BenchRecord:
    instance: str
    n: int
    kind: str
    model: str
    strategy: str
    status: str
    length: str
    nodes: int
    failures: int
    elapsed: str
    seed: str

    def row(self) -> list[str]:
        return [str(asdict(self)[key]) for key in BENCH_HEADER]


class _Parser(argparse.ArgumentParser):
    """argparse that exits with the documented usage code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _split_name(name: str) -> tuple[str, str]:
    parts = name.split("_")
    if len(parts) == 3 and parts[0] in ("uniform", "clustered") and parts[2].isdigit():
        return parts[0], parts[2]
    return "tsplib", ""


def _load_instance(path: Path, mode: DistanceMode) -> Instance:
    return parse_tsplib(path.read_text(encoding="utf-8"), distance_mode=mode)


def _record_from_solve(inst: Instance, model: ModelKind, strategy: StrategyConfig, result) -> BenchRecord:
    kind, seed = _split_name(inst.name)
    tour = result.tour
    return BenchRecord(
        instance=inst.name,
        n=inst.n,
        kind=kind,
        model=model.value,
        strategy=strategy.variable.value,
        status=result.status.value,
        length="" if tour is None else repr(tour.length),
        nodes=result.stats.nodes,
        failures=result.stats.failures,
        elapsed=f"{result.stats.elapsed:.6f}",
        seed=seed,
    )


def _solve_task(args: tuple[str, str, str, float | None, str]) -> BenchRecord:
    path_str, model_value, strategy_value, time_limit, mode_value = args
    path = Path(path_str)
    model = ModelKind(model_value)
    strategy = StrategyConfig(variable=VarHeuristic(strategy_value))
    try:
        inst = _load_instance(path, DistanceMode(mode_value))
        result = solve(inst, model=model, strategy=strategy, time_limit=time_limit)
    except Exception as exc:  # per-instance failures must not stop the run
        return BenchRecord(
            instance=path.stem,
            n=0,
            kind="tsplib",
            model=model_value,
            strategy=strategy_value,
            status=f"error: {exc}",
            length="",
            nodes=0,
            failures=0,
            elapsed="",
            seed="",
        )
    return _record_from_solve(inst, model, strategy, result)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for idx in range(args.count):
        seed = args.seed + idx
        try:
            if args.kind == "uniform":
                inst = gen_uniform(args.n, seed)
            else:
                clusters = args.clusters if args.clusters is not None else min(4, args.n)
                inst = gen_clustered(args.n, clusters, seed)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        path = out_dir / f"{args.kind}_{args.n}_{seed}.tsp"
        try:
            path.write_text(write_tsplib(inst), encoding="utf-8")
        except OSError as exc:
            print(f"error writing {path}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(path)
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        inst = _load_instance(Path(args.instance), DistanceMode(args.distance))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    model = ModelKind(args.model)
    strategy = StrategyConfig(variable=VarHeuristic(args.strategy))
    result = solve(
        inst,
        model=model,
        strategy=strategy,
        time_limit=args.time_limit,
        naive_nocross=args.naive_nocross,
    )
    record = _record_from_solve(inst, model, strategy, result)
    if args.format == "jsonl":
        print(json.dumps(asdict(record)))
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(BENCH_HEADER)
        writer.writerow(record.row())
    return EXIT_OK if result.status is SolveStatus.OPTIMAL else EXIT_TIMEOUT


def run_bench(
    paths: list[Path],
    models: list[ModelKind],
    strategies: list[VarHeuristic],
    time_limit: float | None,
    mode: DistanceMode,
    jobs: int,
) -> list[BenchRecord]:
    """Full (instance x model x strategy) matrix, one solve per worker."""
    tasks = [
        (str(path), model.value, strat.value, time_limit, mode.value)
        for path in paths
        for model in models
        for strat in strategies
    ]
    if jobs <= 1:
        records = [_solve_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_solve_task, tasks))
    records.sort(key=lambda r: (r.instance, r.model, r.strategy))
    return records


def cactus_rows(records: list[BenchRecord]) -> list[list[str]]:
    """Per configuration: k-th smallest solve time among solved instances."""
    rows: list[list[str]] = []
    configs = sorted({(r.model, r.strategy) for r in records})
    for model, strategy in configs:
        times = sorted(
            float(r.elapsed)
            for r in records
            if r.model == model and r.strategy == strategy and r.status == "optimal"
        )
        for k, t in enumerate(times, start=1):
            rows.append([model, strategy, str(k), f"{t:.6f}"])
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    in_dir = Path(args.instances)
    paths = sorted(in_dir.glob("*.tsp"))
    if not paths:
        print(f"error: no .tsp files in {in_dir}", file=sys.stderr)
        return EXIT_USAGE
    models = [ModelKind(m) for m in args.models.split(",")]
    strategies = [VarHeuristic(s) for s in args.strategies.split(",")]
    records = run_bench(paths, models, strategies, args.time_limit, DistanceMode(args.distance), args.jobs)

    out = Path(args.out)
    if args.format == "jsonl":
        with out.open("w", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(asdict(record)) + "\n")
    else:
        with out.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(BENCH_HEADER)
            for record in records:
                writer.writerow(record.row())
    cactus_path = out.with_name(out.stem + "_cactus.csv")
    with cactus_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CACTUS_HEADER)
        for row in cactus_rows(records):
            writer.writerow(row)
    errors = [r for r in records if r.status.startswith("error")]
    for record in errors:
        print(f"{record.instance}: {record.status}", file=sys.stderr)
    print(f"{len(records)} records -> {out}, cactus data -> {cactus_path}")
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    model = ModelKind(args.model)
    if model is ModelKind.BASE:
        print("error: stats requires a model that includes nocrossing (nocross or geom)", file=sys.stderr)
        return EXIT_USAGE
    try:
        inst = _load_instance(Path(args.instance), DistanceMode(args.distance))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    strategy = StrategyConfig(variable=VarHeuristic(args.strategy))
    result = solve(inst, model=model, strategy=strategy, time_limit=args.time_limit)
    rows = []
    for (i, j), pair in sorted(result.stats.pair_stats.items()):
        rows.append([i, j, pair.deletions, pair.failures, int(pair.deletions == 0)])
    out = Path(args.out)
    with out.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(STATS_HEADER)
        for row in rows:
            writer.writerow(row)
    print(
        f"{len(rows)} pairs, {result.stats.nocross_deletions} deletions, "
        f"status {result.status.value} -> {out}"
    )
    return EXIT_OK if result.status is SolveStatus.OPTIMAL else EXIT_TIMEOUT


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        inst = _load_instance(Path(args.instance), DistanceMode(args.distance))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        reference = held_karp_dp(inst)
    except TooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"held_karp_dp: {reference.optimal_length!r}")
    ok = True
    if inst.n <= ENUMERATE_MAX_N:
        brute = enumerate_optimal(inst)
        agree = abs(brute.optimal_length - reference.optimal_length) <= 1e-9
        ok &= agree
        print(f"enumerate_optimal: {brute.optimal_length!r} ({'agree' if agree else 'DISAGREE'})")
    for model in ModelKind:
        result = solve(inst, model=model, time_limit=args.time_limit)
        if result.status is not SolveStatus.OPTIMAL or result.tour is None:
            print(f"solve[{model.value}]: {result.status.value}")
            ok = False
            continue
        agree = abs(result.tour.length - reference.optimal_length) <= 1e-6
        crossings = count_crossings(inst, result.tour)
        hull_ok = verify_hull_order(inst, result.tour)
        ok &= agree and crossings == 0 and hull_ok
        print(
            f"solve[{model.value}]: {result.tour.length!r} ({'agree' if agree else 'DISAGREE'}), "
            f"crossings={crossings}, hull_order={'ok' if hull_ok else 'VIOLATED'}"
        )
    print("verdict: " + ("all checks passed" if ok else "CHECKS FAILED"))
    return EXIT_OK if ok else EXIT_USAGE


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common_solve_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=[m.value for m in ModelKind], default="geom")
    p.add_argument("--strategy", choices=[s.value for s in VarHeuristic], default="first-fail")
    p.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p.add_argument("--distance", choices=[m.value for m in DistanceMode], default="exact")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geotsp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate TSPLIB instance files")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--kind", choices=["uniform", "clustered"], default="uniform")
    p_gen.add_argument("--count", type=int, default=1)
    p_gen.add_argument("--seed", type=int, default=1)
    p_gen.add_argument("--clusters", type=int, default=None)
    p_gen.add_argument("--out", required=True, metavar="DIR")
    p_gen.set_defaults(func=cmd_gen)

    p_solve = sub.add_parser("solve", help="solve one instance file")
    p_solve.add_argument("instance")
    _add_common_solve_args(p_solve)
    p_solve.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p_solve.add_argument("--naive-nocross", action="store_true", help="debug: force the naive crossing filter")
    p_solve.set_defaults(func=cmd_solve)

    p_bench = sub.add_parser("bench", help="run an instance x model x strategy matrix")
    p_bench.add_argument("instances", metavar="DIR")
    p_bench.add_argument("--models", default="base,nocross,geom", metavar="M1,M2")
    p_bench.add_argument("--strategies", default="first-fail", metavar="S1,S2")
    p_bench.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p_bench.add_argument("--distance", choices=[m.value for m in DistanceMode], default="exact")
    p_bench.add_argument("--jobs", type=int, default=1)
    p_bench.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p_bench.add_argument("--out", required=True, metavar="CSV")
    p_bench.set_defaults(func=cmd_bench)

    p_stats = sub.add_parser("stats", help="export per-pair nocrossing activity")
    p_stats.add_argument("instance")
    _add_common_solve_args(p_stats)
    p_stats.add_argument("--out", required=True, metavar="CSV")
    p_stats.set_defaults(func=cmd_stats)

    p_verify = sub.add_parser("verify", help="cross-check solver against exact oracles")
    p_verify.add_argument("instance")
    p_verify.add_argument("--distance", choices=[m.value for m in DistanceMode], default="exact")
    p_verify.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

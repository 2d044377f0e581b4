"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; the heavy solve matrices parallelize over processes.
"""

import math
import os
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

import numpy as np
import pytest

from geotsp.cli import main as cli_main
from geotsp.constraints import (
    HullOrder,
    NocrossPropagator,
    PairStats,
    PathInfo,
    clockwise_hull_pair_pruning,
    clockwise_path_pruning,
    kernel_counter,
    naive_crossing_filter,
)
from geotsp.engine import ModelKind, SolveStatus, StrategyConfig, VarHeuristic, solve
from geotsp.geometry import Point
from geotsp.instances import DistanceMode, Instance, gen_clustered, gen_uniform, write_tsplib
from geotsp.oracle import count_crossings, enumerate_optimal, held_karp_dp, verify_hull_order
from geotsp.store import VarStore

from conftest import random_substore

JOBS = min(2, os.cpu_count() or 1)


@contextmanager
def criterion(num: int, desc: str):
    try:
        yield
    except BaseException:
        print(f"\n[criterion {num:2d}] FAIL  {desc}", flush=True)
        raise
    print(f"\n[criterion {num:2d}] PASS  {desc}", flush=True)


# ---------------------------------------------------------------------------
# criterion 1: dual-oracle agreement
# ---------------------------------------------------------------------------


def test_criterion_1_oracle_agreement():
    rng = random.Random(4242)
    worst = 0.0
    with criterion(1, "held_karp_dp == enumerate_optimal on 100 instances, both distance modes"):
        for k in range(100):
            n = rng.randint(5, 9)
            seed = rng.randint(0, 10**6)
            for mode in DistanceMode:
                if k % 2 == 0:
                    inst = gen_uniform(n, seed, distance_mode=mode)
                else:
                    inst = gen_clustered(n, 3, seed, distance_mode=mode)
                delta = abs(held_karp_dp(inst).optimal_length - enumerate_optimal(inst).optimal_length)
                worst = max(worst, delta)
                assert delta <= 1e-9, (inst.name, mode, delta)
        print(f"  max |delta| = {worst:.2e}", end="")


# ---------------------------------------------------------------------------
# criteria 2-4: solver exactness and tour properties at n=12
# ---------------------------------------------------------------------------

N12_SEEDS = list(range(500, 550))


def _exactness_task(args: tuple[str, int]) -> tuple:
    kind, seed = args
    if kind == "uniform":
        inst = gen_uniform(12, seed)
    else:
        inst = gen_clustered(12, 4, seed)
    hk_length = held_karp_dp(inst).optimal_length
    runs = []
    for model in ModelKind:
        for var in VarHeuristic:
            result = solve(inst, model=model, strategy=StrategyConfig(variable=var))
            runs.append(
                (
                    model.value,
                    var.value,
                    result.status.value,
                    result.tour.length if result.tour else None,
                    result.tour.successors if result.tour else None,
                )
            )
    return kind, seed, hk_length, runs


@pytest.fixture(scope="module")
def exactness_results():
    tasks = [(kind, seed) for kind in ("uniform", "clustered") for seed in N12_SEEDS]
    with ProcessPoolExecutor(max_workers=JOBS) as pool:
        return list(pool.map(_exactness_task, tasks, chunksize=4))


def _rebuild(kind: str, seed: int) -> Instance:
    return gen_uniform(12, seed) if kind == "uniform" else gen_clustered(12, 4, seed)


def test_criterion_2_solver_exactness(exactness_results):
    with criterion(2, "all models x strategies optimal and equal to held_karp_dp on 100 n=12 instances"):
        assert len(exactness_results) == 100
        for kind, seed, hk_length, runs in exactness_results:
            assert len(runs) == 6
            for model, var, status, length, _ in runs:
                assert status == "optimal", (kind, seed, model, var)
                assert abs(length - hk_length) <= 1e-6, (kind, seed, model, var, length, hk_length)


def test_criterion_3_no_crossings_in_optimal_tours(exactness_results):
    from geotsp.engine import Tour

    with criterion(3, "count_crossings == 0 on every optimal tour from criterion 2"):
        for kind, seed, _, runs in exactness_results:
            inst = _rebuild(kind, seed)
            for model, var, _, _, successors in runs:
                tour = Tour.from_successors(inst, successors)
                assert count_crossings(inst, tour) == 0, (kind, seed, model, var)


def test_criterion_4_hull_order_in_optimal_tours(exactness_results):
    from geotsp.engine import Tour

    with criterion(4, "verify_hull_order holds on every optimal tour from criterion 2"):
        for kind, seed, _, runs in exactness_results:
            inst = _rebuild(kind, seed)
            for model, var, _, _, successors in runs:
                tour = Tour.from_successors(inst, successors)
                assert verify_hull_order(inst, tour), (kind, seed, model, var)


# ---------------------------------------------------------------------------
# criterion 5: propagator equivalence with the naive filter
# ---------------------------------------------------------------------------


def _distinct_points(rng: random.Random, n: int) -> list[Point]:
    while True:
        pts = [Point(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(n)]
        if len(set(pts)) == n:
            return pts


def test_criterion_5_propagator_equivalence():
    rng = random.Random(31337)
    states = 10_000
    with criterion(5, f"nocross removals == naive filter on {states} fuzzed states"):
        for _ in range(states):
            n = rng.randint(6, 10)
            points = _distinct_points(rng, n)
            store = random_substore(n, rng)
            i, j = rng.sample(range(n), 2)
            expected = naive_crossing_filter(store, points, i, j)
            before = set(store.domains[j])
            prop = NocrossPropagator(store, points, i, j, PairStats())
            ok = prop.propagate()
            removed = before - store.domains[j]
            if expected == before:
                assert not ok and removed < expected
            else:
                assert ok and removed == expected, (points, i, j, sorted(removed), sorted(expected))


# ---------------------------------------------------------------------------
# criterion 6: path rule implies the pair rule at the root
# ---------------------------------------------------------------------------


def _removal_set(before: list[frozenset[int]], store: VarStore) -> set[tuple[int, int]]:
    out = set()
    for i, dom in enumerate(before):
        out.update((i, v) for v in dom - store.domains[i])
    return out


def test_criterion_6_path_rule_implies_pair_rule():
    rng = random.Random(606)
    with criterion(6, "clockwise path-rule removals contain pair-rule removals at 100 roots"):
        for _ in range(100):
            n = rng.randint(5, 15)
            seed = rng.randint(0, 10**6)
            inst = gen_uniform(n, seed) if rng.random() < 0.5 else gen_clustered(n, 3, seed)
            hull = HullOrder(list(inst.points))

            s_pair = VarStore(inst.n)
            before_pair = s_pair.snapshot()
            assert clockwise_hull_pair_pruning(s_pair, hull)
            pair_removals = _removal_set(before_pair, s_pair)

            s_path = VarStore(inst.n)
            before_path = s_path.snapshot()
            assert clockwise_path_pruning(s_path, hull, PathInfo.compute(s_path))
            path_removals = _removal_set(before_path, s_path)

            assert path_removals >= pair_removals, inst.name


# ---------------------------------------------------------------------------
# criterion 7: pruning benefit trend at n=18
# ---------------------------------------------------------------------------

N18_SEEDS = list(range(2001, 2031))
N18_TIME_LIMIT = 60.0


def _trend_task(args: tuple[int, str]) -> tuple[int, str, str, int]:
    seed, model_value = args
    inst = gen_uniform(18, seed)
    result = solve(
        inst,
        model=ModelKind(model_value),
        strategy=StrategyConfig(variable=VarHeuristic.FIRST_FAIL),
        time_limit=N18_TIME_LIMIT,
    )
    return seed, model_value, result.status.value, result.stats.failures


def test_criterion_7_pruning_benefit_trend():
    tasks = [(seed, model.value) for seed in N18_SEEDS for model in ModelKind]
    with criterion(7, "n=18/60s trend: median failures geom <= nocross <= base; solved geom >= base"):
        with ProcessPoolExecutor(max_workers=JOBS) as pool:
            rows = list(pool.map(_trend_task, tasks, chunksize=1))
        failures = {m.value: [] for m in ModelKind}
        solved = {m.value: 0 for m in ModelKind}
        for _, model_value, status, fail_count in rows:
            failures[model_value].append(fail_count)
            if status == "optimal":
                solved[model_value] += 1
        med = {m: statistics.median(v) for m, v in failures.items()}
        print(f"  median failures: {med}; solved: {solved}", end="")
        assert med["geom"] <= med["nocross"] <= med["base"], med
        assert solved["geom"] >= solved["base"], solved


# ---------------------------------------------------------------------------
# criterion 8: all points on a circle solve at the root
# ---------------------------------------------------------------------------


def _circle_instance(n: int, seed: int) -> Instance:
    rng = random.Random(seed)
    while True:
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
        pts = [Point(500 + 400 * math.cos(a), 500 + 400 * math.sin(a)) for a in angles]
        if len(set(pts)) == n:
            return Instance(f"circle_{n}_{seed}", tuple(pts))


def test_criterion_8_circle_instances_forced_at_root():
    with criterion(8, "20 circle instances (n=15): model geom solves with 0 failures"):
        for seed in range(800, 820):
            inst = _circle_instance(15, seed)
            result = solve(inst, model=ModelKind.GEOM)
            assert result.status is SolveStatus.OPTIMAL, seed
            assert result.stats.failures == 0, (seed, result.stats.failures)


# ---------------------------------------------------------------------------
# criterion 9: stats surface (Figure-4 indicators)
# ---------------------------------------------------------------------------


def test_criterion_9_stats_surface(tmp_path, capsys):
    import csv

    with criterion(9, "cmd_stats on a 20-node instance: 190 pair rows, deletions sum to engine total"):
        inst = gen_uniform(20, 1234)
        path = tmp_path / "u20.tsp"
        path.write_text(write_tsplib(inst), encoding="utf-8")
        out = tmp_path / "pairs.csv"
        code = cli_main(
            ["stats", str(path), "--model", "geom", "--time-limit", "120", "--out", str(out)]
        )
        stdout = capsys.readouterr().out
        assert code == 0, stdout
        with out.open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 190
        csv_total = sum(int(row["deletions"]) for row in rows)
        reported = int(stdout.split(" deletions")[0].rsplit(" ", 1)[-1])
        assert csv_total == reported, (csv_total, reported)
        assert csv_total > 0


# ---------------------------------------------------------------------------
# criterion 10: O(d) complexity guard
# ---------------------------------------------------------------------------


def _loglog_slope(samples: dict[int, list[int]]) -> float:
    xs = []
    ys = []
    for d, counts in samples.items():
        if len(counts) >= 3:
            xs.append(math.log(d))
            ys.append(math.log(max(statistics.mean(counts), 1e-9)))
    assert len(xs) >= 8, "not enough distinct domain sizes for a fit"
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def test_criterion_10_complexity_guard():
    rng = random.Random(1010)
    fast: dict[int, list[int]] = {}
    naive: dict[int, list[int]] = {}
    with criterion(10, "nocross kernel calls grow linearly in domain size (naive filter quadratically)"):
        for _ in range(2500):
            n = rng.randint(6, 20)
            points = _distinct_points(rng, n)
            store = random_substore(n, rng)
            i, j = rng.sample(range(n), 2)
            d = len(store.domains[i]) + len(store.domains[j])
            kernel_counter.reset()
            naive_crossing_filter(store, points, i, j)
            naive.setdefault(d, []).append(kernel_counter.count)
            prop = NocrossPropagator(store, points, i, j, PairStats())
            prop.propagate()
            fast.setdefault(d, []).append(prop.last_ops)
        fast_slope = _loglog_slope(fast)
        naive_slope = _loglog_slope(naive)
        print(f"  fit exponents: fast={fast_slope:.3f}, naive={naive_slope:.3f}", end="")
        assert fast_slope <= 1.2, fast_slope
        assert naive_slope >= 1.5, naive_slope

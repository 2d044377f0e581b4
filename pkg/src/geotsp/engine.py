"""Branch-and-bound search over successor variables.

Binary branching (Next_i = v or Next_i != v) with first-fail or max-regret
variable selection and nearest-value ordering. The upper bound is seeded by
nearest-neighbor + 2-opt; the node bound is the sum over all vertices of the
cheapest outgoing edge still in the domain.
"""

import math
import time
from dataclasses import dataclass, field
from enum import Enum

from .constraints import (
    AllDifferentPropagator,
    CircuitPropagator,
    ClockwisePropagator,
    HullOrder,
    NocrossPropagator,
    PairStats,
    clockwise_hull_pair_pruning,
)
from .instances import DistanceMode, Instance
from .store import Propagator, RemoveResult, VarStore, propagate_fixpoint

__all__ = [
    "DELTA_EXACT",
    "ModelKind",
    "VarHeuristic",
    "ValueHeuristic",
    "StrategyConfig",
    "SearchStats",
    "Tour",
    "SolveStatus",
    "SolveResult",
    "ObjectiveBoundPropagator",
    "select_var_first_fail",
    "select_var_max_regret",
    "select_value_nearest",
    "warm_start",
    "solve",
]

DELTA_EXACT = 1e-9


class ModelKind(Enum):
    BASE = "base"
    NOCROSS = "nocross"
    GEOM = "geom"


class VarHeuristic(Enum):
    FIRST_FAIL = "first-fail"
    MAX_REGRET = "max-regret"


class ValueHeuristic(Enum):
    NEAREST = "nearest"


@dataclass(frozen=True)
class StrategyConfig:
    variable: VarHeuristic = VarHeuristic.FIRST_FAIL
    value: ValueHeuristic = ValueHeuristic.NEAREST


@dataclass
class SearchStats:
    """Search counters plus per-pair nocrossing activity (deletions,
    failures, activations without pruning)."""

    nodes: int = 0
    failures: int = 0
    solutions: int = 0
    elapsed: float = 0.0
    pair_stats: dict[tuple[int, int], PairStats] = field(default_factory=dict)

    @property
    def nocross_deletions(self) -> int:
        return sum(p.deletions for p in self.pair_stats.values())

    @property
    def nocross_failures(self) -> int:
        return sum(p.failures for p in self.pair_stats.values())

    @property
    def nocross_no_prune_activations(self) -> int:
        return sum(p.no_prune_activations for p in self.pair_stats.values())


@dataclass(frozen=True)
class Tour:
    """A Hamiltonian cycle as a successor array plus its length."""

    successors: tuple[int, ...]
    length: float

    @staticmethod
    def from_successors(inst: Instance, successors: list[int] | tuple[int, ...]) -> "Tour":
        n = inst.n
        succ = tuple(successors)
        if len(succ) != n or sorted(succ) != list(range(n)):
            raise ValueError("successors must be a permutation of 0..n-1")
        v = 0
        length = 0.0
        for step in range(n):
            length += inst.distance(v, succ[v])
            v = succ[v]
            if v == 0 and step != n - 1:
                raise ValueError("successors do not form a single n-cycle")
        if v != 0:
            raise ValueError("successors do not form a single n-cycle")
        return Tour(succ, length)

    def order(self) -> list[int]:
        out = [0]
        v = self.successors[0]
        while v != 0:
            out.append(v)
            v = self.successors[v]
        return out


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    TIMED_OUT = "timeout"


@dataclass
class SolveResult:
    status: SolveStatus
    tour: Tour | None
    stats: SearchStats


# ---------------------------------------------------------------------------
# objective bound
# ---------------------------------------------------------------------------


class ObjectiveBoundPropagator(Propagator):
    """Fail when the per-vertex cheapest-edge sum exceeds the incumbent bound
    and drop edges that no completion under the bound can use."""

    __slots__ = ("store", "dist", "limit")

    def __init__(self, store: VarStore, dist: list[list[float]]) -> None:
        super().__init__()
        self.store = store
        self.dist = dist
        self.limit = math.inf

    def propagate(self) -> bool:
        store = self.store
        dist = self.dist
        limit = self.limit
        if math.isinf(limit):
            return True
        domains = store.domains
        n = store.n
        mins = [0.0] * n
        base = 0.0
        for i in range(n):
            row = dist[i]
            m = min(row[v] for v in domains[i])
            mins[i] = m
            base += m
        if base > limit:
            return False
        for i in range(n):
            slack = limit - base + mins[i]
            row = dist[i]
            over = [v for v in domains[i] if row[v] > slack]
            for v in over:
                if store.remove(i, v) is RemoveResult.FAILURE:
                    return False
        return True


# ---------------------------------------------------------------------------
# branching heuristics
# ---------------------------------------------------------------------------


def select_var_first_fail(store: VarStore) -> int | None:
    """Unbound variable with the smallest domain; ties to the smallest index."""
    best = None
    best_size = math.inf
    for i in range(store.n):
        size = len(store.domains[i])
        if 1 < size < best_size:
            best = i
            best_size = size
    return best


def select_var_max_regret(store: VarStore, dist: list[list[float]]) -> int | None:
    """Unbound variable with the largest gap between its two cheapest
    outgoing edges; ties to the smallest index."""
    best = None
    best_regret = -math.inf
    for i in range(store.n):
        dom = store.domains[i]
        if len(dom) <= 1:
            continue
        row = dist[i]
        m1 = m2 = math.inf
        for v in dom:
            d = row[v]
            if d < m1:
                m2 = m1
                m1 = d
            elif d < m2:
                m2 = d
        regret = m2 - m1
        if regret > best_regret:
            best = i
            best_regret = regret
    return best


def select_value_nearest(store: VarStore, dist: list[list[float]], i: int) -> int:
    """Cheapest candidate successor of i; ties to the smallest index."""
    row = dist[i]
    return min(store.domains[i], key=lambda v: (row[v], v))


# ---------------------------------------------------------------------------
# warm start: nearest neighbor + 2-opt
# ---------------------------------------------------------------------------


def _two_opt(order: list[int], dist: list[list[float]]) -> None:
    # order[0] stays anchored; (a, b) ranges over non-adjacent edge pairs.
    n = len(order)
    improved = True
    while improved:
        improved = False
        for a in range(1, n - 1):
            i0 = order[a - 1]
            i1 = order[a]
            for b in range(a + 1, n):
                j0 = order[b]
                j1 = order[(b + 1) % n]
                if i0 == j1:
                    continue
                delta = dist[i0][j0] + dist[i1][j1] - dist[i0][i1] - dist[j0][j1]
                if delta < -1e-12:
                    order[a : b + 1] = order[a : b + 1][::-1]
                    improved = True
                    i1 = order[a]


def _warm_order(dist: list[list[float]], n: int) -> list[int]:
    unvisited = set(range(1, n))
    order = [0]
    v = 0
    while unvisited:
        row = dist[v]
        v = min(unvisited, key=lambda u: (row[u], u))
        unvisited.remove(v)
        order.append(v)
    _two_opt(order, dist)
    return order


def _warm_tour(inst: Instance, dist: list[list[float]]) -> Tour:
    order = _warm_order(dist, inst.n)
    succ = [0] * inst.n
    for k, v in enumerate(order):
        succ[v] = order[(k + 1) % inst.n]
    return Tour.from_successors(inst, succ)


def warm_start(inst: Instance) -> Tour:
    """Nearest-neighbor tour from vertex 0, improved by 2-opt to exhaustion."""
    return _warm_tour(inst, inst.distance_matrix())


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def solve(
    inst: Instance,
    model: ModelKind = ModelKind.GEOM,
    strategy: StrategyConfig = StrategyConfig(),
    time_limit: float | None = None,
    naive_nocross: bool = False,
) -> SolveResult:
    """Depth-first branch-and-bound to proven optimality (or time limit)."""
    t_start = time.perf_counter()
    stats = SearchStats()
    deadline = None if time_limit is None else t_start + time_limit

    def finish(status: SolveStatus, tour: Tour | None) -> SolveResult:
        stats.elapsed = time.perf_counter() - t_start
        return SolveResult(status, tour, stats)

    if time_limit is not None and time_limit <= 0:
        return finish(SolveStatus.TIMED_OUT, None)

    n = inst.n
    points = list(inst.points)
    dist = inst.distance_matrix()
    store = VarStore(n)

    objective = ObjectiveBoundPropagator(store, dist)
    props: list[Propagator] = [AllDifferentPropagator(store), CircuitPropagator(store), objective]
    for prop in props:
        for i in range(n):
            store.subscribe(i, prop)
    if model is not ModelKind.BASE:
        for i in range(n):
            for j in range(i + 1, n):
                pair = PairStats()
                stats.pair_stats[(i, j)] = pair
                forward = NocrossPropagator(store, points, i, j, pair, naive=naive_nocross)
                backward = NocrossPropagator(store, points, j, i, pair, naive=naive_nocross)
                store.subscribe(i, forward)
                store.subscribe(j, backward)
                props.extend((forward, backward))
    hull = None
    if model is ModelKind.GEOM:
        hull = HullOrder(points)
        clockwise = ClockwisePropagator(store, points, hull)
        for i in range(n):
            store.subscribe(i, clockwise)
        props.append(clockwise)

    delta = 1.0 if inst.distance_mode is DistanceMode.TSPLIB_ROUND else DELTA_EXACT
    incumbent = _warm_tour(inst, dist)
    objective.limit = incumbent.length - delta

    if hull is not None and not clockwise_hull_pair_pruning(store, hull):
        return finish(SolveStatus.OPTIMAL, incumbent)
    if not propagate_fixpoint(store, tuple(props)):
        return finish(SolveStatus.OPTIMAL, incumbent)

    if strategy.variable is VarHeuristic.FIRST_FAIL:
        def select_var() -> int | None:
            return select_var_first_fail(store)
    else:
        def select_var() -> int | None:
            return select_var_max_regret(store, dist)

    frames: list[tuple[int, int, bool]] = []
    while True:
        if deadline is not None and time.perf_counter() > deadline:
            return finish(SolveStatus.TIMED_OUT, incumbent)

        if store.all_bound():
            succ = [store.value(i) for i in range(n)]
            incumbent = Tour.from_successors(inst, succ)
            stats.solutions += 1
            objective.limit = incumbent.length - delta
            ok = False
        else:
            i = select_var()
            v = select_value_nearest(store, dist, i)
            store.push_level()
            frames.append((i, v, True))
            stats.nodes += 1
            store.assign(i, v)
            ok = propagate_fixpoint(store)
            if not ok:
                stats.failures += 1

        while not ok:
            if not frames:
                return finish(SolveStatus.OPTIMAL, incumbent)
            i, v, was_assign = frames.pop()
            store.backtrack()
            if not was_assign:
                continue
            store.push_level()
            frames.append((i, v, False))
            stats.nodes += 1
            if store.remove(i, v) is RemoveResult.FAILURE:
                ok = False
            else:
                ok = propagate_fixpoint(store)
            if not ok:
                stats.failures += 1

"""The model's propagators: alldifferent, circuit, nocrossing, clockwise.

The nocrossing propagator prunes with O(|domain|) geometry-kernel calls per
activation by reducing "segment from j crosses every possible segment from i"
to two angle comparisons against the extreme possible segments, confirmed by
exact crossing tests. Its removal set is required to equal the naive
arc-consistency filter exactly; `naive_crossing_filter` is the reference.
"""

from dataclasses import dataclass, field

from .geometry import (
    Orientation,
    Point,
    ccw_angle,
    convex_hull,
    is_left_of,
    orient,
    segments_cross,
)
from .store import Propagator, RemoveResult, VarStore

__all__ = [
    "kernel_counter",
    "PairStats",
    "PathInfo",
    "HullOrder",
    "AllDifferentPropagator",
    "CircuitPropagator",
    "NocrossPropagator",
    "ClockwisePropagator",
    "naive_crossing_filter",
    "clockwise_hull_pair_pruning",
    "clockwise_ground_pruning",
    "clockwise_path_pruning",
]

_CCW = Orientation.COUNTERCLOCKWISE
_CW = Orientation.CLOCKWISE
_COL = Orientation.COLLINEAR

_FAILED = RemoveResult.FAILURE
_REMOVED = RemoveResult.REMOVED


class KernelCounter:
    """Process-local counter of geometry-kernel evaluations, for complexity checks."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def reset(self) -> None:
        self.count = 0


kernel_counter = KernelCounter()


@dataclass
class PairStats:
    """Activity counters for one unordered nocrossing vertex pair."""

    deletions: int = 0
    failures: int = 0
    no_prune_activations: int = 0


# ---------------------------------------------------------------------------
# alldifferent (forward checking)
# ---------------------------------------------------------------------------


class AllDifferentPropagator(Propagator):
    """When a domain becomes {v}, remove v from every other domain."""

    __slots__ = ("store", "_done")

    def __init__(self, store: VarStore) -> None:
        super().__init__()
        self.store = store
        self._done = [False] * store.n

    def propagate(self) -> bool:
        store = self.store
        domains = store.domains
        done = self._done
        for i in range(store.n):
            if done[i]:
                continue
            dom = domains[i]
            if len(dom) != 1:
                continue
            v = next(iter(dom))
            store.set_flag(done, i)
            for u in range(store.n):
                if u != i and store.remove(u, v) is _FAILED:
                    return False
        return True


# ---------------------------------------------------------------------------
# circuit (path merging over fixed successor edges)
# ---------------------------------------------------------------------------


@dataclass
class Chain:
    """A maximal path of fixed successor edges, in traversal order."""

    vertices: list[int]

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]


@dataclass
class PathInfo:
    """Chains and cycles formed by the currently fixed successor edges."""

    chains: list[Chain] = field(default_factory=list)
    cycles: list[list[int]] = field(default_factory=list)

    @classmethod
    def compute(cls, store: VarStore) -> "PathInfo":
        n = store.n
        domains = store.domains
        succ = [-1] * n
        has_pred = [False] * n
        for i in range(n):
            dom = domains[i]
            if len(dom) == 1:
                v = next(iter(dom))
                succ[i] = v
                has_pred[v] = True

        info = cls()
        visited = [False] * n
        for s in range(n):
            if has_pred[s] or visited[s]:
                continue
            seq = [s]
            visited[s] = True
            v = s
            while succ[v] >= 0 and not visited[succ[v]]:
                v = succ[v]
                visited[v] = True
                seq.append(v)
            info.chains.append(Chain(seq))
        # Remaining bound vertices sit on cycles.
        for s in range(n):
            if visited[s] or succ[s] < 0:
                continue
            seq = []
            v = s
            while not visited[v]:
                visited[v] = True
                seq.append(v)
                v = succ[v]
            if v == seq[0]:
                info.cycles.append(seq)
        return info


class CircuitPropagator(Propagator):
    """Forbid subtours: a path s..e of k < n vertices may not close (e -> s);
    a path covering all n vertices forces its closing edge."""

    __slots__ = ("store",)

    def __init__(self, store: VarStore) -> None:
        super().__init__()
        self.store = store

    def propagate(self) -> bool:
        store = self.store
        n = store.n
        info = PathInfo.compute(store)
        for cycle in info.cycles:
            if len(cycle) < n:
                return False
        for chain in info.chains:
            k = len(chain.vertices)
            if k < 2:
                continue
            s = chain.start
            e = chain.end
            if k < n:
                if store.remove(e, s) is _FAILED:
                    return False
            else:
                if s not in store.domains[e]:
                    return False
                store.assign(e, s)
        return True


# ---------------------------------------------------------------------------
# nocrossing
# ---------------------------------------------------------------------------


def naive_crossing_filter(store: VarStore, points: list[Point], i: int, j: int) -> set[int]:
    """Values removable from D(Next_j): segment j->t crosses every possible segment from i.

    Literal quantifier evaluation, O(|D_i| * |D_j|) crossing tests. Reference
    semantics for the fast propagator and its differential-test oracle.
    """
    pi = points[i]
    pj = points[j]
    d_i = store.domains[i]
    out = set()
    for t in store.domains[j]:
        pt = points[t]
        crosses_all = True
        for q in d_i:
            kernel_counter.count += 1
            if not segments_cross(pj, pt, pi, points[q]):
                crosses_all = False
        if crosses_all:
            out.add(t)
    return out


class NocrossPropagator(Propagator):
    """One direction of nocrossing(i, Next_i, j, Next_j): prunes D(Next_j).

    Woken by removals in D(Next_i). While D(Next_i) holds candidates on both
    sides of the line through P_i and P_j no pruning is possible; the
    propagator then parks on one watched value per side and is O(1) until one
    of the two disappears.
    """

    __slots__ = ("store", "points", "i", "j", "pair", "naive", "watch_a", "watch_b", "last_ops")

    def __init__(
        self,
        store: VarStore,
        points: list[Point],
        i: int,
        j: int,
        pair: PairStats,
        naive: bool = False,
    ) -> None:
        super().__init__()
        self.store = store
        self.points = points
        self.i = i
        self.j = j
        self.pair = pair
        self.naive = naive
        self.watch_a: int | None = None
        self.watch_b: int | None = None
        self.last_ops = 0

    def _apply(self, removals: list[int]) -> bool:
        store = self.store
        pair = self.pair
        if not removals:
            pair.no_prune_activations += 1
            return True
        j = self.j
        for t in removals:
            res = store.remove(j, t)
            if res is _REMOVED:
                pair.deletions += 1
            elif res is _FAILED:
                pair.failures += 1
                return False
        return True

    def propagate(self) -> bool:
        if self.naive:
            removals = sorted(naive_crossing_filter(self.store, self.points, self.i, self.j))
            return self._apply(removals)

        store = self.store
        d_i = store.domains[self.i]
        wa = self.watch_a
        if wa is not None and wa in d_i and self.watch_b in d_i:
            self.pair.no_prune_activations += 1
            return True
        self.watch_a = None
        self.watch_b = None

        points = self.points
        pi = points[self.i]
        pj = points[self.j]
        ops = 0

        n_left = n_right = n_col = 0
        left_rep = right_rep = col_rep = -1
        for q in d_i:
            ops += 1
            o = orient(pi, pj, points[q])
            if o is _CCW:
                n_left += 1
                left_rep = q
            elif o is _CW:
                n_right += 1
                right_rep = q
            else:
                n_col += 1
                col_rep = q

        removals: list[int] = []
        if n_left and n_right:
            # Both half-planes occupied: no segment from j can cross them all.
            self.watch_a = left_rep
            self.watch_b = right_rep
        elif n_col and (n_left or n_right):
            # A possible segment lying on the line blocks every off-line
            # candidate, and the off-line segments block the on-line ones.
            self.watch_a = col_rep
            self.watch_b = left_rep if n_left else right_rep
        elif n_col == len(d_i):
            # Fully degenerate: every possible segment from i lies on the
            # line, so only collinear overlaps can prune. Exact checks.
            for t in list(store.domains[self.j]):
                pt = points[t]
                ops += 1
                if orient(pi, pj, pt) is not _COL:
                    continue
                crosses_all = True
                for q in d_i:
                    ops += 1
                    if not segments_cross(pj, pt, pi, points[q]):
                        crosses_all = False
                        break
                if crosses_all:
                    removals.append(t)
        else:
            side = _CCW if n_left else _CW
            # Extreme possible segments: only they can be the tightest
            # obstacles, and crossing both is equivalent to crossing all.
            alpha_ext = beta_ext = -1.0
            q_alpha = q_beta = -1
            first = True
            for q in d_i:
                pq = points[q]
                ops += 2
                a = ccw_angle(pi, pj, pq)
                b = ccw_angle(pq, pi, pj)
                if first:
                    alpha_ext, q_alpha = a, q
                    beta_ext, q_beta = b, q
                    first = False
                elif side is _CCW:
                    if a > alpha_ext:
                        alpha_ext, q_alpha = a, q
                    if b < beta_ext:
                        beta_ext, q_beta = b, q
                else:
                    if a < alpha_ext:
                        alpha_ext, q_alpha = a, q
                    if b > beta_ext:
                        beta_ext, q_beta = b, q
            p_alpha = points[q_alpha]
            p_beta = points[q_beta]
            for t in list(store.domains[self.j]):
                pt = points[t]
                ops += 1
                if orient(pi, pj, pt) is not side:
                    continue
                ops += 2
                a_t = ccw_angle(pi, pj, pt)
                b_t = ccw_angle(pt, pi, pj)
                if side is _CCW:
                    if not (a_t > alpha_ext and b_t < beta_ext):
                        continue
                else:
                    if not (a_t < alpha_ext and b_t > beta_ext):
                        continue
                ops += 2
                if segments_cross(pj, pt, pi, p_alpha) and segments_cross(pj, pt, pi, p_beta):
                    removals.append(t)

        self.last_ops = ops
        kernel_counter.count += ops
        return self._apply(removals)


# ---------------------------------------------------------------------------
# clockwise (convex-hull order)
# ---------------------------------------------------------------------------


class HullOrder:
    """Clockwise convex-hull order of the instance points; static per solve."""

    __slots__ = ("hull", "on_hull", "next_on_hull")

    def __init__(self, points: list[Point]) -> None:
        self.hull: list[int] = convex_hull(list(points))
        n = len(points)
        self.on_hull = [False] * n
        self.next_on_hull = [-1] * n
        k = len(self.hull)
        for pos, h in enumerate(self.hull):
            self.on_hull[h] = True
            self.next_on_hull[h] = self.hull[(pos + 1) % k]


def clockwise_hull_pair_pruning(store: VarStore, hull: HullOrder) -> bool:
    """Each hull vertex may have no hull successor except the next one in
    clockwise order; applied once at the root."""
    for h in hull.hull:
        nxt = hull.next_on_hull[h]
        for other in hull.hull:
            if other == h or other == nxt:
                continue
            if store.remove(h, other) is _FAILED:
                return False
    return True


def clockwise_ground_pruning(
    store: VarStore, points: list[Point], h: int, p: int
) -> bool:
    """With Next_h fixed to p, no vertex strictly left of segment h->p may
    have h as its successor (clockwise traversal)."""
    ph = points[h]
    pp = points[p]
    for q in range(store.n):
        if q == h:
            continue
        if is_left_of(points[q], ph, pp):
            if store.remove(q, h) is _FAILED:
                return False
    return True


def clockwise_path_pruning(store: VarStore, hull: HullOrder, info: PathInfo) -> bool:
    """A path whose most recent hull vertex is h may extend to no hull vertex
    except the one following h; on trivial paths this is the root rule."""
    for chain in info.chains:
        m = -1
        for v in reversed(chain.vertices):
            if hull.on_hull[v]:
                m = v
                break
        if m < 0:
            continue
        e = chain.end
        allowed = hull.next_on_hull[m]
        for other in hull.hull:
            if other == allowed or other == e:
                continue
            if store.remove(e, other) is _FAILED:
                return False
    return True


class ClockwisePropagator(Propagator):
    """Event-driven convex-hull order enforcement (ground + path rules)."""

    __slots__ = ("store", "points", "hull")

    def __init__(self, store: VarStore, points: list[Point], hull: HullOrder) -> None:
        super().__init__()
        self.store = store
        self.points = points
        self.hull = hull

    def propagate(self) -> bool:
        store = self.store
        domains = store.domains
        for h in self.hull.hull:
            dom = domains[h]
            if len(dom) == 1:
                p = next(iter(dom))
                if not clockwise_ground_pruning(store, self.points, h, p):
                    return False
        info = PathInfo.compute(store)
        return clockwise_path_pruning(store, self.hull, info)

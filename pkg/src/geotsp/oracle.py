"""Independent exact solvers and tour property checks.

These are the references the solver is tested against; they share the
instance distance function but nothing else with the search engine.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .engine import Tour
from .geometry import convex_hull, segments_cross
from .instances import Instance

__all__ = [
    "TooLargeError",
    "OracleResult",
    "held_karp_dp",
    "enumerate_optimal",
    "count_crossings",
    "verify_hull_order",
]

HELD_KARP_MAX_N = 20
ENUMERATE_MAX_N = 10


class TooLargeError(ValueError):
    """Instance exceeds the oracle's size bound."""


@dataclass(frozen=True)
class OracleResult:
    optimal_length: float
    tour: Tour


def held_karp_dp(inst: Instance) -> OracleResult:
    """Exact optimum by dynamic programming over vertex subsets, anchored at 0.

    Memory and time are O(n * 2^n); instances beyond n=20 are rejected.
    """
    n = inst.n
    if n > HELD_KARP_MAX_N:
        raise TooLargeError(f"held_karp_dp handles up to n={HELD_KARP_MAX_N}, got {n}")
    d = np.array(inst.distance_matrix())
    m = n - 1
    size = 1 << m
    dp = np.full((size, m), np.inf)
    parent = np.full((size, m), -1, dtype=np.int8)
    for j in range(m):
        dp[1 << j, j] = d[0, j + 1]
    d_inner = d[1:, 1:]
    for mask in range(3, size):
        if mask & (mask - 1) == 0:
            continue
        rem = mask
        while rem:
            bit = rem & -rem
            rem ^= bit
            j = bit.bit_length() - 1
            prev = mask ^ bit
            cand = dp[prev] + d_inner[:, j]
            k = int(np.argmin(cand))
            dp[mask, j] = cand[k]
            parent[mask, j] = k

    full = size - 1
    closing = dp[full] + d[1:, 0]
    j = int(np.argmin(closing))
    length = float(closing[j])

    seq = []
    mask = full
    while j >= 0:
        seq.append(j + 1)
        k = int(parent[mask, j])
        mask ^= 1 << j
        j = k
    order = [0] + seq[::-1]
    succ = [0] * n
    for pos, v in enumerate(order):
        succ[v] = order[(pos + 1) % n]
    tour = Tour.from_successors(inst, succ)
    return OracleResult(optimal_length=tour.length, tour=tour)


def enumerate_optimal(inst: Instance) -> OracleResult:
    """Exact optimum by enumerating all (n-1)!/2 undirected tours."""
    n = inst.n
    if n > ENUMERATE_MAX_N:
        raise TooLargeError(f"enumerate_optimal handles up to n={ENUMERATE_MAX_N}, got {n}")
    dist = inst.distance_matrix()
    best_len = float("inf")
    best_perm: tuple[int, ...] | None = None
    for perm in permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue
        length = dist[0][perm[0]] + dist[perm[-1]][0]
        prev = perm[0]
        for v in perm[1:]:
            length += dist[prev][v]
            prev = v
        if length < best_len:
            best_len = length
            best_perm = perm
    assert best_perm is not None
    order = [0, *best_perm]
    succ = [0] * n
    for pos, v in enumerate(order):
        succ[v] = order[(pos + 1) % n]
    tour = Tour.from_successors(inst, succ)
    return OracleResult(optimal_length=tour.length, tour=tour)


def count_crossings(inst: Instance, tour: Tour) -> int:
    """Number of unordered tour-edge pairs whose segments cross."""
    pts = inst.points
    edges = [(i, tour.successors[i]) for i in range(inst.n)]
    count = 0
    for a in range(len(edges)):
        i1, j1 = edges[a]
        for b in range(a + 1, len(edges)):
            i2, j2 = edges[b]
            if segments_cross(pts[i1], pts[j1], pts[i2], pts[j2]):
                count += 1
    return count


def verify_hull_order(inst: Instance, tour: Tour) -> bool:
    """True iff the tour visits the hull boundary vertices in hull order
    (either direction)."""
    hull = convex_hull(list(inst.points))
    on_hull = set(hull)
    seq = [v for v in tour.order() if v in on_hull]
    k = len(hull)
    if len(seq) != k:
        return False
    doubled = hull + hull
    for start in range(k):
        if doubled[start : start + k] == seq:
            return True
    rev = seq[::-1]
    for start in range(k):
        if doubled[start : start + k] == rev:
            return True
    return False

"""Trail-based finite-domain store for successor variables.

One VarStore is owned by exactly one solver and is not thread-safe; distinct
stores may be used from distinct threads or processes.
"""

from collections import deque
from enum import Enum

__all__ = ["RemoveResult", "Propagator", "VarStore", "propagate_fixpoint"]


class RemoveResult(Enum):
    REMOVED = "removed"
    ABSENT = "absent"
    FAILURE = "failure"


class Propagator:
    """Base class: subclasses implement propagate() returning False on failure."""

    __slots__ = ("queued",)

    def __init__(self) -> None:
        self.queued = False

    def propagate(self) -> bool:
        raise NotImplementedError


_DOM = 0
_FLAG = 1


class VarStore:
    """Per-vertex candidate-successor domains with a removal trail.

    Domains are sets; every removal is trailed so that backtracking to a
    decision level restores domain contents exactly. Propagators subscribe
    per variable and are queued on each removal from that variable's domain.
    """

    __slots__ = ("n", "domains", "_trail", "_marks", "_subs", "queue")

    def __init__(self, n: int) -> None:
        if n < 2:
            raise ValueError("need at least 2 variables")
        self.n = n
        self.domains: list[set[int]] = [set(range(n)) - {i} for i in range(n)]
        self._trail: list[tuple] = []
        self._marks: list[int] = []
        self._subs: list[list[Propagator]] = [[] for _ in range(n)]
        self.queue: deque[Propagator] = deque()

    # -- subscriptions and waking ------------------------------------------

    def subscribe(self, i: int, prop: Propagator) -> None:
        self._subs[i].append(prop)

    def wake(self, prop: Propagator) -> None:
        if not prop.queued:
            prop.queued = True
            self.queue.append(prop)

    def _wake_var(self, i: int) -> None:
        for prop in self._subs[i]:
            if not prop.queued:
                prop.queued = True
                self.queue.append(prop)

    # -- domain mutation ----------------------------------------------------

    def remove(self, i: int, v: int) -> RemoveResult:
        dom = self.domains[i]
        if v not in dom:
            return RemoveResult.ABSENT
        if len(dom) == 1:
            return RemoveResult.FAILURE
        dom.remove(v)
        self._trail.append((_DOM, i, v))
        self._wake_var(i)
        return RemoveResult.REMOVED

    def assign(self, i: int, v: int) -> None:
        dom = self.domains[i]
        if v not in dom:
            raise ValueError(f"assign({i}, {v}): value not in domain {sorted(dom)}")
        if len(dom) == 1:
            return
        trail = self._trail
        for w in list(dom):
            if w != v:
                dom.remove(w)
                trail.append((_DOM, i, w))
        self._wake_var(i)

    def set_flag(self, flags: list[bool], idx: int) -> None:
        """Set a trailed boolean, restored to False on backtrack."""
        if not flags[idx]:
            flags[idx] = True
            self._trail.append((_FLAG, flags, idx))

    # -- queries --------------------------------------------------------------

    def is_bound(self, i: int) -> bool:
        return len(self.domains[i]) == 1

    def value(self, i: int) -> int:
        dom = self.domains[i]
        if len(dom) != 1:
            raise ValueError(f"variable {i} is not bound")
        return next(iter(dom))

    def all_bound(self) -> bool:
        return all(len(dom) == 1 for dom in self.domains)

    def snapshot(self) -> list[frozenset[int]]:
        return [frozenset(dom) for dom in self.domains]

    # -- decision levels ------------------------------------------------------

    @property
    def level(self) -> int:
        return len(self._marks)

    def push_level(self) -> None:
        self._marks.append(len(self._trail))

    def backtrack(self) -> None:
        """Undo everything since the most recent push_level."""
        mark = self._marks.pop()
        trail = self._trail
        domains = self.domains
        while len(trail) > mark:
            entry = trail.pop()
            if entry[0] == _DOM:
                domains[entry[1]].add(entry[2])
            else:
                entry[1][entry[2]] = False
        self.clear_queue()

    def clear_queue(self) -> None:
        while self.queue:
            self.queue.popleft().queued = False


def propagate_fixpoint(store: VarStore, initial: tuple[Propagator, ...] = ()) -> bool:
    """Run queued propagators (plus `initial`) to fixpoint.

    Returns False as soon as one propagator fails, clearing the queue;
    returns True at quiescence. For monotone propagators the resulting
    domains do not depend on queue order.
    """
    for prop in initial:
        store.wake(prop)
    queue = store.queue
    while queue:
        prop = queue.popleft()
        prop.queued = False
        if not prop.propagate():
            store.clear_queue()
            return False
    return True

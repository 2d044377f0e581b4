import random

from hypothesis import HealthCheck, settings

from geotsp.geometry import Point
from geotsp.instances import Instance
from geotsp.store import VarStore

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def square_instance() -> Instance:
    return Instance("square", (Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)))


def square_center_instance() -> Instance:
    return Instance(
        "square_center",
        (Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1), Point(0.5, 0.5)),
    )


def set_domain(store: VarStore, i: int, values: set[int]) -> None:
    """Shrink D(Next_i) to `values` without running any propagator."""
    for v in list(store.domains[i]):
        if v not in values:
            assert store.remove(i, v).value != "failure"
    assert store.domains[i] == set(values)
    store.clear_queue()


def random_substore(n: int, rng: random.Random) -> VarStore:
    """A store over n vertices with random nonempty sub-domains."""
    store = VarStore(n)
    for i in range(n):
        full = sorted(store.domains[i])
        keep = rng.randint(1, len(full))
        set_domain(store, i, set(rng.sample(full, keep)))
    return store

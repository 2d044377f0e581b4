import math
import random

import pytest

from geotsp.engine import Tour
from geotsp.geometry import Point
from geotsp.instances import DistanceMode, Instance, gen_clustered, gen_uniform
from geotsp.oracle import (
    TooLargeError,
    count_crossings,
    enumerate_optimal,
    held_karp_dp,
    verify_hull_order,
)

from conftest import square_center_instance, square_instance


def test_held_karp_unit_square():
    assert held_karp_dp(square_instance()).optimal_length == pytest.approx(4.0)


def test_held_karp_square_plus_center():
    inst = square_center_instance()
    expected = 3.0 + math.sqrt(2.0)
    hk = held_karp_dp(inst)
    brute = enumerate_optimal(inst)
    assert hk.optimal_length == pytest.approx(expected, abs=1e-9)
    assert brute.optimal_length == pytest.approx(expected, abs=1e-9)


def test_held_karp_too_large():
    with pytest.raises(TooLargeError):
        held_karp_dp(gen_uniform(21, 1))


def test_enumerate_too_large():
    with pytest.raises(TooLargeError):
        enumerate_optimal(gen_uniform(11, 1))


def test_enumerate_triangle_is_perimeter():
    inst = Instance("tri", (Point(0, 0), Point(3, 0), Point(0, 4)))
    res = enumerate_optimal(inst)
    assert res.optimal_length == pytest.approx(3 + 4 + 5)


def test_oracles_agree_on_random_instances():
    rng = random.Random(11)
    for _ in range(15):
        n = rng.randint(5, 9)
        seed = rng.randint(0, 10_000)
        inst = gen_uniform(n, seed) if rng.random() < 0.5 else gen_clustered(n, 3, seed)
        hk = held_karp_dp(inst)
        brute = enumerate_optimal(inst)
        assert abs(hk.optimal_length - brute.optimal_length) <= 1e-9


def test_oracle_tour_length_recomputes():
    inst = gen_uniform(9, 3)
    res = held_karp_dp(inst)
    recomputed = Tour.from_successors(inst, res.tour.successors)
    assert abs(recomputed.length - res.optimal_length) <= 1e-9


def test_oracles_agree_in_tsplib_round_mode():
    inst = gen_uniform(8, 17, distance_mode=DistanceMode.TSPLIB_ROUND)
    hk = held_karp_dp(inst)
    brute = enumerate_optimal(inst)
    assert hk.optimal_length == brute.optimal_length
    assert hk.optimal_length == int(hk.optimal_length)


def _tour_from_order(inst: Instance, order: list[int]) -> Tour:
    succ = [0] * inst.n
    for k, v in enumerate(order):
        succ[v] = order[(k + 1) % inst.n]
    return Tour.from_successors(inst, succ)


def test_count_crossings_square_perimeter_and_bowtie():
    inst = square_instance()
    perimeter = _tour_from_order(inst, [0, 1, 2, 3])
    assert count_crossings(inst, perimeter) == 0
    bowtie = _tour_from_order(inst, [0, 2, 1, 3])
    assert count_crossings(inst, bowtie) == 1


def test_verify_hull_order_square():
    inst = square_instance()
    assert verify_hull_order(inst, _tour_from_order(inst, [0, 1, 2, 3]))
    assert verify_hull_order(inst, _tour_from_order(inst, [0, 3, 2, 1]))
    assert not verify_hull_order(inst, _tour_from_order(inst, [0, 2, 1, 3]))


def test_optimal_tours_have_no_crossings_and_respect_hull_order():
    rng = random.Random(23)
    for _ in range(20):
        inst = gen_uniform(rng.randint(5, 9), rng.randint(0, 10_000))
        res = held_karp_dp(inst)
        assert count_crossings(inst, res.tour) == 0
        assert verify_hull_order(inst, res.tour)

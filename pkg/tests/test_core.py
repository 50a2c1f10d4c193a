import itertools
import math

import numpy as np
import pytest

from tspvqa import core
from tspvqa.errors import InvalidArgumentError, ResourceLimitError

SQRT2 = math.sqrt(2.0)


def test_generate_deterministic():
    a = core.generate_instance(4, seed=42)
    b = core.generate_instance(4, seed=42)
    np.testing.assert_array_equal(a.coords, b.coords)
    np.testing.assert_array_equal(a.w, b.w)


def test_generate_geometry_bounds():
    inst = core.generate_instance(4, seed=7)
    assert np.all(inst.w >= 0)
    assert np.all(inst.w <= 100 * SQRT2)
    assert np.all(np.diag(inst.w) == 0)
    assert np.all(inst.coords >= 0) and np.all(inst.coords <= 100)


def test_distances_match_independent_recompute():
    inst = core.generate_instance(6, seed=3)
    for i in range(6):
        for j in range(6):
            expected = math.dist(inst.coords[i], inst.coords[j])
            assert inst.w[i, j] == pytest.approx(expected, abs=1e-12)
            assert inst.w[i, j] == inst.w[j, i]


def test_generate_rejects_small_n():
    with pytest.raises(InvalidArgumentError):
        core.generate_instance(2, seed=0)


def test_duplicate_coordinates_rejected():
    with pytest.raises(InvalidArgumentError):
        core.make_instance([(0, 0), (0, 0), (1, 1)])


def test_tour_length_square(square):
    assert core.tour_length(square, (1, 2, 3, 4)) == pytest.approx(40.0)
    assert core.tour_length(square, (1, 3, 2, 4)) == pytest.approx(20 + 2 * 10 * SQRT2)


def test_tour_length_reversal_invariant(inst5):
    for rest in itertools.permutations(range(2, 6)):
        route = (1,) + rest
        rev = (1,) + rest[::-1]
        assert core.tour_length(inst5, route) == pytest.approx(core.tour_length(inst5, rev))


def test_tour_length_rejects_non_permutation(square):
    with pytest.raises(InvalidArgumentError):
        core.tour_length(square, (1, 2, 2, 4))
    with pytest.raises(InvalidArgumentError):
        core.tour_length(square, (2, 1, 3, 4))


def test_brute_force_square(square):
    stats = core.brute_force_stats(square)
    assert stats.l_min == pytest.approx(40.0)
    assert stats.l_max == pytest.approx(20 + 2 * 10 * SQRT2)
    assert stats.optimal_routes == {(1, 2, 3, 4), (1, 4, 3, 2)}
    assert stats.route_count == 6


def test_brute_force_route_count_n6():
    inst = core.generate_instance(6, seed=1)
    assert core.brute_force_stats(inst).route_count == 120


def test_brute_force_bounds_all_routes(inst5):
    stats = core.brute_force_stats(inst5)
    for route in core.iter_routes(5):
        length = core.tour_length(inst5, route)
        assert stats.l_min - 1e-12 <= length <= stats.l_max + 1e-12


def test_brute_force_second_enumeration_agrees(inst5):
    # oracle self-check: enumerate in a different (reversed) order
    stats = core.brute_force_stats(inst5)
    lengths = {route: core.tour_length(inst5, route)
               for route in list(core.iter_routes(5))[::-1]}
    assert min(lengths.values()) == pytest.approx(stats.l_min)
    assert max(lengths.values()) == pytest.approx(stats.l_max)
    best = {r for r, v in lengths.items() if v <= stats.l_min + 1e-12}
    assert best == stats.optimal_routes


def test_brute_force_size_guard():
    inst = core.generate_instance(11, seed=0)
    with pytest.raises(ResourceLimitError):
        core.brute_force_stats(inst)


def test_instance_roundtrip(tmp_path, inst5):
    path = tmp_path / "inst.json"
    core.save_instance(inst5, path)
    loaded = core.load_instance(path)
    np.testing.assert_allclose(loaded.coords, inst5.coords)
    np.testing.assert_allclose(loaded.w, inst5.w)  # w recomputed, not stored
    assert loaded.seed == 11

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tspvqa import core, metrics
from tspvqa import encodings as enc
from tspvqa.errors import DegenerateInstanceError, InvalidArgumentError

from oracles import length_ratio_direct


def _square_tables(square):
    scheme = enc.EncodingScheme("permutation", 4)
    feasible, lengths = enc.decode_table(scheme, square)
    return feasible, lengths, core.brute_force_stats(square)


def test_feasibility_ratio_permutation_always_one(square, rng):
    feasible, _, _ = _square_tables(square)
    probs = rng.dirichlet(np.ones(8))
    assert metrics.feasibility_ratio(probs, feasible) == pytest.approx(1.0)


def test_feasibility_ratio_point_mass_infeasible(square):
    scheme = enc.EncodingScheme("qubo", 4, 100.0)
    feasible, _ = enc.decode_table(scheme, square)
    probs = np.zeros(512)
    probs[0] = 1.0  # all-zeros decodes as StepEmpty
    assert metrics.feasibility_ratio(probs, feasible) == 0.0


def test_feasibility_ratio_uniform_qubo(square):
    scheme = enc.EncodingScheme("qubo", 4, 100.0)
    feasible, _ = enc.decode_table(scheme, square)
    uniform = np.full(512, 1 / 512)
    assert metrics.feasibility_ratio(uniform, feasible) == pytest.approx(6 / 512)


def test_feasibility_ratio_from_samples(square):
    scheme = enc.EncodingScheme("qubo", 4, 100.0)
    feasible, _ = enc.decode_table(scheme, square)
    feasible_state = int(np.flatnonzero(feasible)[0])
    samples = np.array([0, feasible_state, feasible_state, 0], dtype=np.int64)
    assert metrics.feasibility_ratio(samples, feasible) == pytest.approx(0.5)


def test_length_ratio_optimal_point_mass(square):
    feasible, lengths, stats = _square_tables(square)
    best = int(np.argmin(lengths))
    probs = np.zeros(8)
    probs[best] = 1.0
    assert metrics.length_ratio(probs, feasible, lengths, stats) == pytest.approx(1.0)


def test_length_ratio_worst_point_mass(square):
    feasible, lengths, stats = _square_tables(square)
    worst = int(np.argmax(lengths))
    probs = np.zeros(8)
    probs[worst] = 1.0
    assert metrics.length_ratio(probs, feasible, lengths, stats) == pytest.approx(0.0, abs=1e-12)


def test_length_ratio_zero_feasibility_is_zero(square):
    scheme = enc.EncodingScheme("qubo", 4, 100.0)
    feasible, lengths = enc.decode_table(scheme, square)
    probs = np.zeros(512)
    probs[0] = 1.0
    report = metrics.compute_metrics(probs, feasible, lengths, core.brute_force_stats(square))
    assert report.r_f == 0.0 and report.r_ell == 0.0


def test_length_ratio_uniform_routes_vs_hand_computation(square):
    # uniform over the 6 routes of the square: 4 tours of 40, 2 of 20+20*sqrt(2)
    feasible = np.ones(6, dtype=bool)
    lengths = np.array([core.tour_length(square, r) for r in core.iter_routes(4)])
    stats = core.brute_force_stats(square)
    probs = np.full(6, 1 / 6)
    expected = length_ratio_direct(probs, feasible, lengths, stats.l_min, stats.l_max)
    assert metrics.length_ratio(probs, feasible, lengths, stats) == pytest.approx(expected, abs=1e-12)


def test_length_ratio_dual_implementation_random_distributions(inst5, rng):
    scheme = enc.EncodingScheme("permutation", 5)
    feasible, lengths = enc.decode_table(scheme, inst5)
    stats = core.brute_force_stats(inst5)
    for _ in range(200):
        probs = rng.dirichlet(np.ones(feasible.size))
        mine = metrics.length_ratio(probs, feasible, lengths, stats)
        direct = length_ratio_direct(probs, feasible, lengths, stats.l_min, stats.l_max)
        assert mine == pytest.approx(direct, abs=1e-12)


def test_length_ratio_degenerate_instance_rejected(square):
    feasible, lengths, _ = _square_tables(square)
    stats = core.TourStats(l_min=10.0, l_max=10.0, optimal_routes=frozenset(), route_count=6)
    with pytest.raises(DegenerateInstanceError):
        metrics.length_ratio(np.full(8, 1 / 8), feasible, lengths, stats)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_metric_bounds_random_distributions(seed):
    square = core.make_instance([(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)])
    scheme = enc.EncodingScheme("qubo", 4, 100.0)
    feasible, lengths = enc.decode_table(scheme, square)
    stats = core.brute_force_stats(square)
    probs = np.random.default_rng(seed).dirichlet(np.ones(512))
    report = metrics.compute_metrics(probs, feasible, lengths, stats)
    assert 0.0 <= report.r_f <= 1.0
    assert -1e-12 <= report.r_ell <= 1.0 + 1e-12


def test_rescale_energy_endpoints():
    scaled = metrics.rescale_energy([2.0, 6.0, 4.0], 2.0, 6.0)
    np.testing.assert_allclose(scaled, [0.0, 1.0, 0.5])
    with pytest.raises(InvalidArgumentError):
        metrics.rescale_energy([1.0], 3.0, 3.0)


def test_moving_minimum():
    np.testing.assert_allclose(metrics.moving_minimum([3, 1, 2]), [3, 1, 1])
    np.testing.assert_allclose(metrics.moving_minimum([5, 4, 3]), [5, 4, 3])
    np.testing.assert_allclose(metrics.moving_minimum([2, 2, 2]), [2, 2, 2])
    with pytest.raises(InvalidArgumentError):
        metrics.moving_minimum([])


def test_moving_minimum_idempotent(rng):
    trace = rng.normal(size=50)
    once = metrics.moving_minimum(trace)
    np.testing.assert_array_equal(metrics.moving_minimum(once), once)


def test_landscape_scan_shape_and_consistency():
    def f(params):
        return float(np.cos(params[0]) + np.sin(params[1]) + params[2])

    base = np.array([0.5, 1.5, 2.0])
    grid, matrix = metrics.landscape_scan(f, base, (0, 1), resolution=8)
    assert matrix.shape == (8, 8)
    assert grid[0] == 0.0 and grid[-1] < 2 * np.pi
    # scanning the base point's own values reproduces the base energy
    for a, theta1 in enumerate(grid):
        for b, theta2 in enumerate(grid):
            point = base.copy()
            point[0], point[1] = theta1, theta2
            assert matrix[a, b] == pytest.approx(f(point))


def test_landscape_scan_wraparound_continuity():
    def f(params):  # 2*pi periodic in both axes
        return float(np.cos(params[0]) * np.sin(2 * params[1]))

    grid, matrix = metrics.landscape_scan(f, np.zeros(2), (0, 1), resolution=16)
    limit_row = np.array([f(np.array([2 * np.pi - 1e-9, t])) for t in grid])
    np.testing.assert_allclose(matrix[0, :], limit_row, atol=1e-8)


def test_landscape_scan_validation():
    f = lambda p: 0.0
    with pytest.raises(InvalidArgumentError):
        metrics.landscape_scan(f, np.zeros(3), (1, 1))
    with pytest.raises(InvalidArgumentError):
        metrics.landscape_scan(f, np.zeros(3), (0, 5))
    with pytest.raises(InvalidArgumentError):
        metrics.landscape_scan(f, np.zeros(3), (0, 1), resolution=1)


def test_landscape_csv_format(tmp_path):
    grid, matrix = metrics.landscape_scan(lambda p: float(p[0] + p[1]), np.zeros(2), (0, 1),
                                          resolution=4)
    path = tmp_path / "scan.csv"
    metrics.write_landscape_csv(path, grid, matrix)
    lines = path.read_text().splitlines()
    assert lines[0] == "theta_k1,theta_k2,energy"
    assert len(lines) == 1 + 16

import itertools
import math

import numpy as np
import pytest

from core.baselines import Criterion, LeastSquaresCostModel
from core.dp import BRUTE_FORCE_LIMIT, PairCosts, Segmentation, brute_force, reconstruct, solve, validate_boundaries
from core.empirical import build_sample
from core.errors import GridError, InputError, InstanceTooLargeError
from core.segcost import CostModel, pair_costs

STEP = [1.0, 2.0, 3.0, 101.0, 102.0, 103.0]


def full_costs(values, correction=True):
    model = CostModel.build(build_sample(values), correction=correction)
    return pair_costs(model, range(1, len(values) + 2))


def enumerate_all(costs, l):
    """Every way of choosing l interior boundaries, scored independently of the DP."""
    bounds = [int(b) for b in costs.boundaries]
    results = []
    for combo in itertools.combinations(bounds[1:-1], l):
        path = (bounds[0], *combo, bounds[-1])
        results.append((sum(costs[(a, b)] for a, b in zip(path, path[1:])), combo))
    return results


class TestSegmentation:
    def test_segments_and_labels(self):
        seg = Segmentation(n=6, change_points=(3, 5))
        assert seg.k == 2
        assert seg.boundaries == (1, 3, 5, 7)
        assert seg.segments() == [(1, 3), (3, 5), (5, 7)]
        assert list(seg.labels()) == [0, 0, 1, 1, 2, 2]

    def test_empty(self):
        seg = Segmentation(n=4)
        assert seg.k == 0
        assert list(seg.labels()) == [0, 0, 0, 0]

    @pytest.mark.parametrize("points", [(1,), (7,), (4, 4), (5, 3)])
    def test_invalid_points(self, points):
        with pytest.raises(InputError):
            Segmentation(n=6, change_points=points)


@pytest.mark.parametrize(
    "grid", [(2, 7), (1, 6), (1, 4, 4, 7), (1, 5, 3, 7), (1,)],
)
def test_validate_boundaries_rejects(grid):
    with pytest.raises(GridError):
        validate_boundaries(grid, 6)


def test_pair_costs_mapping_contract():
    costs = full_costs(STEP)
    assert len(costs) == 21
    assert len(list(costs)) == 21
    with pytest.raises(KeyError):
        costs[(4, 2)]
    with pytest.raises(KeyError):
        costs[(1, 99)]
    sub = costs.restrict((1, 4, 7))
    assert sub[(1, 4)] == costs[(1, 4)]
    assert sub[(4, 7)] == costs[(4, 7)]


def test_no_change_point_is_the_whole_segment():
    costs = full_costs(STEP)
    table = solve(costs, l_max=0)
    assert table.value(0) == costs[(1, 7)]
    assert reconstruct(table, 0).change_points == ()


def test_step_example():
    costs = full_costs(STEP, correction=False)
    table = solve(costs, l_max=1)
    assert reconstruct(table, 1).change_points == (4,)
    value, seg = brute_force(costs, l=1)
    assert seg.change_points == (4,)
    assert value == table.value(1)


def test_all_interior_boundaries_are_forced():
    costs = full_costs(STEP)
    table = solve(costs, l_max=5)
    assert reconstruct(table, 5).change_points == (2, 3, 4, 5, 6)


def test_single_interior_boundary():
    costs = full_costs(STEP).restrict((1, 3, 7))
    value, seg = brute_force(costs, l=1)
    assert seg.change_points == (3,)
    assert value == costs[(1, 3)] + costs[(3, 7)]


def test_brute_force_without_change_points():
    costs = full_costs(STEP)
    value, seg = brute_force(costs, l=0)
    assert value == costs[(1, 7)]
    assert seg.k == 0


@pytest.mark.parametrize("seed", range(12))
def test_solve_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 15))
    values = rng.normal(size=n) + np.repeat(rng.normal(scale=2.0, size=3), [n // 3, n // 3, n - 2 * (n // 3)])
    costs = full_costs(values, correction=bool(seed % 2))
    l_max = min(3, n - 1)
    table = solve(costs, l_max=l_max)
    for l in range(l_max + 1):
        value, seg = brute_force(costs, l=l)
        assert table.value(l) == value
        assert reconstruct(table, l) == seg
        exhaustive = max(enumerate_all(costs, l))[0]
        assert value == pytest.approx(exhaustive, rel=1e-12, abs=1e-12)


def test_solve_on_a_sub_grid():
    rng = np.random.default_rng(31)
    costs = full_costs(rng.normal(size=12))
    grid = (1, 3, 6, 8, 11, 13)
    table = solve(costs, boundaries=grid, l_max=2)
    value, seg = brute_force(costs, boundaries=grid, l=2)
    assert table.value(2) == value
    assert reconstruct(table, 2) == seg
    assert set(seg.change_points) <= set(grid)


def test_optimum_is_nondecreasing_in_l_without_correction():
    rng = np.random.default_rng(9)
    costs = full_costs(rng.normal(size=14), correction=False)
    values = solve(costs, l_max=8).values()
    for l in range(8):
        assert values[l + 1] >= values[l] - 1e-9


def test_optimum_is_nondecreasing_in_l_with_correction():
    rng = np.random.default_rng(19)
    costs = full_costs(rng.standard_t(3, size=14), correction=True)
    values = solve(costs, l_max=8).values()
    for l in range(8):
        assert values[l + 1] >= values[l] - 1e-9


def test_ties_go_to_the_smallest_last_change_point():
    bounds = np.arange(1, 6)
    matrix = np.zeros((5, 5))
    costs = PairCosts(bounds, matrix)
    table = solve(costs, l_max=2)
    assert reconstruct(table, 1).change_points == (2,)
    assert reconstruct(table, 2).change_points == (2, 3)
    assert brute_force(costs, l=1)[1].change_points == (2,)
    assert brute_force(costs, l=2)[1].change_points == (2, 3)


def test_infeasible_layers_cannot_be_reconstructed():
    bounds = np.arange(1, 5)
    matrix = np.full((4, 4), -np.inf)
    matrix[0, 3] = -1.0
    table = solve(PairCosts(bounds, matrix), l_max=1)
    assert table.value(0) == -1.0
    assert math.isinf(table.value(1))
    with pytest.raises(InputError):
        reconstruct(table, 1)
    with pytest.raises(InputError):
        brute_force(PairCosts(bounds, matrix), l=1)


def test_l_max_beyond_the_grid():
    costs = full_costs(STEP)
    with pytest.raises(GridError):
        solve(costs, l_max=6)
    with pytest.raises(InputError):
        solve(costs, l_max=2).value(3)


def test_brute_force_guard():
    bounds = np.arange(1, 44)
    costs = PairCosts(bounds, np.zeros((43, 43)))
    assert math.comb(41, 10) > BRUTE_FORCE_LIMIT
    with pytest.raises(InstanceTooLargeError):
        brute_force(costs, l=10)


def _random_instance(rng):
    n = int(rng.integers(4, 15))
    sizes = rng.multinomial(n - 3, [1 / 3] * 3) + 1
    return rng.normal(size=n) + np.repeat(rng.normal(scale=2.0, size=3), sizes)


@pytest.mark.slow
def test_solve_matches_brute_force_on_many_instances():
    rng = np.random.default_rng(500)
    for instance in range(500):
        values = _random_instance(rng)
        sample = build_sample(values)
        grid = range(1, len(values) + 2)
        if instance % 2:
            costs = LeastSquaresCostModel(sample, Criterion.MEAN).pair_costs(grid)
        else:
            costs = pair_costs(CostModel.build(sample, correction=bool(instance % 4)), grid)
        l_max = min(3, len(values) - 1)
        table = solve(costs, l_max=l_max)
        for l in range(l_max + 1):
            value, seg = brute_force(costs, l=l)
            assert table.value(l) == value
            assert reconstruct(table, l) == seg


@pytest.mark.slow
@pytest.mark.parametrize("correction", [False, True])
def test_optimum_is_nondecreasing_over_many_datasets(correction):
    for seed in range(100):
        rng = np.random.default_rng([3, seed])
        costs = full_costs(rng.normal(size=100), correction=correction)
        values = solve(costs, l_max=20).values()
        for l in range(20):
            assert values[l + 1] >= values[l] - 1e-9

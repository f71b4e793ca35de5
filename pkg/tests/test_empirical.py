import numpy as np
import pytest

from core.empirical import (
    WeightVariant,
    build_sample,
    build_weight_table,
    check_segment,
    segment_rank_multiset,
)
from core.errors import InputError


@pytest.mark.parametrize(
    "values, ranks",
    [
        ((3.0, 1.0, 2.0), (3, 1, 2)),
        ((5.0, 5.0), (1, 2)),
        (tuple(float(v) for v in range(1, 11)), tuple(range(1, 11))),
        ((2.0, 1.0, 2.0, 1.0), (3, 1, 4, 2)),
    ],
)
def test_ranks_are_stable(values, ranks):
    sample = build_sample(values)
    assert tuple(sample.ranks) == ranks
    assert sample.n == len(values)


def test_ranks_form_a_permutation():
    rng = np.random.default_rng(3)
    values = rng.integers(0, 5, size=40).astype(float)
    sample = build_sample(values)
    assert sorted(sample.ranks) == list(range(1, 41))
    np.testing.assert_array_equal(sample.sorted_values, np.sort(values))


@pytest.mark.parametrize("transform", [np.exp, lambda x: 3.0 * x - 7.0, np.arctan])
def test_rank_invariance(transform):
    rng = np.random.default_rng(11)
    values = rng.normal(size=50)
    assert np.array_equal(build_sample(values).ranks, build_sample(transform(values)).ranks)


def test_sample_arrays_are_read_only():
    sample = build_sample([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        sample.values[0] = 9.0
    with pytest.raises(ValueError):
        sample.ranks[0] = 9


@pytest.mark.parametrize("values", [[], [1.0], [1.0, float("nan")], [1.0, float("inf"), 2.0]])
def test_build_sample_rejects_bad_input(values):
    with pytest.raises(InputError):
        build_sample(values)


@pytest.mark.parametrize(
    "n, variant, expected",
    [
        (4, WeightVariant.ZHANG, (0.0, 1.0, 4.0 / 3.0, 0.0)),
        (3, WeightVariant.ZHANG, (0.0, 1.5, 0.0)),
        (4, WeightVariant.UNIFORM, (0.25, 0.25, 0.25, 0.0)),
        (2, WeightVariant.ZHANG, (0.0, 0.0)),
    ],
)
def test_weight_table_examples(n, variant, expected):
    table = build_weight_table(n, variant)
    assert table.point_weights == pytest.approx(expected)
    assert table.prefix[0] == 0.0
    assert table.prefix.shape == (n + 1,)
    assert table.total == pytest.approx(sum(expected))


def test_weight_table_accepts_strings():
    assert build_weight_table(5, "uniform").variant is WeightVariant.UNIFORM


def test_weight_table_needs_two_points():
    with pytest.raises(InputError):
        build_weight_table(1)


@pytest.mark.parametrize(
    "i, j, expected",
    [(1, 3, (1, 3)), (2, 3, (1,)), (1, 4, (1, 2, 3))],
)
def test_segment_rank_multiset(i, j, expected):
    sample = build_sample([3.0, 1.0, 2.0])
    assert tuple(segment_rank_multiset(sample, i, j)) == expected


@pytest.mark.parametrize("i, j", [(0, 2), (2, 2), (3, 2), (1, 5)])
def test_segment_bounds_are_checked(i, j):
    with pytest.raises(InputError):
        check_segment(3, i, j)

import math

import numpy as np
import pytest

from core.dp import Segmentation
from core.errors import InputError
from core.simgen import (
    BLOCKS_H,
    ErrorDist,
    MEANSCALE_V,
    SimModel,
    SimSpec,
    diverging_count,
    draw_errors,
    generate,
    make_rng,
    segment_spacing,
)

BLOCKS_TRUTH = (100, 130, 150, 230, 250, 400, 440, 650, 760, 780, 810)


def test_blocks_truth():
    data = generate(SimSpec(model=SimModel.BLOCKS_I, n=1000))
    assert data.truth.change_points == BLOCKS_TRUTH
    assert data.values.shape == (1000,)
    assert segment_spacing(data.truth) == 20


def test_shape_truth():
    data = generate(SimSpec(model=SimModel.SHAPE_III, n=500))
    assert data.truth.change_points == (100, 250, 375)


def test_meanscale_truth():
    data = generate(SimSpec(model=SimModel.MEANSCALE_II, n=1000))
    assert data.truth.change_points == (200, 400, 650, 850)


def test_blocks_noise_free_jumps():
    data = generate(SimSpec(model=SimModel.BLOCKS_I, n=1000, sigma=1e-12, seed=1))
    bounds = data.truth.boundaries
    means = [data.values[a - 1:b - 1].mean() for a, b in zip(bounds[:-1], bounds[1:])]
    assert np.diff(means) == pytest.approx(BLOCKS_H, abs=1e-9)


def test_meanscale_noise_levels():
    data = generate(SimSpec(model=SimModel.MEANSCALE_II, n=20000, sigma=1.0, seed=2))
    bounds = data.truth.boundaries
    sds = [data.values[a - 1:b - 1].std() for a, b in zip(bounds[:-1], bounds[1:])]
    expected = np.concatenate(([1.0], np.cumprod(MEANSCALE_V)))
    assert sds == pytest.approx(expected, rel=0.1)


def test_same_seed_same_data():
    spec = SimSpec(model=SimModel.DIVERGING_I, n=400, seed=9)
    a, b = generate(spec, 3), generate(spec, 3)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.truth == b.truth


def test_replications_differ_but_fixed_truth_stays():
    spec = SimSpec(model=SimModel.BLOCKS_I, n=200, seed=9)
    a, b = generate(spec, 0), generate(spec, 1)
    assert not np.array_equal(a.values, b.values)
    assert a.truth == b.truth
    c = generate(SimSpec(model=SimModel.BLOCKS_I, n=200, seed=10), 0)
    assert not np.array_equal(a.values, c.values)


def test_replication_streams_are_independent_of_order():
    forward = [make_rng(5, r).standard_normal() for r in range(4)]
    backward = [make_rng(5, r).standard_normal() for r in reversed(range(4))]
    assert forward == backward[::-1]


@pytest.mark.parametrize("model, factor", [(SimModel.DIVERGING_I, 0.4), (SimModel.DIVERGING_II, 0.2)])
@pytest.mark.parametrize("n", [100, 400, 1600])
def test_diverging_models(model, factor, n):
    k = diverging_count(model, n)
    assert k == math.ceil(factor * math.sqrt(n))
    data = generate(SimSpec(model=model, n=n, seed=n), replication=1)
    assert data.truth.k == k
    assert segment_spacing(data.truth) >= 2


def test_diverging_counts():
    assert diverging_count(SimModel.DIVERGING_I, 1000) == 13
    assert diverging_count(SimModel.DIVERGING_II, 6300) == 16


@pytest.mark.parametrize("error", list(ErrorDist))
def test_errors_are_standardised(error):
    draws = draw_errors(make_rng(0), error, 200000)
    assert abs(draws.mean()) < 0.02
    if error is not ErrorDist.T3:
        assert draws.std() == pytest.approx(1.0, abs=0.03)


@pytest.mark.parametrize(
    "kwargs",
    [{"n": 10}, {"sigma": 0.0}, {"seed": -1}, {"model": "blocks9"}, {"error": "cauchy"}],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        SimSpec(**kwargs)


def test_values_are_read_only():
    data = generate(SimSpec(n=50))
    with pytest.raises(ValueError):
        data.values[0] = 1.0


@pytest.mark.parametrize("points, n, expected", [((), 30, 30), ((2, 30), 30, 1), ((10, 20), 30, 9)])
def test_segment_spacing(points, n, expected):
    assert segment_spacing(Segmentation(n, points)) == expected


def test_segment_spacing_length_mismatch():
    with pytest.raises(InputError):
        segment_spacing(Segmentation(30, (10,)), 40)

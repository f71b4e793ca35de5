import numpy as np
import pytest

from core.empirical import build_sample
from core.errors import InputError
from core.screen import cvm_two_sample, default_window, scan
from core.simgen import SimModel, SimSpec, generate


def direct_cvm(left, right):
    pooled = list(left) + list(right)
    n1, n2 = len(left), len(right)
    total = 0.0
    for u in pooled:
        f1 = sum(1 for x in left if x <= u) / n1
        f2 = sum(1 for x in right if x <= u) / n2
        total += (f1 - f2) ** 2
    return n1 * n2 / (n1 + n2) ** 2 * total


@pytest.mark.parametrize(
    "left, right, expected",
    [
        ((1.0, 2.0), (3.0, 4.0), 0.375),
        ((1.0,), (2.0,), 0.25),
        ((1.0, 5.0, 2.0), (2.0, 1.0, 5.0), 0.0),
    ],
)
def test_cvm_examples(left, right, expected):
    assert cvm_two_sample(left, right) == pytest.approx(expected)


def test_cvm_matches_direct_formula():
    rng = np.random.default_rng(1)
    for _ in range(10):
        left = rng.normal(size=int(rng.integers(1, 12)))
        right = rng.normal(0.5, size=int(rng.integers(1, 12)))
        assert cvm_two_sample(left, right) == pytest.approx(direct_cvm(left, right))


def test_cvm_needs_two_samples():
    with pytest.raises(InputError):
        cvm_two_sample([], [1.0])


@pytest.mark.parametrize("n, expected", [(8811, 14), (1000, 10), (500, 8), (100, 5), (8, 2)])
def test_default_window(n, expected):
    assert default_window(n) == expected


def test_default_window_scale():
    assert default_window(1000, scale=2.0) == 19
    assert default_window(1000, scale=0.01) == 2


def test_default_window_needs_eight_points():
    with pytest.raises(InputError):
        default_window(7)


def test_single_step_gives_one_candidate():
    values = np.concatenate((np.zeros(50), np.full(50, 10.0)))
    result = scan(build_sample(values), 5)
    assert list(result.candidates) == [50]
    assert list(result.change_points) == [51]
    assert result.gamma[49] == pytest.approx(1.25)
    assert result.n == 100
    assert len(result) == 1


def test_constant_data_has_no_candidates():
    result = scan(build_sample(np.full(40, 3.0)), 4)
    assert np.all(result.gamma == 0.0)
    assert result.size == 0


def test_gamma_is_zero_outside_full_windows():
    rng = np.random.default_rng(6)
    result = scan(build_sample(rng.normal(size=60)), 6)
    assert np.all(result.gamma[:5] == 0.0)
    assert np.all(result.gamma[54:] == 0.0)
    assert np.all(result.gamma[5:54] >= 0.0)
    assert np.all((result.candidates >= 6) & (result.candidates <= 54))


def test_candidates_are_first_local_maxima():
    rng = np.random.default_rng(12)
    n_i = 4
    result = scan(build_sample(rng.normal(size=80)), n_i)
    gamma = result.gamma
    for i in result.candidates:
        window = gamma[i - n_i:i + n_i]
        assert gamma[i - 1] == window.max()
        assert int(np.argmax(window)) == n_i - 1


@pytest.mark.parametrize("transform", [np.exp, lambda x: 0.5 * x + 2.0])
def test_scan_is_rank_invariant(transform):
    rng = np.random.default_rng(21)
    values = rng.normal(size=120)
    a = scan(build_sample(values), 5)
    b = scan(build_sample(transform(values)), 5)
    np.testing.assert_array_equal(a.gamma, b.gamma)
    np.testing.assert_array_equal(a.candidates, b.candidates)


def test_block_processing_matches_one_block(monkeypatch):
    rng = np.random.default_rng(3)
    sample = build_sample(rng.normal(size=90))
    whole = scan(sample, 5)
    monkeypatch.setattr("core.screen._BLOCK_ELEMENTS", 60)
    chunked = scan(sample, 5)
    np.testing.assert_array_equal(whole.gamma, chunked.gamma)
    np.testing.assert_array_equal(whole.candidates, chunked.candidates)


@pytest.mark.parametrize("n_i", [1, 51])
def test_infeasible_window(n_i):
    with pytest.raises(InputError):
        scan(build_sample(np.arange(100.0)), n_i)


def test_blocks_candidates_cover_the_truth():
    data = generate(SimSpec(model=SimModel.BLOCKS_I, n=1000, sigma=0.5, seed=4), replication=0)
    result = scan(build_sample(data.values), default_window(1000))
    candidates = result.change_points
    near = [np.min(np.abs(candidates - tau)) <= 7 for tau in data.truth.change_points]
    assert sum(near) >= 10


@pytest.mark.slow
def test_blocks_screening_coverage_over_replications():
    spec = SimSpec(model=SimModel.BLOCKS_I, n=1000, sigma=0.5, seed=2024)
    covered = 0
    sizes = []
    for rep in range(200):
        data = generate(spec, replication=rep)
        candidates = scan(build_sample(data.values), default_window(1000)).change_points
        sizes.append(len(candidates))
        truth = np.asarray(data.truth.change_points)
        if np.all(np.min(np.abs(candidates[None, :] - truth[:, None]), axis=1) <= 7):
            covered += 1
    assert covered >= 190
    assert np.mean(sizes) < 60

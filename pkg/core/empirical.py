"""
Rank and empirical-CDF machinery shared by all cost computations.

Indices in the public API are 1-based: observation p is values[p - 1],
order statistic l is sorted_values[l - 1], and a segment [i, j) holds
observations i, ..., j - 1.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import InputError

logger = logging.getLogger("NMCD.Empirical")


class WeightVariant(str, Enum):
    """Integration weight for the segment likelihood."""

    ZHANG = "zhang"      # dw = {F(1-F)}^-1 dF, emphasises the tails
    UNIFORM = "uniform"  # dw = dF


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Sample:
    """
    An immutable numeric sequence with its ranks and order statistics.

    Ties are broken by original index (stable), so ranks is always a
    permutation of 1..n and every downstream result is deterministic.
    """

    values: np.ndarray
    ranks: np.ndarray
    sorted_values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True, eq=False)
class WeightTable:
    """
    Per-order-statistic weights.

    point_weights[l - 1] is the weight of the l-th order statistic.
    prefix has a leading zero so that prefix[l] is the sum of the first l
    weights and prefix[b] - prefix[a - 1] is the mass of l in [a, b].
    """

    variant: WeightVariant
    point_weights: np.ndarray
    prefix: np.ndarray

    @property
    def n(self) -> int:
        return int(self.point_weights.shape[0])

    @property
    def total(self) -> float:
        return float(self.prefix[-1])


def build_sample(values: Sequence[float]) -> Sample:
    """
    Build a Sample, computing stable ranks and order statistics.

    Args:
        values: At least two finite real numbers

    Returns:
        The immutable Sample

    Raises:
        InputError: If fewer than two values are given or any value is not finite
    """
    try:
        array = np.array(values, dtype=np.float64).ravel()
    except (TypeError, ValueError) as exc:
        raise InputError(f"values must be real numbers: {exc}") from exc
    if array.shape[0] < 2:
        raise InputError(f"need at least 2 observations, got {array.shape[0]}")
    if not np.all(np.isfinite(array)):
        bad = int(np.flatnonzero(~np.isfinite(array))[0]) + 1
        raise InputError(f"non-finite value at index {bad}")

    # "ordinal" assigns distinct ranks in order of appearance among ties.
    ranks = rankdata(array, method="ordinal").astype(np.int64)
    sorted_values = np.sort(array, kind="stable")
    return Sample(values=_readonly(array), ranks=_readonly(ranks), sorted_values=_readonly(sorted_values))


def build_weight_table(n: int, variant: WeightVariant = WeightVariant.ZHANG) -> WeightTable:
    """
    Build the weight table for a pooled sample of size n.

    ZHANG puts n / (l (n - l)) on 2 <= l <= n - 1 and zero on the extremes.
    UNIFORM puts 1/n on 1 <= l <= n - 1 and zero on l = n.

    Args:
        n: Pooled sample size, at least 2
        variant: Which weight to build

    Returns:
        The WeightTable
    """
    if n < 2:
        raise InputError(f"weight table needs n >= 2, got {n}")
    variant = WeightVariant(variant)
    weights = np.zeros(n, dtype=np.float64)
    if variant is WeightVariant.ZHANG:
        l = np.arange(2, n, dtype=np.float64)
        weights[1:n - 1] = n / (l * (n - l))
    else:
        weights[:n - 1] = 1.0 / n
    prefix = np.concatenate(([0.0], np.cumsum(weights)))
    return WeightTable(variant=variant, point_weights=_readonly(weights), prefix=_readonly(prefix))


def check_segment(n: int, i: int, j: int) -> None:
    """Raise InputError unless 1 <= i < j <= n + 1."""
    if not (1 <= i < j <= n + 1):
        raise InputError(f"segment [{i}, {j}) out of range for n={n}")


def segment_rank_multiset(sample: Sample, i: int, j: int) -> np.ndarray:
    """
    Sorted ranks of the observations with index in [i, j).

    Args:
        sample: The pooled sample
        i: First index of the segment (1-based)
        j: One past the last index of the segment

    Returns:
        Sorted integer array of length j - i
    """
    check_segment(sample.n, i, j)
    return np.sort(sample.ranks[i - 1:j - 1])

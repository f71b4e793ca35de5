"""
Segmentation quality metrics: directed sup-inf distances and the Rand index.

xi(a, b) = sup_{y in b} inf_{x in a} |x - y|. With G the estimate and C the
truth, xi(G, C) is small when every true change-point has an estimate
nearby and xi(C, G) is small when every estimate has a true change-point
nearby. Names follow the formula direction; over_segmentation_error and
under_segmentation_error are aliases matching the usual prose labels for
xi(G, C) and xi(C, G) respectively, even though those labels read
backwards against the formulas.
"""

import math
from typing import Iterable

import numpy as np

from .dp import Segmentation
from .errors import InputError


def xi(from_set: Iterable[int], to_set: Iterable[int]) -> int:
    """
    sup over to_set of the distance to the nearest point of from_set.

    Raises:
        InputError: If either set is empty
    """
    a = np.unique(np.asarray(list(from_set), dtype=np.int64))
    b = np.unique(np.asarray(list(to_set), dtype=np.int64))
    if a.size == 0 or b.size == 0:
        raise InputError("xi needs two non-empty index sets")
    return int(np.max(np.min(np.abs(a[:, None] - b[None, :]), axis=0)))


def xi_sum(estimate: Iterable[int], truth: Iterable[int]) -> int:
    """xi(estimate, truth) + xi(truth, estimate)."""
    estimate, truth = list(estimate), list(truth)
    return xi(estimate, truth) + xi(truth, estimate)


def over_segmentation_error(estimate: Iterable[int], truth: Iterable[int]) -> int:
    return xi(estimate, truth)


def under_segmentation_error(estimate: Iterable[int], truth: Iterable[int]) -> int:
    return xi(truth, estimate)


def contingency_table(seg_a: Segmentation, seg_b: Segmentation) -> np.ndarray:
    """Overlap sizes between every segment of seg_a and every segment of seg_b."""
    if seg_a.n != seg_b.n:
        raise InputError(f"segmentations cover different lengths ({seg_a.n} vs {seg_b.n})")
    ba = np.asarray(seg_a.boundaries)
    bb = np.asarray(seg_b.boundaries)
    starts = np.maximum(ba[:-1, None], bb[None, :-1])
    ends = np.minimum(ba[1:, None], bb[None, 1:])
    return np.clip(ends - starts, 0, None)


def _pairs(counts: np.ndarray) -> float:
    counts = counts.astype(np.float64)
    return float(np.sum(counts * (counts - 1) / 2.0))


def rand_index(seg_a: Segmentation, seg_b: Segmentation) -> float:
    """
    Fraction of index pairs that both segmentations put together or both put apart.

    Returns:
        A value in [0, 1]; 1.0 when n < 2
    """
    table = contingency_table(seg_a, seg_b)
    n = seg_a.n
    total = math.comb(n, 2)
    if total == 0:
        return 1.0
    together_both = _pairs(table)
    together_a = _pairs(table.sum(axis=1))
    together_b = _pairs(table.sum(axis=0))
    agree = total - together_a - together_b + 2.0 * together_both
    return agree / total

"""
Sliding-window screening for change-point candidates.

For every split i with a full window on both sides, gamma_i is the two-sample
Cramer-von Mises statistic between X[i-n_I+1..i] and X[i+1..i+n_I]. A split
is kept when it is the first maximiser of gamma over (i - n_I, i + n_I].
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .empirical import Sample
from .errors import InputError

logger = logging.getLogger("NMCD.Screen")

# Upper bound on the comparison tensor built per block of windows.
_BLOCK_ELEMENTS = 4_000_000


@dataclass(frozen=True, eq=False)
class CandidateSet:
    """
    Screening output.

    gamma[i - 1] is gamma_i (zero outside [n_I, n - n_I]); candidates holds
    the selected splits i, each meaning "the window boundary sits between
    i and i + 1".
    """

    n_i: int
    gamma: np.ndarray
    candidates: np.ndarray

    @property
    def n(self) -> int:
        return int(self.gamma.shape[0])

    @property
    def size(self) -> int:
        return int(self.candidates.shape[0])

    def __len__(self) -> int:
        return self.size

    @property
    def change_points(self) -> np.ndarray:
        """Candidates in first-index-of-new-segment form (i + 1)."""
        return self.candidates + 1


def _ecdf_gap_statistic(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """
    Row-wise CvM statistic for stacked samples of shape (rows, n1) and (rows, n2).

    ECDFs count values <= each pooled point, so tied values are treated as
    equal rather than ordered.
    """
    n1, n2 = left.shape[1], right.shape[1]
    pooled = np.concatenate((left, right), axis=1)
    f1 = (left[:, :, None] <= pooled[:, None, :]).sum(axis=1) / n1
    f2 = (right[:, :, None] <= pooled[:, None, :]).sum(axis=1) / n2
    big_n = n1 + n2
    return (n1 * n2 / big_n**2) * np.sum((f1 - f2) ** 2, axis=1)


def cvm_two_sample(left: Sequence[float], right: Sequence[float]) -> float:
    """
    Two-sample Cramer-von Mises statistic.

    T = (n1 n2 / N^2) * sum over the N pooled points of (F1 - F2)^2.

    Args:
        left: First sample
        right: Second sample

    Returns:
        T >= 0, zero exactly when both ECDFs agree on every pooled point

    Raises:
        InputError: If either sample is empty
    """
    a = np.asarray(left, dtype=np.float64).ravel()
    b = np.asarray(right, dtype=np.float64).ravel()
    if a.size == 0 or b.size == 0:
        raise InputError("Cramer-von Mises statistic needs two non-empty samples")
    return float(_ecdf_gap_statistic(a[None, :], b[None, :])[0])


def default_window(n: int, scale: float = 1.0) -> int:
    """
    Window half-width ceil(scale * (log n)^{3/2} / 2), natural log, at least 2.

    Args:
        n: Sample size, at least 8
        scale: Multiplier on the recommended width (1.0 = recommended)
    """
    if n < 8:
        raise InputError(f"need at least 8 observations to screen, got {n}")
    return max(2, math.ceil(scale * math.log(n) ** 1.5 / 2.0))


def scan(sample: Sample, n_i: int) -> CandidateSet:
    """
    Compute gamma over all full windows and select local maxima.

    Args:
        sample: The data
        n_i: Window half-width, 2 <= n_i and 2 * n_i <= n

    Returns:
        The CandidateSet
    """
    n = sample.n
    if n_i < 2 or 2 * n_i > n:
        raise InputError(f"window n_I={n_i} infeasible for n={n} (need 2 <= n_I <= n/2)")

    values = sample.values
    # Window k (0-based) covers X[k+1 .. k+2n_I] in 1-based terms: split i = k + n_I.
    windows = sliding_window_view(values, 2 * n_i)
    gamma = np.zeros(n, dtype=np.float64)
    rows = max(1, _BLOCK_ELEMENTS // (2 * n_i * n_i))
    for start in range(0, windows.shape[0], rows):
        block = windows[start:start + rows]
        gamma[n_i - 1 + start:n_i - 1 + start + block.shape[0]] = _ecdf_gap_statistic(
            block[:, :n_i], block[:, n_i:]
        )

    # For split i the argmax range (i - n_I, i + n_I] is again a 2n_I window
    # starting at 0-based k = i - n_I; i wins when it sits at offset n_I - 1.
    first_max = np.argmax(sliding_window_view(gamma, 2 * n_i), axis=1)
    splits = np.flatnonzero(first_max == n_i - 1) + n_i
    gamma.setflags(write=False)
    splits.setflags(write=False)
    logger.info(f"Screening with n_I={n_i} kept {splits.size} of {n - 2 * n_i + 1} splits")
    return CandidateSet(n_i=n_i, gamma=gamma, candidates=splits.astype(np.int64))

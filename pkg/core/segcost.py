"""
Nonparametric segment log-likelihood.

A segment [i, j) of length m contributes

    m * sum_l w_l * H(F_l)

where F_l is the fraction of the segment's observations with rank <= l,
w_l the per-order-statistic weight and H(x) = x log x + (1 - x) log(1 - x).

The continuity correction is a mid-rank rule: at an order statistic that
belongs to the segment, the segment ECDF jumps there and is taken halfway
up the jump, F_l = (c_l - 1/2) / m. Elsewhere F_l = c_l / m. Counts 0 and
m away from the segment's own points keep their exact entropy limit 0.

Between two consecutive sorted ranks of a segment F_l is constant apart
from the corrected point itself, so a segment is evaluated over its m rank
gaps using the weight prefix sums instead of over all n order statistics.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed
from scipy.special import xlogy

from .dp import PairCosts, validate_boundaries
from .empirical import Sample, WeightTable, WeightVariant, build_weight_table, check_segment
from .errors import DomainError, InputError

logger = logging.getLogger("NMCD.SegCost")

ArrayOrFloat = Union[float, np.ndarray]


def _entropy(x: np.ndarray) -> np.ndarray:
    return xlogy(x, x) + xlogy(1.0 - x, 1.0 - x)


def bernoulli_entropy(x: ArrayOrFloat) -> ArrayOrFloat:
    """
    x log x + (1 - x) log(1 - x), with the limit 0 at x in {0, 1}.

    Args:
        x: A value (or array of values) in [0, 1]

    Returns:
        The entropy term, same shape as x

    Raises:
        DomainError: If any x lies outside [0, 1]
    """
    arr = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"bernoulli_entropy needs 0 <= x <= 1, got {x}")
    out = _entropy(arr)
    return float(out) if out.ndim == 0 else out


def corrected_fraction(count: Union[int, np.ndarray], m: int, correction: bool = True,
                       at_point: bool = True) -> ArrayOrFloat:
    """
    Segment ECDF value count/m, optionally continuity corrected.

    The correction subtracts 1/(2m) at the segment's own points (at_point),
    where count is in 1..m. Off the segment's points, and for a zero count,
    the plain count/m is returned.

    Args:
        count: Number of segment observations at or below the evaluation point
        m: Segment length, at least 1
        correction: Apply the continuity correction
        at_point: The evaluation point is one of the segment's observations

    Returns:
        A value in [0, 1]; in [0, 1) for corrected counts at a point
    """
    counts = np.asarray(count, dtype=np.float64)
    if m < 1:
        raise InputError(f"segment length must be >= 1, got {m}")
    if np.any(counts < 0) or np.any(counts > m):
        raise InputError(f"count must lie in [0, {m}], got {count}")
    if correction and at_point:
        out = np.where(counts > 0, (counts - 0.5) / m, 0.0)
    else:
        out = counts / m
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class CostModel:
    """
    Weight table plus segment-cost evaluator for one sample.

    Every segment cost is <= 0 and depends on the data only through ranks.
    """

    sample: Sample
    weights: WeightTable
    correction: bool = True

    @classmethod
    def build(cls, sample: Sample, variant: WeightVariant = WeightVariant.ZHANG,
              correction: bool = True) -> "CostModel":
        """Create a CostModel with a freshly built weight table for the sample."""
        return cls(sample=sample, weights=build_weight_table(sample.n, variant), correction=correction)

    @property
    def n(self) -> int:
        return self.sample.n

    def cost_from_sorted_ranks(self, sorted_ranks: np.ndarray) -> float:
        """
        Segment cost from the sorted ranks u_1 < ... < u_m of its members.

        F is t/m on l in [u_t, u_{t+1} - 1] (u_{m+1} = n + 1) and zero
        below u_1, where the entropy vanishes. With the correction the
        point l = u_t itself sits at (t - 1/2)/m. Terms are laid out in
        ascending rank order.
        """
        m = int(sorted_ranks.shape[0])
        prefix = self.weights.prefix
        upper = np.empty(m, dtype=np.int64)
        upper[:-1] = sorted_ranks[1:] - 1
        upper[-1] = self.n
        t = np.arange(1, m + 1, dtype=np.float64)
        if not self.correction:
            gaps = prefix[upper] - prefix[sorted_ranks - 1]
            return float(m * np.sum(_entropy(t / m) * gaps))
        at_point = prefix[sorted_ranks] - prefix[sorted_ranks - 1]
        beyond = prefix[upper] - prefix[sorted_ranks]
        terms = _entropy((t - 0.5) / m) * at_point + _entropy(t / m) * beyond
        return float(m * np.sum(terms))

    def segment_cost(self, i: int, j: int) -> float:
        """
        Log-likelihood contribution of segment [i, j).

        Args:
            i: First index of the segment (1-based)
            j: One past the last index

        Returns:
            The (non-positive) segment cost
        """
        check_segment(self.n, i, j)
        return self.cost_from_sorted_ranks(np.sort(self.sample.ranks[i - 1:j - 1]))


def segment_cost(model: CostModel, i: int, j: int) -> float:
    """Module-level alias for CostModel.segment_cost."""
    return model.segment_cost(i, j)


def _row_costs(model: CostModel, bounds: np.ndarray, p: int) -> np.ndarray:
    """Costs of [bounds[p], bounds[q]) for every q > p, growing the segment rightwards."""
    ranks = model.sample.ranks
    row = np.full(bounds.shape[0], -np.inf)
    current = np.empty(0, dtype=np.int64)
    for q in range(p + 1, bounds.shape[0]):
        chunk = np.sort(ranks[bounds[q - 1] - 1:bounds[q] - 1])
        # Two sorted runs: the stable sort (timsort) merges them in linear time.
        current = np.sort(np.concatenate((current, chunk)), kind="stable")
        row[q] = model.cost_from_sorted_ranks(current)
    return row


def pair_costs(model: CostModel, boundaries: Sequence[int], n_jobs: Optional[int] = 1) -> PairCosts:
    """
    Segment costs for every pair of grid boundaries.

    Rows (one per left boundary) are independent, so they can be spread
    over joblib threads; the values do not depend on the schedule.

    Args:
        model: The cost model
        boundaries: Sorted grid containing 1 and n + 1
        n_jobs: joblib worker count (threads)

    Returns:
        PairCosts mapping (a, b) -> segment_cost(a, b)
    """
    bounds = validate_boundaries(boundaries, model.n)
    g = bounds.shape[0]
    logger.debug(f"Evaluating {g * (g - 1) // 2} segment costs on a grid of {g} boundaries")
    if n_jobs in (None, 1) or g < 64:
        rows = [_row_costs(model, bounds, p) for p in range(g)]
    else:
        rows = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(_row_costs)(model, bounds, p) for p in range(g)
        )
    return PairCosts(boundaries=bounds, matrix=np.vstack(rows))

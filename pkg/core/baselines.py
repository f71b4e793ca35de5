"""
Parametric least-squares competitors.

MEAN minimises the within-segment sum of squares; MEANVAR minimises
sum_k m_k log(sigma_k^2) so scale changes are picked up too. Both share the
maximising DP by negating their costs, and both report the Gaussian profile
log-likelihood so BIC = -loglik + L log n matches the classical criterion.
"""

import logging
import math
import time
from enum import Enum
from typing import Dict, Optional, Sequence

import numpy as np

from .dp import PairCosts, reconstruct, solve, validate_boundaries
from .empirical import Sample, build_sample, check_segment
from .errors import GridError, InputError
from .modelselect import select
from .pipeline import DEFAULT_K_BAR_FULL_GRID, DetectionResult

logger = logging.getLogger("NMCD.Baselines")

# Relative size below which a segment's variance counts as zero.
_VARIANCE_TOLERANCE = 1e-12


class Criterion(str, Enum):
    MEAN = "mean"
    MEANVAR = "meanvar"


def _global_scale(sample: Sample) -> float:
    """Variance of the centred sample, kept away from zero."""
    centred = sample.values - sample.values.mean()
    return max(float(np.mean(centred ** 2)), np.finfo(np.float64).tiny)


def ls_mean_cost(sample: Sample, i: int, j: int) -> float:
    """Sum of squared deviations from the mean over segment [i, j)."""
    check_segment(sample.n, i, j)
    segment = sample.values[i - 1:j - 1]
    return float(np.sum((segment - segment.mean()) ** 2))


def ls_var_cost(sample: Sample, i: int, j: int) -> float:
    """
    m log(sigma^2) over segment [i, j), sigma^2 the mean squared deviation.

    Segments shorter than 2, or whose variance is negligible next to the
    variance of the whole sample, are infeasible and cost +inf.
    """
    check_segment(sample.n, i, j)
    segment = sample.values[i - 1:j - 1]
    m = segment.shape[0]
    if m < 2:
        return math.inf
    variance = float(np.mean((segment - segment.mean()) ** 2))
    if variance <= _VARIANCE_TOLERANCE * _global_scale(sample):
        return math.inf
    return m * math.log(variance)


class LeastSquaresCostModel:
    """
    Vectorised least-squares pair costs from running sums.

    The data are centred on the global mean first, which keeps the
    S2 - S1^2/m form accurate and makes the costs translation invariant.
    """

    def __init__(self, sample: Sample, criterion: Criterion = Criterion.MEAN, min_size: int = 1):
        self.sample = sample
        self.criterion = Criterion(criterion)
        self.min_size = max(min_size, 2 if self.criterion is Criterion.MEANVAR else 1)
        centred = sample.values - sample.values.mean()
        self._s1 = np.concatenate(([0.0], np.cumsum(centred)))
        self._s2 = np.concatenate(([0.0], np.cumsum(centred ** 2)))
        self._scale = _global_scale(sample)

    @property
    def n(self) -> int:
        return self.sample.n

    def _sse(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        m = (b - a).astype(np.float64)
        s1 = self._s1[b - 1] - self._s1[a - 1]
        s2 = self._s2[b - 1] - self._s2[a - 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.maximum(s2 - s1 * s1 / m, 0.0)

    def minimised_costs(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Criterion value of [a, b) for broadcastable boundary arrays (+inf when infeasible)."""
        m = (b - a).astype(np.float64)
        sse = self._sse(a, b)
        if self.criterion is Criterion.MEAN:
            out = sse
        else:
            variance = sse / np.where(m > 0, m, 1.0)
            feasible = variance > _VARIANCE_TOLERANCE * self._scale
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where(feasible, m * np.log(np.where(feasible, variance, 1.0)), np.inf)
        return np.where(m >= self.min_size, out, np.inf)

    def pair_costs(self, boundaries: Sequence[int]) -> PairCosts:
        """Negated criterion for every grid pair, ready for the maximising DP."""
        bounds = validate_boundaries(boundaries, self.n)
        a = bounds[:, None]
        b = bounds[None, :]
        valid = b > a
        costs = np.where(valid, -self.minimised_costs(np.where(valid, a, 1), np.where(valid, b, 2)), -np.inf)
        return PairCosts(boundaries=bounds, matrix=costs)

    def profile_loglik(self, minimised_total: float) -> float:
        """Gaussian profile log-likelihood from the minimised criterion total."""
        n = self.n
        if not math.isfinite(minimised_total):
            return -math.inf
        if self.criterion is Criterion.MEAN:
            if minimised_total <= _VARIANCE_TOLERANCE * self._scale * n:
                return math.inf
            return -0.5 * n * math.log(minimised_total / n)
        return -0.5 * minimised_total


def pl_detect(values: Sequence[float], criterion: Criterion = Criterion.MEAN,
              known_k: Optional[int] = None, k_bar: int = DEFAULT_K_BAR_FULL_GRID,
              zeta: Optional[float] = None, allow_zero: bool = False,
              min_size: int = 1) -> DetectionResult:
    """
    Least-squares detector on the full grid with a log n BIC penalty.

    Args:
        values: The observations (at least 3)
        criterion: MEAN or MEANVAR
        known_k: Return the optimum with exactly this many change-points
        k_bar: Largest number of change-points scanned by the BIC
        zeta: Penalty per change-point; defaults to log n
        allow_zero: Let the BIC choose zero change-points
        min_size: Smallest admissible segment length

    Returns:
        A DetectionResult shaped like the nonparametric detector's
    """
    total_start = time.perf_counter()
    sample = build_sample(values)
    n = sample.n
    if n < 3:
        raise InputError("need at least 3 observations")
    criterion = Criterion(criterion)
    model = LeastSquaresCostModel(sample, criterion, min_size=min_size)
    grid = np.arange(1, n + 2, dtype=np.int64)
    costs = model.pair_costs(grid)
    interior = n - 1
    method = f"pl-{criterion.value}"

    if known_k is not None:
        if not 1 <= known_k <= interior:
            raise GridError(f"known K={known_k} must lie in 1..{interior}")
        table = solve(costs, l_max=known_k)
        per_l = {l: reconstruct(table, l) for l in range(known_k + 1)
                 if math.isfinite(table.value(l))}
        segmentation = reconstruct(table, known_k)
        loglik = model.profile_loglik(-table.value(known_k))
        trace, k_hat, penalty, upper = None, known_k, None, None
    else:
        upper = min(k_bar, interior)
        penalty = zeta if zeta is not None else math.log(n)
        l_min = 0 if allow_zero else 1
        table = solve(costs, l_max=upper)
        logliks: Dict[int, float] = {l: model.profile_loglik(-table.value(l)) for l in range(upper + 1)}
        trace = select(logliks, penalty, l_min=l_min, k_bar=upper)
        k_hat = trace.k_hat
        per_l = {l: reconstruct(table, l) for l in range(l_min, upper + 1)
                 if math.isfinite(table.value(l))}
        segmentation = per_l[k_hat]
        loglik = logliks[k_hat]

    elapsed = (time.perf_counter() - total_start) * 1000.0
    logger.info(f"{method} selected K={k_hat} on n={n} in {elapsed:.0f} ms")
    return DetectionResult(
        values=sample.values,
        segmentation=segmentation,
        k_hat=k_hat,
        loglik=loglik,
        per_l=per_l,
        grid=grid,
        bic_trace=trace,
        zeta=penalty,
        k_bar=upper,
        method=method,
        timings={"total_ms": elapsed},
    )

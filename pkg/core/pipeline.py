"""
The full detector: screening, pair costs, dynamic programming and BIC.
"""

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .dp import PairCosts, Segmentation, reconstruct, solve
from .empirical import WeightVariant, build_sample
from .errors import GridError, InputError
from .modelselect import DEFAULT_ZETA_EXPONENT, BicTrace, default_zeta, select
from .screen import CandidateSet, default_window, scan
from .segcost import CostModel, pair_costs

logger = logging.getLogger("NMCD.Pipeline")

# K_bar when there is no candidate set to size it from.
DEFAULT_K_BAR_FULL_GRID = 30
MIN_SCREENING_N = 8


@dataclass(frozen=True)
class DetectConfig:
    """
    Tuning for one detection run. None means "use the recommended default".
    """

    weight: WeightVariant = WeightVariant.ZHANG
    correction: bool = True
    screening: bool = True
    window: Optional[int] = None
    window_scale: float = 1.0
    zeta: Optional[float] = None
    zeta_exponent: float = DEFAULT_ZETA_EXPONENT
    zeta_scale: float = 1.0
    k_bar: Optional[int] = None
    known_k: Optional[int] = None
    allow_zero: bool = False
    n_jobs: Optional[int] = 1

    def __post_init__(self):
        object.__setattr__(self, "weight", WeightVariant(self.weight))
        for name in ("window", "zeta", "k_bar"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise InputError(f"{name} must be positive, got {value}")
        if self.known_k is not None and self.known_k < 1:
            raise InputError(f"known_k must be >= 1, got {self.known_k}")
        if self.window_scale <= 0 or self.zeta_scale <= 0:
            raise InputError("window_scale and zeta_scale must be positive")
        if self.n_jobs == 0:
            raise InputError("n_jobs must be non-zero")

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["weight"] = self.weight.value
        return data


@dataclass(frozen=True, eq=False)
class DetectionResult:
    """
    Outcome of one detection run.

    segmentation equals per_l[k_hat]; bic_trace is None in known-K mode and
    candidates is None when screening was off.
    """

    values: np.ndarray
    segmentation: Segmentation
    k_hat: int
    loglik: float
    per_l: Dict[int, Segmentation]
    grid: np.ndarray
    bic_trace: Optional[BicTrace] = None
    candidates: Optional[CandidateSet] = None
    window: Optional[int] = None
    zeta: Optional[float] = None
    k_bar: Optional[int] = None
    method: str = "nmcd"
    timings: Dict[str, float] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.segmentation.n

    @property
    def change_points(self) -> tuple:
        return self.segmentation.change_points

    def segment_labels(self) -> np.ndarray:
        return self.segmentation.labels()

    def segment_means(self) -> np.ndarray:
        """Per-index mean of the segment each observation belongs to."""
        labels = self.segment_labels()
        sums = np.bincount(labels, weights=self.values)
        counts = np.bincount(labels)
        return (sums / counts)[labels]


def _elapsed_ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0


def _build_grid(n: int, config: DetectConfig, sample, timings, warnings):
    """Screened grid when screening is on and yields candidates, full grid otherwise."""
    full_grid = np.arange(1, n + 2, dtype=np.int64)
    if not config.screening:
        return full_grid, None, None

    window = config.window if config.window is not None else default_window(n, config.window_scale)
    start = time.perf_counter()
    candidates = scan(sample, window)
    timings["screening_ms"] = _elapsed_ms(start)
    if candidates.size == 0:
        message = "screening produced no candidates; falling back to the full grid"
        logger.warning(message)
        warnings.append(message)
        return full_grid, candidates, window
    grid = np.concatenate(([1], candidates.change_points, [n + 1])).astype(np.int64)
    return grid, candidates, window


def detect(values: Sequence[float], config: Optional[DetectConfig] = None) -> DetectionResult:
    """
    Run the nonparametric multiple change-point detector.

    Args:
        values: The observations
        config: Tuning; defaults to DetectConfig()

    Returns:
        The DetectionResult

    Raises:
        InputError: On degenerate input or infeasible settings
    """
    config = config or DetectConfig()
    total_start = time.perf_counter()
    timings: Dict[str, float] = {}
    warnings: List[str] = []

    try:
        array = np.asarray(values, dtype=np.float64).ravel()
    except (TypeError, ValueError) as exc:
        raise InputError(f"values must be real numbers: {exc}") from exc
    min_n = MIN_SCREENING_N if config.screening else 3
    if array.shape[0] < min_n:
        raise InputError(f"need at least {min_n} observations")
    sample = build_sample(array)
    n = sample.n

    grid, candidates, window = _build_grid(n, config, sample, timings, warnings)
    interior = grid.shape[0] - 2
    logger.info(f"Detecting on n={n} with a grid of {interior} interior boundaries")

    start = time.perf_counter()
    model = CostModel.build(sample, config.weight, config.correction)
    costs = pair_costs(model, grid, n_jobs=config.n_jobs)
    timings["costs_ms"] = _elapsed_ms(start)

    if config.known_k is not None:
        if config.known_k > interior:
            raise GridError(f"known K={config.known_k} exceeds the {interior} available boundaries")
        result = _finish_known_k(costs, config.known_k, timings)
        zeta, k_bar = None, None
    else:
        if candidates is not None and candidates.size > 0:
            default_k_bar = candidates.size
        else:
            default_k_bar = DEFAULT_K_BAR_FULL_GRID
        k_bar = min(config.k_bar or default_k_bar, interior)
        zeta = config.zeta if config.zeta is not None else default_zeta(n, config.zeta_exponent, config.zeta_scale)
        result = _finish_bic(costs, k_bar, zeta, 0 if config.allow_zero else 1, timings)

    segmentation, k_hat, loglik, per_l, trace = result
    timings["total_ms"] = _elapsed_ms(total_start)
    logger.info(f"Selected K={k_hat} change-points in {timings['total_ms']:.0f} ms")
    return DetectionResult(
        values=sample.values,
        segmentation=segmentation,
        k_hat=k_hat,
        loglik=loglik,
        per_l=per_l,
        grid=grid,
        bic_trace=trace,
        candidates=candidates,
        window=window,
        zeta=zeta,
        k_bar=k_bar,
        method="nmcd" if config.weight is WeightVariant.ZHANG else "nmcd-uniform",
        timings=timings,
        warnings=warnings,
    )


def _finish_known_k(costs: PairCosts, k: int, timings: Dict[str, float]):
    start = time.perf_counter()
    table = solve(costs, l_max=k)
    per_l = {l: reconstruct(table, l) for l in range(k + 1)}
    timings["dp_ms"] = _elapsed_ms(start)
    return per_l[k], k, table.value(k), per_l, None


def _finish_bic(costs: PairCosts, k_bar: int, zeta: float, l_min: int, timings: Dict[str, float]):
    start = time.perf_counter()
    table = solve(costs, l_max=k_bar)
    trace = select(table.values(), zeta, l_min=l_min, k_bar=k_bar)
    per_l = {l: reconstruct(table, l) for l in range(l_min, k_bar + 1)}
    timings["dp_ms"] = _elapsed_ms(start)
    k_hat = trace.k_hat
    return per_l[k_hat], k_hat, table.value(k_hat), per_l, trace

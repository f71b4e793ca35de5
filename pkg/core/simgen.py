"""
Seeded simulation models with known change-points.

Every generator draws from numpy's PCG64 bit generator. Replication r of a
Monte Carlo run with master seed s uses SeedSequence(s, spawn_key=(r,)),
i.e. the r-th child of s, so replications are reproducible independently
of the order (or the process) they run in.

Change-point tau_j is the first index of the new segment: observation i
carries jump h_j when i >= tau_j.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .dp import Segmentation
from .errors import InputError

logger = logging.getLogger("NMCD.SimGen")


class SimModel(str, Enum):
    BLOCKS_I = "blocks1"
    MEANSCALE_II = "meanscale2"
    SHAPE_III = "shape3"
    DIVERGING_I = "diverging1"
    DIVERGING_II = "diverging2"


class ErrorDist(str, Enum):
    NORMAL = "normal"
    T3 = "t3"
    CHISQ1 = "chisq1"


BLOCKS_Q = (0.1, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81)
BLOCKS_H = (2.01, -2.51, 1.51, -2.01, 2.51, -2.11, 1.05, 2.16, -1.56, 2.56, -2.11)

MEANSCALE_Q = (0.20, 0.40, 0.65, 0.85)
MEANSCALE_H = (3.0, 0.0, -2.0, 0.0)
MEANSCALE_V = (1.0, 5.0, 1.0, 0.25)

SHAPE_Q = (0.20, 0.50, 0.75)

DIVERGING_JUMP = 1.5
DIVERGING_SCALE = 5.0
DIVERGING_NU_SD = 0.2
_MAX_REDRAWS = 10_000


@dataclass(frozen=True)
class SimSpec:
    """One simulation setting. SHAPE_III ignores sigma and error."""

    model: SimModel = SimModel.BLOCKS_I
    n: int = 1000
    sigma: float = 0.5
    error: ErrorDist = ErrorDist.NORMAL
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model", SimModel(self.model))
        object.__setattr__(self, "error", ErrorDist(self.error))
        if self.n < 20:
            raise InputError(f"simulation needs n >= 20, got {self.n}")
        if self.model is not SimModel.SHAPE_III and not self.sigma > 0:
            raise InputError(f"sigma must be positive, got {self.sigma}")
        if self.seed < 0:
            raise InputError(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True, eq=False)
class SimulatedData:
    values: np.ndarray
    truth: Segmentation
    spec: SimSpec


def make_rng(seed: int, replication: Optional[int] = None) -> np.random.Generator:
    """PCG64 generator for a master seed, or for one replication substream of it."""
    if replication is None:
        sequence = np.random.SeedSequence(seed)
    else:
        sequence = np.random.SeedSequence(seed, spawn_key=(int(replication),))
    return np.random.Generator(np.random.PCG64(sequence))


def draw_errors(rng: np.random.Generator, error: ErrorDist, size: int) -> np.ndarray:
    """Standardised noise: N(0,1), Student t with 3 df, or (chi2_1 - 1)/sqrt(2)."""
    error = ErrorDist(error)
    if error is ErrorDist.NORMAL:
        return rng.standard_normal(size)
    if error is ErrorDist.T3:
        return rng.standard_t(3, size)
    return (rng.chisquare(1, size) - 1.0) / math.sqrt(2.0)


def _standardised_chisq(rng: np.random.Generator, df: int, size: int) -> np.ndarray:
    return (rng.chisquare(df, size) - df) / math.sqrt(2.0 * df)


def fixed_locations(n: int, q: Tuple[float, ...]) -> np.ndarray:
    """tau_j = round(n q_j)."""
    return np.rint(n * np.asarray(q)).astype(np.int64)


def _segment_index(n: int, taus: np.ndarray) -> np.ndarray:
    """Number of change-points at or before each index 1..n."""
    return np.searchsorted(taus, np.arange(1, n + 1), side="right")


def _piecewise(n: int, taus: np.ndarray, jumps: np.ndarray, scale_steps: np.ndarray,
               sigma: float, noise: np.ndarray) -> np.ndarray:
    """Mean sum_{j<=k} h_j and scale sigma * prod_{j<=k} v_j in segment k."""
    seg = _segment_index(n, taus)
    means = np.concatenate(([0.0], np.cumsum(jumps)))
    scales = sigma * np.concatenate(([1.0], np.cumprod(scale_steps)))
    return means[seg] + scales[seg] * noise


def _random_locations(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """Sorted round(n U) draws, redrawn until all gaps (boundaries included) are >= 2."""
    for _ in range(_MAX_REDRAWS):
        taus = np.sort(np.rint(n * rng.uniform(size=k)).astype(np.int64))
        gaps = np.diff(np.concatenate(([1], taus, [n + 1])))
        if np.all(gaps >= 2):
            return taus
    raise InputError(f"could not place {k} well-separated change-points in n={n}")


def _alternating(rng: np.random.Generator, k: int, odd: float, even: float) -> np.ndarray:
    """odd + nu for j = 1, 3, ...; even + nu for j = 2, 4, ...; nu ~ N(0, 0.2^2)."""
    base = np.where(np.arange(1, k + 1) % 2 == 1, odd, even)
    return base + rng.normal(0.0, DIVERGING_NU_SD, size=k)


def diverging_count(model: SimModel, n: int) -> int:
    """K_n = ceil(0.4 sqrt n) for DIVERGING_I and ceil(0.2 sqrt n) for DIVERGING_II."""
    factor = 0.4 if SimModel(model) is SimModel.DIVERGING_I else 0.2
    return math.ceil(factor * math.sqrt(n))


def generate(spec: SimSpec, replication: Optional[int] = None) -> SimulatedData:
    """
    Simulate one data set.

    Args:
        spec: Model, size, noise level, error law and master seed
        replication: Substream index for Monte Carlo runs (None = master stream)

    Returns:
        The values and the true segmentation
    """
    rng = make_rng(spec.seed, replication)
    n = spec.n
    model = spec.model

    if model is SimModel.BLOCKS_I:
        taus = fixed_locations(n, BLOCKS_Q)
        noise = draw_errors(rng, spec.error, n)
        values = _piecewise(n, taus, np.asarray(BLOCKS_H), np.ones(len(taus)), spec.sigma, noise)
    elif model is SimModel.MEANSCALE_II:
        taus = fixed_locations(n, MEANSCALE_Q)
        noise = draw_errors(rng, spec.error, n)
        values = _piecewise(n, taus, np.asarray(MEANSCALE_H), np.asarray(MEANSCALE_V), spec.sigma, noise)
    elif model is SimModel.SHAPE_III:
        taus = fixed_locations(n, SHAPE_Q)
        bounds = np.concatenate(([1], taus, [n + 1]))
        lengths = np.diff(bounds)
        values = np.concatenate((
            rng.standard_normal(lengths[0]),
            _standardised_chisq(rng, 3, lengths[1]),
            _standardised_chisq(rng, 1, lengths[2]),
            rng.standard_normal(lengths[3]),
        ))
    elif model is SimModel.DIVERGING_I:
        k = diverging_count(model, n)
        taus = _random_locations(rng, n, k)
        jumps = _alternating(rng, k, -DIVERGING_JUMP, DIVERGING_JUMP)
        noise = draw_errors(rng, spec.error, n)
        values = _piecewise(n, taus, jumps, np.ones(k), spec.sigma, noise)
    else:
        k = diverging_count(model, n)
        taus = _random_locations(rng, n, k)
        growth = _alternating(rng, k, DIVERGING_SCALE, DIVERGING_SCALE)
        steps = np.where(np.arange(1, k + 1) % 2 == 1, 1.0 / growth, growth)
        noise = draw_errors(rng, spec.error, n)
        values = _piecewise(n, taus, np.zeros(k), steps, spec.sigma, noise)

    truth = Segmentation(n=n, change_points=tuple(int(t) for t in taus))
    values = np.asarray(values, dtype=np.float64)
    values.setflags(write=False)
    return SimulatedData(values=values, truth=truth, spec=spec)


def segment_spacing(truth: Segmentation, n: Optional[int] = None) -> int:
    """Smallest segment length, counting the boundaries 1 and n + 1."""
    n = truth.n if n is None else n
    if n != truth.n:
        raise InputError(f"segmentation covers n={truth.n}, not {n}")
    return int(np.min(np.diff(np.asarray(truth.boundaries))))

"""
Exact dynamic programming over a boundary grid.

The objective is segment-additive, so the best way to cut the prefix ending
at boundary q into L + 1 segments is the best (L - 1)-cut prefix ending at
some earlier boundary p plus the cost of [p, q). Every routine here
MAXIMISES; least-squares style costs are negated before they get here.
"""

import itertools
import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import GridError, InputError, InstanceTooLargeError

logger = logging.getLogger("NMCD.DP")

BRUTE_FORCE_LIMIT = 10**6


@dataclass(frozen=True)
class Segmentation:
    """
    Interior change-points of a sequence of length n.

    Each change-point is the first index of a new segment, so the segments
    are [1, tau_1), [tau_1, tau_2), ..., [tau_K, n + 1).
    """

    n: int
    change_points: Tuple[int, ...] = ()

    def __post_init__(self):
        points = tuple(int(c) for c in self.change_points)
        object.__setattr__(self, "change_points", points)
        if self.n < 1:
            raise InputError(f"segmentation length must be >= 1, got {self.n}")
        if any(c < 2 or c > self.n for c in points):
            raise InputError(f"change-points must lie in [2, {self.n}], got {points}")
        if any(b <= a for a, b in zip(points, points[1:])):
            raise InputError(f"change-points must be strictly increasing, got {points}")

    @property
    def k(self) -> int:
        return len(self.change_points)

    @property
    def boundaries(self) -> Tuple[int, ...]:
        return (1, *self.change_points, self.n + 1)

    def segments(self) -> List[Tuple[int, int]]:
        """Half-open [start, end) index pairs, 1-based."""
        b = self.boundaries
        return list(zip(b[:-1], b[1:]))

    def labels(self) -> np.ndarray:
        """Segment id (0..K) of every index 1..n."""
        lengths = np.diff(np.asarray(self.boundaries))
        return np.repeat(np.arange(self.k + 1), lengths)


def validate_boundaries(boundaries: Sequence[int], n: int) -> np.ndarray:
    """
    Check a boundary grid: strictly increasing, starting at 1, ending at n + 1.

    Returns:
        The grid as a read-only int64 array

    Raises:
        GridError: On any violation
    """
    bounds = np.array(boundaries, dtype=np.int64).ravel()
    if bounds.shape[0] < 2 or bounds[0] != 1 or bounds[-1] != n + 1:
        raise GridError(f"boundaries must start at 1 and end at {n + 1}")
    if np.any(np.diff(bounds) <= 0):
        raise GridError("boundaries must be strictly increasing")
    bounds.setflags(write=False)
    return bounds


class PairCosts(Mapping):
    """
    Read-only map (a, b) -> cost of segment [a, b) over a boundary grid.

    Backed by a dense matrix whose entry [p, q] is the cost between the p-th
    and q-th boundaries; entries with p >= q and infeasible segments hold
    -inf.
    """

    def __init__(self, boundaries: np.ndarray, matrix: np.ndarray):
        self.boundaries = boundaries
        matrix = np.array(matrix, dtype=np.float64)
        g = boundaries.shape[0]
        if matrix.shape != (g, g):
            raise GridError(f"cost matrix shape {matrix.shape} does not match grid of {g}")
        matrix[np.tril_indices(g)] = -np.inf
        matrix.setflags(write=False)
        self.matrix = matrix
        self._position = {int(b): k for k, b in enumerate(boundaries)}

    @property
    def n(self) -> int:
        return int(self.boundaries[-1]) - 1

    def position(self, boundary: int) -> int:
        try:
            return self._position[int(boundary)]
        except KeyError:
            raise GridError(f"boundary {boundary} is not on the grid") from None

    def __getitem__(self, key: Tuple[int, int]) -> float:
        a, b = key
        if a not in self._position or b not in self._position:
            raise KeyError(key)
        p, q = self._position[a], self._position[b]
        if p >= q:
            raise KeyError(key)
        return float(self.matrix[p, q])

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        bounds = [int(b) for b in self.boundaries]
        for p, a in enumerate(bounds):
            for b in bounds[p + 1:]:
                yield (a, b)

    def __len__(self) -> int:
        g = self.boundaries.shape[0]
        return g * (g - 1) // 2

    def restrict(self, boundaries: Sequence[int]) -> "PairCosts":
        """The same costs on a sub-grid of the current boundaries."""
        bounds = validate_boundaries(boundaries, self.n)
        idx = np.array([self.position(b) for b in bounds])
        return PairCosts(bounds, self.matrix[np.ix_(idx, idx)])


@dataclass(frozen=True, eq=False)
class DpTable:
    """
    best_value[L, q]: best total over exactly L change-points for the prefix
    ending at boundaries[q]; links[L, q]: position of the last change-point
    on that optimal path.
    """

    boundaries: np.ndarray
    best_value: np.ndarray
    links: np.ndarray = field(repr=False)

    @property
    def l_max(self) -> int:
        return int(self.best_value.shape[0]) - 1

    @property
    def n(self) -> int:
        return int(self.boundaries[-1]) - 1

    def value(self, l: int) -> float:
        """Best total with exactly l change-points over the whole sequence."""
        if not 0 <= l <= self.l_max:
            raise InputError(f"L={l} outside 0..{self.l_max}")
        return float(self.best_value[l, -1])

    def values(self) -> Dict[int, float]:
        return {l: self.value(l) for l in range(self.l_max + 1)}


def _resolve(costs: PairCosts, boundaries: Optional[Sequence[int]]) -> PairCosts:
    if boundaries is None:
        return costs
    bounds = np.asarray(boundaries, dtype=np.int64)
    if bounds.shape == costs.boundaries.shape and np.array_equal(bounds, costs.boundaries):
        return costs
    return costs.restrict(bounds)


def solve(costs: PairCosts, boundaries: Optional[Sequence[int]] = None, l_max: int = 0) -> DpTable:
    """
    Fill the DP table for every number of change-points 0..l_max.

    Args:
        costs: Pair costs (maximised)
        boundaries: Grid to solve on; defaults to the grid of costs
        l_max: Largest number of change-points

    Returns:
        The filled DpTable

    Raises:
        GridError: If l_max exceeds the number of interior boundaries
    """
    costs = _resolve(costs, boundaries)
    bounds = costs.boundaries
    g = bounds.shape[0]
    if not 0 <= l_max <= g - 2:
        raise GridError(f"L_max={l_max} needs 0 <= L_max <= {g - 2} interior boundaries")

    c = costs.matrix
    best = np.full((l_max + 1, g), -np.inf)
    links = np.full((l_max + 1, g), -1, dtype=np.int64)
    best[0] = c[0]
    links[0] = 0
    columns = np.arange(g)
    for l in range(1, l_max + 1):
        candidates = best[l - 1][:, None] + c
        # argmax returns the first maximiser: the smallest last change-point.
        links[l] = np.argmax(candidates, axis=0)
        best[l] = candidates[links[l], columns]
        logger.debug(f"DP layer L={l}: best total {best[l, -1]:.6g}")
    best.setflags(write=False)
    links.setflags(write=False)
    return DpTable(boundaries=bounds, best_value=best, links=links)


def reconstruct(table: DpTable, l: int) -> Segmentation:
    """
    Back-track the optimal segmentation with exactly l change-points.

    Ties resolve to the smallest rightmost change-point, recursively.
    """
    if not math.isfinite(table.value(l)):
        raise InputError(f"no feasible segmentation with {l} change-points")
    points = []
    q = table.boundaries.shape[0] - 1
    for layer in range(l, 0, -1):
        q = int(table.links[layer, q])
        points.append(int(table.boundaries[q]))
    return Segmentation(n=table.n, change_points=tuple(reversed(points)))


def brute_force(costs: PairCosts, boundaries: Optional[Sequence[int]] = None,
                l: int = 0) -> Tuple[float, Segmentation]:
    """
    Exhaustive maximisation over all choices of l interior boundaries.

    Totals are accumulated left to right like the DP, and ties follow the
    same rule as reconstruct.

    Raises:
        InstanceTooLargeError: If there are more than BRUTE_FORCE_LIMIT choices
    """
    costs = _resolve(costs, boundaries)
    bounds = costs.boundaries
    g = bounds.shape[0]
    if not 0 <= l <= g - 2:
        raise GridError(f"L={l} needs 0 <= L <= {g - 2} interior boundaries")
    if math.comb(g - 2, l) > BRUTE_FORCE_LIMIT:
        raise InstanceTooLargeError(f"C({g - 2}, {l}) exceeds {BRUTE_FORCE_LIMIT} segmentations")

    c = costs.matrix
    best_value = -math.inf
    best_path: Optional[Tuple[int, ...]] = None
    for combo in itertools.combinations(range(1, g - 1), l):
        path = (0, *combo, g - 1)
        total = float(c[path[0], path[1]])
        for p, q in zip(path[1:], path[2:]):
            total += float(c[p, q])
        if total == -math.inf:
            continue
        if (best_path is None or total > best_value
                or (total == best_value and combo[::-1] < best_path[::-1])):
            best_value, best_path = total, combo
    if best_path is None:
        raise InputError(f"no feasible segmentation with {l} change-points")
    return best_value, Segmentation(n=costs.n, change_points=tuple(int(bounds[p]) for p in best_path))

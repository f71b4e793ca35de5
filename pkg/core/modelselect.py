"""BIC selection of the number of change-points."""

import logging
import math
from dataclasses import dataclass
from typing import List, Mapping, Tuple

from .errors import InputError

logger = logging.getLogger("NMCD.ModelSelect")

DEFAULT_ZETA_EXPONENT = 2.1


@dataclass(frozen=True)
class BicEntry:
    l: int
    max_loglik: float
    bic: float


@dataclass(frozen=True)
class BicTrace:
    """BIC_L = -max_loglik(L) + L * zeta for L = l_min..k_bar; k_hat is the argmin."""

    zeta: float
    k_bar: int
    l_min: int
    entries: Tuple[BicEntry, ...]
    k_hat: int

    def bic(self, l: int) -> float:
        return self.entries[l - self.l_min].bic

    def as_records(self) -> List[dict]:
        return [{"L": e.l, "max_loglik": e.max_loglik, "bic": e.bic} for e in self.entries]


def default_zeta(n: int, exponent: float = DEFAULT_ZETA_EXPONENT, scale: float = 1.0) -> float:
    """
    Penalty per change-point: scale * (log n)^exponent / 2, natural log.

    exponent=2 with n=8811 gives about 41.
    """
    if n < 3:
        raise InputError(f"default zeta needs n >= 3, got {n}")
    return scale * math.log(n) ** exponent / 2.0


def bic_value(max_loglik: float, l: int, zeta: float) -> float:
    """-max_loglik + l * zeta; an infeasible (-inf) likelihood gives +inf."""
    return -max_loglik + l * zeta


def select(dp_values: Mapping[int, float], zeta: float, l_min: int = 1, k_bar: int = 1) -> BicTrace:
    """
    Pick the number of change-points minimising BIC.

    Args:
        dp_values: L -> best log-likelihood with exactly L change-points
        zeta: Penalty per change-point, > 0
        l_min: 0 or 1; smallest L considered
        k_bar: Largest L considered

    Returns:
        The BicTrace; ties in BIC go to the smallest L

    Raises:
        InputError: If a value in l_min..k_bar is missing or arguments are invalid
    """
    if l_min not in (0, 1):
        raise InputError(f"L_min must be 0 or 1, got {l_min}")
    if not zeta > 0:
        raise InputError(f"zeta must be positive, got {zeta}")
    if k_bar < l_min:
        raise InputError(f"K_bar={k_bar} is below L_min={l_min}")
    missing = [l for l in range(l_min, k_bar + 1) if l not in dp_values]
    if missing:
        raise InputError(f"missing likelihood for L in {missing}")

    entries = tuple(
        BicEntry(l=l, max_loglik=float(dp_values[l]), bic=bic_value(float(dp_values[l]), l, zeta))
        for l in range(l_min, k_bar + 1)
    )
    best = entries[0]
    for entry in entries[1:]:
        if entry.bic < best.bic:
            best = entry
    if best.bic == math.inf:
        raise InputError("no feasible number of change-points in range")
    logger.debug(f"BIC selected K={best.l} (zeta={zeta:.4g}, range {l_min}..{k_bar})")
    return BicTrace(zeta=float(zeta), k_bar=k_bar, l_min=l_min, entries=entries, k_hat=best.l)

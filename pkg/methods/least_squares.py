"""
Least-squares baseline methods for nmcd.
"""

import logging
from typing import Any, Dict, List, Sequence

from core.baselines import Criterion, pl_detect
from core.pipeline import DEFAULT_K_BAR_FULL_GRID, DetectionResult

from .base_method import BaseMethod

logger = logging.getLogger("NMCD.Methods.LeastSquares")


class PlMeanMethod(BaseMethod):
    """Gaussian mean-change likelihood (least squares) on the full grid."""

    criterion = Criterion.MEAN

    @property
    def name(self) -> str:
        return "pl-mean"

    @property
    def description(self) -> str:
        return "Least-squares mean-change detection with a log n BIC penalty"

    @property
    def parameters(self) -> List[Dict[str, Any]]:
        return [
            {"name": "known_k", "type": "integer", "description": "Number of change-points, if known", "default": None},
            {"name": "k_bar", "type": "integer", "description": "Upper bound scanned by the BIC", "default": DEFAULT_K_BAR_FULL_GRID},
            {"name": "zeta", "type": "number", "description": "Penalty per change-point (default log n)", "default": None},
            {"name": "allow_zero", "type": "boolean", "description": "Let the BIC choose zero change-points", "default": False},
            {"name": "min_size", "type": "integer", "description": "Smallest admissible segment", "default": 1},
        ]

    @property
    def examples(self) -> List[str]:
        return [f"nmcd detect data.txt --method {self.name}"]

    def execute(self, values: Sequence[float], **kwargs) -> DetectionResult:
        k_bar = kwargs.get("k_bar") or DEFAULT_K_BAR_FULL_GRID
        logger.debug(f"Running {self.name} with K_bar={k_bar}")
        return pl_detect(
            values,
            criterion=self.criterion,
            known_k=kwargs.get("known_k"),
            k_bar=k_bar,
            zeta=kwargs.get("zeta"),
            allow_zero=bool(kwargs.get("allow_zero", False)),
            min_size=int(kwargs.get("min_size") or 1),
        )


class PlMeanVarMethod(PlMeanMethod):
    """Gaussian mean-and-variance likelihood on the full grid."""

    criterion = Criterion.MEANVAR

    @property
    def name(self) -> str:
        return "pl-meanvar"

    @property
    def description(self) -> str:
        return "Least-squares mean-and-scale detection (sum of m log sigma^2) with a log n BIC penalty"

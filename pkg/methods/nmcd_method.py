"""
Nonparametric detector methods for nmcd.

"nmcd" uses the tail-emphasising weight, "nmcd-uniform" the plain
dw = dF weight; both run the screened pipeline.
"""

import logging
from typing import Any, Dict, List, Sequence

from core.empirical import WeightVariant
from core.pipeline import DetectConfig, DetectionResult, detect

from .base_method import BaseMethod

logger = logging.getLogger("NMCD.Methods.Nmcd")

_CONFIG_FIELDS = (
    "correction", "screening", "window", "window_scale", "zeta", "zeta_exponent",
    "zeta_scale", "k_bar", "known_k", "allow_zero", "n_jobs",
)


class NmcdMethod(BaseMethod):
    """Screening + rank likelihood + DP + BIC."""

    default_weight = WeightVariant.ZHANG

    @property
    def name(self) -> str:
        return "nmcd"

    @property
    def description(self) -> str:
        return "Nonparametric likelihood change-point detection with the tail-weighted integral"

    @property
    def parameters(self) -> List[Dict[str, Any]]:
        return [
            {"name": "known_k", "type": "integer", "description": "Number of change-points, if known", "default": None},
            {"name": "k_bar", "type": "integer", "description": "Upper bound scanned by the BIC", "default": None},
            {"name": "zeta", "type": "number", "description": "Penalty per change-point", "default": None},
            {"name": "zeta_exponent", "type": "number", "description": "Exponent of log n in the default penalty", "default": 2.1},
            {"name": "zeta_scale", "type": "number", "description": "Multiplier on the default penalty", "default": 1.0},
            {"name": "window", "type": "integer", "description": "Screening window half-width", "default": None},
            {"name": "window_scale", "type": "number", "description": "Multiplier on the default window", "default": 1.0},
            {"name": "screening", "type": "boolean", "description": "Screen candidates before the DP", "default": True},
            {"name": "correction", "type": "boolean", "description": "Continuity correction", "default": True},
            {"name": "allow_zero", "type": "boolean", "description": "Let the BIC choose zero change-points", "default": False},
            {"name": "weight", "type": "string", "description": "Integration weight: zhang or uniform", "default": self.default_weight.value},
            {"name": "n_jobs", "type": "integer", "description": "Threads for pair-cost evaluation", "default": 1},
        ]

    @property
    def examples(self) -> List[str]:
        return [
            "nmcd detect data.txt",
            "nmcd detect data.txt --k 3 --no-screening",
            "nmcd detect data.csv --column gc --zeta-exponent 2",
        ]

    def build_config(self, **kwargs) -> DetectConfig:
        """DetectConfig from keyword options; None values fall back to defaults."""
        options = {key: kwargs[key] for key in _CONFIG_FIELDS if kwargs.get(key) is not None}
        options["weight"] = self._weight(kwargs.get("weight"))
        return DetectConfig(**options)

    def _weight(self, requested) -> WeightVariant:
        return WeightVariant(requested) if requested is not None else self.default_weight

    def execute(self, values: Sequence[float], **kwargs) -> DetectionResult:
        config = self.build_config(**kwargs)
        logger.debug(f"Running {self.name} with {config}")
        return detect(values, config)


class NmcdUniformMethod(NmcdMethod):
    """The same detector with dw = dF (uniform weight over order statistics)."""

    default_weight = WeightVariant.UNIFORM

    @property
    def name(self) -> str:
        return "nmcd-uniform"

    @property
    def description(self) -> str:
        return "Nonparametric likelihood change-point detection with the uniform integral"

    @property
    def examples(self) -> List[str]:
        return ["nmcd bench --model blocks1 --n 500 --methods nmcd,nmcd-uniform --known-k"]

    def _weight(self, requested) -> WeightVariant:
        return WeightVariant.UNIFORM

"""
Base Method Interface for nmcd

This module defines the base interface that all detection methods implement.
Methods wrap a detector behind a common name/parameters/execute surface so
the CLI and the benchmark harness can run any of them interchangeably.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence

from core.pipeline import DetectionResult

logger = logging.getLogger("NMCD.Methods")


class BaseMethod(ABC):
    """
    Abstract base class for all change-point detection methods.

    Each method has a unique name used on the command line (--method,
    --methods), a human-readable description, a list of the keyword
    parameters it understands, and an execute() that runs detection on a
    sequence of values.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """
        The name of the method. Must be unique across all methods.

        Returns:
            A unique kebab-case identifier such as "nmcd" or "pl-mean"
        """
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """
        A one-line description of what the method does.

        Returns:
            A string describing the method
        """
        pass

    @property
    def parameters(self) -> List[Dict[str, Any]]:
        """
        Keyword parameters execute() accepts.

        Returns:
            A list of parameter dictionaries with these keys:
            - name: The parameter name
            - type: The parameter type (integer, number, boolean)
            - description: A description of the parameter
            - default: The default value
        """
        return []

    @property
    def examples(self) -> List[str]:
        """
        Example command lines using the method.

        Returns:
            A list of example command strings
        """
        return []

    def accepts(self, option: str) -> bool:
        """Whether execute() understands the given keyword parameter."""
        return any(p["name"] == option for p in self.parameters)

    @abstractmethod
    def execute(self, values: Sequence[float], **kwargs) -> DetectionResult:
        """
        Run detection.

        Unknown keyword parameters are ignored so one option set can be
        passed to every method in a benchmark.

        Args:
            values: The observations
            **kwargs: Method parameters as key-value pairs

        Returns:
            The DetectionResult
        """
        pass

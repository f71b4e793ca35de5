"""
Method Loader for nmcd

This module handles initializing and registering all available methods.
"""

import logging
from typing import List

from .registry import registry
from .nmcd_method import NmcdMethod, NmcdUniformMethod
from .least_squares import PlMeanMethod, PlMeanVarMethod

logger = logging.getLogger("NMCD.Methods.Loader")


def load_methods() -> List[str]:
    """
    Initialize and register all available methods.

    Returns:
        A list of registered method names
    """
    registry.clear()

    registry.register_method(NmcdMethod())
    registry.register_method(NmcdUniformMethod())
    registry.register_method(PlMeanMethod())
    registry.register_method(PlMeanVarMethod())

    method_names = registry.names()
    logger.debug(f"Loaded {len(method_names)} methods: {', '.join(method_names)}")

    return method_names

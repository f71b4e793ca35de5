"""
Method Registry for nmcd

This module manages the registration and retrieval of detection methods.
It maintains a central registry of all available methods.
"""

import logging
from typing import Dict, List, Optional

from .base_method import BaseMethod

logger = logging.getLogger("NMCD.Methods.Registry")


class MethodRegistry:
    """
    Registry for detection methods.

    Method names are unique; the CLI and the benchmark look methods up by
    name and can enumerate them for help texts and argument choices.
    """

    def __init__(self):
        """Initialize an empty method registry."""
        self._methods: Dict[str, BaseMethod] = {}
        logger.debug("Method Registry initialized")

    def register_method(self, method: BaseMethod) -> None:
        """
        Register a method with the registry.

        Args:
            method: An instance of BaseMethod to register. Must have a unique name.

        Raises:
            ValueError: If a method with the same name is already registered
        """
        if method.name in self._methods:
            raise ValueError(f"A method with the name '{method.name}' is already registered")

        self._methods[method.name] = method
        logger.debug(f"Registered method: {method.name}")

    def get_method(self, name: str) -> Optional[BaseMethod]:
        """
        Get a method by name.

        Args:
            name: The name of the method to retrieve

        Returns:
            The method instance if found, or None if no method with the given name exists
        """
        return self._methods.get(name)

    def list_methods(self) -> List[BaseMethod]:
        """All registered method instances, in registration order."""
        return list(self._methods.values())

    def names(self) -> List[str]:
        return [method.name for method in self._methods.values()]

    def get_method_descriptions(self) -> Dict[str, str]:
        """
        Get a dictionary of method names and descriptions.

        Returns:
            A dictionary mapping method names to descriptions
        """
        return {method.name: method.description for method in self._methods.values()}

    def clear(self) -> None:
        """Remove all methods from the registry."""
        self._methods.clear()
        logger.debug("Method Registry cleared")


# Create a singleton instance
registry = MethodRegistry()

"""
Methods package for nmcd

This package contains the detection methods selectable from the CLI.
"""

from .base_method import BaseMethod
from .registry import registry, MethodRegistry
from .loader import load_methods

__all__ = ['BaseMethod', 'registry', 'MethodRegistry', 'load_methods']

"""
CLI package for nmcd

This package contains the argparse front end: parser construction,
subcommands and the input/output formats they share.
"""

from .app import build_parser, main

__all__ = ['build_parser', 'main']

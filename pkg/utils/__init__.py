"""
Utilities package for nmcd

Logging setup and runtime settings shared by the command line entry point.
"""

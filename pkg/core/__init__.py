"""
Core package for nmcd

This package contains the detection algorithms: ranks and weights, segment
costs, dynamic programming, screening, BIC selection, the least-squares
baselines, quality metrics and the simulation models.
"""

"""Shared library for the low-rank sum-of-squares toolkit.

This package contains the variety models, configuration and error types
used across the algebra, solver, stationarity, gallery, path and harness
modules.
"""

__version__ = "0.1.0"

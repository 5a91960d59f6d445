"""CLI tools for the low-rank sum-of-squares toolkit.

This package contains the operator-facing command-line interface for running
experiments, checking certificates and following restricted paths.
"""

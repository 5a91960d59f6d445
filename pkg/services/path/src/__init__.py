"""Restricted-path algorithm and the sum-of-squares feasibility wrapper."""

from services.path.src.path import PathConfig, PathResult, restricted_path, sos_feasibility_via_path

__all__ = ["PathConfig", "PathResult", "restricted_path", "sos_feasibility_via_path"]

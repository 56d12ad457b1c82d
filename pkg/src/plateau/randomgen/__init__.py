from .distributions import DistKind, DistSpec, parse_dist_spec
from .streams import SeededStream, sample, stable_increments_cms, stable_jump_ppm

__all__ = [
    "DistKind",
    "DistSpec",
    "SeededStream",
    "parse_dist_spec",
    "sample",
    "stable_increments_cms",
    "stable_jump_ppm",
]

"""Exact and numeric tools for the Gelfand-Tsetlin graph, zw-measures and their dynamics."""

from .gtcore import Signature, count_paths, parse_signature, weyl_dimension
from .links import link_multi, link_one_step
from .zw import ZwParams

__all__ = [
    "Signature",
    "ZwParams",
    "count_paths",
    "link_multi",
    "link_one_step",
    "parse_signature",
    "weyl_dimension",
]
__version__ = "0.1.0"

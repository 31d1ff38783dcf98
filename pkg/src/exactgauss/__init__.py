"""Exact, floating-point-free samplers for the normal and discrete Gaussian laws."""

from .discrete import SigmaParam, sample_dplus_improved, sample_dplus_karney
from .normal import sample_normal_improved, sample_normal_karney
from .randcore import RandomSource, finalize

__all__ = [
    "RandomSource",
    "SigmaParam",
    "finalize",
    "sample_dplus_improved",
    "sample_dplus_karney",
    "sample_normal_improved",
    "sample_normal_karney",
]

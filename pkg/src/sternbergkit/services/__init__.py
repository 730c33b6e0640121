"""Service modules for SternbergKit"""

from .linearize import LinearizeService
from .series import SeriesService
from .weights import WeightService

__all__ = [
    "WeightService",
    "SeriesService",
    "LinearizeService",
]

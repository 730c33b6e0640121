"""Small assertion helpers shared by the test modules"""

from fractions import Fraction
from typing import Any

from sternbergkit.arith import imag_part, real_part


def real_value(z: Any) -> Fraction:
    """Real part of an exact coefficient that must be real"""
    assert imag_part(z) == 0
    return real_part(z)

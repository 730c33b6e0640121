"""Diagonal linear part Lambda = diag(lambda_1, ..., lambda_s)"""

from dataclasses import dataclass, field
from typing import Any, Dict, Sequence, Tuple

from .arith import (
    Real,
    Scalar,
    is_gaussian,
    is_zero,
    magnitude2,
    parse_complex,
    real_div,
    real_mul,
    real_lt,
    to_mpc,
)
from .exceptions import ValidationError
from .multiindex import MultiIndex, indices_up_to


@dataclass(frozen=True)
class LinearPart:
    """Eigenvalues of a semi-simple linear part, exact or mpmath complex"""

    eigenvalues: Tuple[Scalar, ...]
    eta_squared: Real = field(init=False, compare=False)

    def __post_init__(self) -> None:
        values = tuple(self.eigenvalues)
        if not values:
            raise ValidationError("at least one eigenvalue is required")
        if not all(is_gaussian(v) for v in values):
            values = tuple(to_mpc(v) for v in values)
        for i, v in enumerate(values, start=1):
            if is_zero(v):
                raise ValidationError(f"eigenvalue lambda_{i} is zero", errors={"i": i})
        object.__setattr__(self, "eigenvalues", values)

        # eta = 4 max |lambda_i / lambda_j|, kept squared so it stays exact
        mags = [magnitude2(v) for v in values]
        largest, smallest = mags[0], mags[0]
        for m in mags[1:]:
            if real_lt(largest, m):
                largest = m
            if real_lt(m, smallest):
                smallest = m
        object.__setattr__(self, "eta_squared", real_mul(16, real_div(largest, smallest)))

    @classmethod
    def from_values(cls, values: Sequence[Any], exact: bool = True) -> "LinearPart":
        """Parse eigenvalues given as numbers, "p/q" strings or [re, im] pairs"""
        return cls(tuple(parse_complex(v, exact) for v in values))

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    @property
    def exact(self) -> bool:
        return is_gaussian(self.eigenvalues[0])

    def powers(self, max_degree: int) -> Dict[MultiIndex, Scalar]:
        """lambda^k for 1 <= |k| <= max_degree, one multiplication per index"""
        table: Dict[MultiIndex, Scalar] = {}
        for k in indices_up_to(self.dim, max_degree):
            if k.degree == 1:
                table[k] = self.eigenvalues[k.exponents.index(1)]
                continue
            j = next(i for i, e in enumerate(k.exponents) if e)
            table[k] = table[k - MultiIndex.unit(self.dim, j)] * self.eigenvalues[j]
        return table

"""Multi-indices k in {0,1,...}^s with graded-lexicographic order"""

from dataclasses import dataclass, field
from functools import lru_cache, total_ordering
from math import factorial
from typing import Iterator, List, Sequence, Tuple


@total_ordering
@dataclass(frozen=True)
class MultiIndex:
    """Exponent tuple with cached degree |k|"""

    exponents: Tuple[int, ...]
    degree: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if any(e < 0 for e in self.exponents):
            raise ValueError(f"negative exponent in {self.exponents}")
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        object.__setattr__(self, "degree", sum(self.exponents))

    @classmethod
    def of(cls, *exponents: int) -> "MultiIndex":
        return cls(tuple(exponents))

    @classmethod
    def zero(cls, dim: int) -> "MultiIndex":
        return cls((0,) * dim)

    @classmethod
    def unit(cls, dim: int, i: int) -> "MultiIndex":
        """e_i, 0-based coordinate"""
        return cls(tuple(1 if j == i else 0 for j in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.exponents)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.degree, self.exponents)

    def __lt__(self, other: "MultiIndex") -> bool:
        if not isinstance(other, MultiIndex):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def __getitem__(self, i: int) -> int:
        return self.exponents[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.exponents)

    def __repr__(self) -> str:
        return f"MultiIndex{self.exponents}"

    def is_below(self, other: "MultiIndex") -> bool:
        """Componentwise self <= other"""
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def multinomial(self) -> int:
        """|k|! / (k_1! ... k_s!)"""
        result = factorial(self.degree)
        for e in self.exponents:
            result //= factorial(e)
        return result

    def to_list(self) -> List[int]:
        return list(self.exponents)


@lru_cache(maxsize=None)
def _indices_of_degree(dim: int, degree: int) -> Tuple[MultiIndex, ...]:
    def build(remaining_dim: int, remaining: int) -> List[Tuple[int, ...]]:
        if remaining_dim == 1:
            return [(remaining,)]
        out = []
        for first in range(remaining + 1):
            for rest in build(remaining_dim - 1, remaining - first):
                out.append((first, *rest))
        return out

    return tuple(sorted(MultiIndex(e) for e in build(dim, degree)))


def indices_of_degree(dim: int, degree: int) -> Tuple[MultiIndex, ...]:
    """All k with |k| = degree, in graded-lex order"""
    return _indices_of_degree(dim, degree)


def indices_up_to(dim: int, order: int, start: int = 1) -> List[MultiIndex]:
    """All k with start <= |k| <= order, in graded-lex order"""
    out: List[MultiIndex] = []
    for degree in range(start, order + 1):
        out.extend(_indices_of_degree(dim, degree))
    return out


def count_up_to(dim: int, order: int) -> int:
    """Number of k with |k| <= order"""
    return factorial(order + dim) // (factorial(order) * factorial(dim))


def sub_indices(k: MultiIndex) -> List[MultiIndex]:
    """All nonzero j <= k componentwise, in graded-lex order"""
    ranges: List[List[int]] = [list(range(e + 1)) for e in k.exponents]
    out: List[Tuple[int, ...]] = [()]
    for r in ranges:
        out = [prefix + (v,) for prefix in out for v in r]
    return sorted(MultiIndex(e) for e in out if any(e))


def as_multiindex(value: Sequence[int]) -> MultiIndex:
    if isinstance(value, MultiIndex):
        return value
    return MultiIndex(tuple(value))

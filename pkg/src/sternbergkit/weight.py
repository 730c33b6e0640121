"""Weight sequences m = (m_1, ..., m_N) and their closed-form generators"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Any, Optional, Sequence, Tuple

import mpmath

from .arith import (
    Real,
    is_rational,
    real_div,
    real_log,
    real_mul,
    to_fraction,
    to_mpf,
    uniform_reals,
)
from .exceptions import HorizonError, ValidationError
from .types import GeneratorKind, GeneratorSpec


@dataclass(frozen=True)
class Weight:
    """Positive sequence m_1..m_N, 1-indexed through ``m(n)``"""

    values: Tuple[Real, ...]
    generator: Optional[GeneratorSpec] = None

    def __post_init__(self) -> None:
        values = uniform_reals(self.values)
        if len(values) < 2:
            raise HorizonError("a weight needs horizon >= 2", required=2)
        for n, v in enumerate(values, start=1):
            if not v > 0:
                raise ValidationError(f"weight value m_{n} must be positive", errors={"n": n})
        object.__setattr__(self, "values", values)

    # ----- Constructors -----

    @classmethod
    def from_values(
        cls, values: Sequence[Any], generator: Optional[GeneratorSpec] = None
    ) -> "Weight":
        return cls(tuple(values), generator)

    @classmethod
    def constant(cls, horizon: int, c: Any = 1) -> "Weight":
        return cls(
            tuple([c] * horizon),
            GeneratorSpec(kind=GeneratorKind.CONSTANT, params={"c": str(c)}),
        )

    @classmethod
    def gevrey(cls, s: Any, horizon: int) -> "Weight":
        """m_n = n!^(s-1); exact when s is an integer"""
        s_value = to_fraction(s) if is_rational(s) or isinstance(s, str) else s
        spec = GeneratorSpec(kind=GeneratorKind.GEVREY, params={"s": str(s_value)})
        if is_rational(s_value) and to_fraction(s_value).denominator == 1:
            power = int(s_value) - 1
            if power >= 0:
                values = tuple(Fraction(factorial(n)) ** power for n in range(1, horizon + 1))
                return cls(values, spec)
            return cls(
                tuple(Fraction(1, factorial(n) ** (-power)) for n in range(1, horizon + 1)), spec
            )
        exponent = to_mpf(s_value) - 1
        return cls(
            tuple(mpmath.factorial(n) ** exponent for n in range(1, horizon + 1)), spec
        )

    @classmethod
    def gevrey_factor(cls, delta: Any, horizon: int) -> "Weight":
        """w_n = n!^delta, the Gevrey loss factor"""
        d = to_fraction(delta) if is_rational(delta) or isinstance(delta, str) else delta
        s = d + 1 if is_rational(d) else to_mpf(d) + 1
        return cls.gevrey(s, horizon)

    @classmethod
    def logpow(cls, horizon: int, scale: Any = None) -> "Weight":
        """m_n = log(1+n)^(-n), or log(2) (scale log(1+n))^(-n) when scaled.

        The scaled form is equivalent to m / m_1 up to the geometric factor
        scale^(-n), and has m_1 = 1 / scale.
        """
        if scale is None:
            return cls(
                tuple(mpmath.log(n + 1) ** (-n) for n in range(1, horizon + 1)),
                GeneratorSpec(kind=GeneratorKind.LOGPOW, params={}),
            )
        c = to_fraction(scale)
        if c <= 0:
            raise ValidationError(f"logpow scale must be positive, got {scale}")
        factor = to_mpf(c)
        log2 = mpmath.log(2)
        return cls(
            tuple(log2 * (factor * mpmath.log(n + 1)) ** (-n) for n in range(1, horizon + 1)),
            GeneratorSpec(kind=GeneratorKind.LOGPOW, params={"scale": str(c)}),
        )

    # ----- Sequences -----

    @property
    def horizon(self) -> int:
        return len(self.values)

    @property
    def exact(self) -> bool:
        return is_rational(self.values[0])

    def m(self, n: int) -> Real:
        """m_n with the convention m_0 = 1"""
        if n == 0:
            return Fraction(1) if self.exact else mpmath.mpf(1)
        if n < 0 or n > self.horizon:
            raise HorizonError(f"index {n} outside horizon {self.horizon}", required=n)
        return self.values[n - 1]

    def big_m(self, n: int) -> Real:
        """M_n = n! m_n"""
        return real_mul(factorial(n), self.m(n))

    def mu(self, n: int) -> Real:
        """mu_n = M_n / M_(n-1), mu_1 = M_1"""
        return real_div(self.big_m(n), self.big_m(n - 1))

    def alpha(self, n: int) -> Real:
        """alpha_n = m_n / m_(n-1), alpha_1 = m_1"""
        return real_div(self.m(n), self.m(n - 1))

    def root(self, n: int) -> Real:
        """m_n^(1/n)"""
        return mpmath.root(to_mpf(self.m(n)), n)

    def log_m(self, n: int) -> Real:
        return real_log(self.m(n))

    # ----- Derived weights -----

    def truncate(self, horizon: int) -> "Weight":
        if horizon > self.horizon:
            raise HorizonError(
                f"cannot extend horizon {self.horizon} to {horizon} by truncation",
                required=horizon,
            )
        return Weight(self.values[:horizon], self.generator)

    def scaled(self, c: Real) -> "Weight":
        return Weight(tuple(real_mul(c, v) for v in self.values))

    def normalized(self) -> "Weight":
        """m / m_1, the representative with m_1 = 1"""
        first = self.values[0]
        return Weight(tuple(real_div(v, first) for v in self.values))

    def representative(self) -> "Weight":
        """The weight the lambda predicates are evaluated on: m / m_1 when m_1 > 1, else m"""
        return self.normalized() if self.values[0] > 1 else self

    @staticmethod
    def regenerable(spec: Optional[GeneratorSpec]) -> bool:
        """True when the generator determines the values at every horizon"""
        if spec is None:
            return False
        return spec.kind != GeneratorKind.CUSTOM_TABLE or "example" in spec.params

    def with_horizon(self, horizon: int) -> "Weight":
        """Regenerate from the closed form, or truncate"""
        if horizon <= self.horizon:
            return self.truncate(horizon)
        if not Weight.regenerable(self.generator):
            raise HorizonError(
                f"custom table of horizon {self.horizon} cannot be extended to {horizon}",
                required=horizon,
            )
        return Weight.from_generator(self.generator, horizon)

    @classmethod
    def from_generator(cls, spec: GeneratorSpec, horizon: int) -> "Weight":
        params = spec.params
        kind = spec.kind
        if kind == GeneratorKind.CONSTANT:
            return Weight.constant(horizon, to_fraction(params.get("c", "1")))
        if kind == GeneratorKind.GEVREY:
            return Weight.gevrey(params["s"], horizon)
        if kind == GeneratorKind.LOGPOW:
            return Weight.logpow(horizon, params.get("scale"))
        from .fixtures import example_weight

        return example_weight(params["example"], horizon, params)

    def is_constant_one(self) -> bool:
        return all(v == 1 for v in self.values)

    def __len__(self) -> int:
        return self.horizon

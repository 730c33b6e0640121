"""Main entry point for SternbergKit"""

import logging
from contextlib import contextmanager
from fractions import Fraction
from typing import Any, Iterator, Sequence, Tuple

from .arith import parse_real, working_context
from .exceptions import ValidationError
from .services.linearize import LinearizeService
from .services.series import SeriesService
from .services.weights import WeightService
from .truncated import term_limit

DEFAULT_PRECISION = 128  # bits
DEFAULT_TOLERANCE = "1e-30"
DEFAULT_LAMBDA_GRID = (1, 2, 4, 8, 16)
DEFAULT_TREND_TOLERANCE = "0.1"
DEFAULT_ESCALATION_BUDGET = 3
DEFAULT_ESCALATION_DELTA = "1/2"
DEFAULT_MAX_TERMS = 10 ** 6

logger = logging.getLogger("sternbergkit")


class SternbergKit:
    """Weights, truncated series and linearization behind one configuration"""

    def __init__(
        self,
        precision: int = DEFAULT_PRECISION,
        tolerance: str = DEFAULT_TOLERANCE,
        lambda_grid: Sequence[Any] = DEFAULT_LAMBDA_GRID,
        trend_tolerance: str = DEFAULT_TREND_TOLERANCE,
        escalation_budget: int = DEFAULT_ESCALATION_BUDGET,
        escalation_delta: str = DEFAULT_ESCALATION_DELTA,
        max_terms: int = DEFAULT_MAX_TERMS,
        debug: bool = False,
    ):
        if precision < DEFAULT_PRECISION:
            raise ValidationError(
                f"precision must be at least {DEFAULT_PRECISION} bits, got {precision}"
            )
        if escalation_budget < 0:
            raise ValidationError("escalation_budget must be nonnegative")
        try:
            tolerance_value = parse_real(tolerance, exact=True)
        except (TypeError, ValueError) as e:
            raise ValidationError(f"invalid tolerance {tolerance!r}") from e
        if tolerance_value <= 0:
            raise ValidationError("tolerance must be positive")
        if max_terms < 1:
            raise ValidationError("max_terms must be positive")
        self.precision = precision
        self.tolerance = tolerance
        self.lambda_grid: Tuple[Fraction, ...] = tuple(
            parse_real(v, exact=True) for v in lambda_grid
        )
        if any(v <= 0 for v in self.lambda_grid):
            raise ValidationError("lambda grid values must be positive")
        self.trend_tolerance: Fraction = parse_real(trend_tolerance, exact=True)
        self.escalation_budget = escalation_budget
        self.escalation_delta: Fraction = parse_real(escalation_delta, exact=True)
        self.max_terms = max_terms
        self.debug = debug

        if debug:
            logger.setLevel(logging.DEBUG)
            if not logger.handlers:
                handler = logging.StreamHandler()
                handler.setFormatter(logging.Formatter("[SternbergKit] %(name)s: %(message)s"))
                logger.addHandler(handler)

        # Initialize services
        self.weights = WeightService(self)
        self.series = SeriesService(self)
        self.linearize = LinearizeService(self)

    @contextmanager
    def scope(self) -> Iterator["SternbergKit"]:
        """Apply this kit's precision, tolerance and term cap for the duration of a block"""
        with working_context(self.precision, self.tolerance), term_limit(self.max_terms):
            yield self

    def __repr__(self) -> str:
        return f"SternbergKit(precision={self.precision}, tolerance={self.tolerance!r})"

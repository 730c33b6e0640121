"""Sparse multivariate truncated power series with vector coefficients.

Coefficients are either complex (Gaussian rationals or ``mpc``) for maps, or
nonnegative reals (Fractions or ``mpf``) for majorant series. Composition only
uses ring operations, so both kinds go through the same code.
"""

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from mpmath import mpf

from .arith import (
    Real,
    Scalar,
    complex_from_real,
    complex_pow,
    complex_scale,
    complex_zero,
    is_gaussian,
    is_rational,
    is_zero,
    magnitude,
    magnitude2,
    parse_complex,
    real_add,
    real_div,
    real_le,
    real_mul,
    real_pow,
    to_mpc,
    to_mpf,
    tolerance,
)
from .exceptions import ValidationError
from .multiindex import MultiIndex, as_multiindex, count_up_to

Vector = Tuple[Scalar, ...]
ScalarSeries = Dict[MultiIndex, Scalar]

DEFAULT_MAX_TERMS = 10 ** 6

_max_terms: ContextVar[int] = ContextVar("max_terms", default=DEFAULT_MAX_TERMS)


@contextmanager
def term_limit(limit: int) -> Iterator[None]:
    """Cap on the number of stored coefficients a truncation may need, for one block"""
    token = _max_terms.set(limit)
    try:
        yield
    finally:
        _max_terms.reset(token)


@dataclass(frozen=True)
class TruncatedSeries:
    """Map from MultiIndex (|k| <= order) to coefficient vectors"""

    dim_in: int
    dim_out: int
    order: int
    coeffs: Mapping[MultiIndex, Vector] = field(default_factory=dict)
    has_constant: bool = False
    exact: bool = True
    real: bool = False

    def __post_init__(self) -> None:
        if self.dim_in < 1 or self.dim_out < 1:
            raise ValidationError("series dimensions must be positive")
        if self.order < 1:
            raise ValidationError("series order must be at least 1")
        limit = _max_terms.get()
        if count_up_to(self.dim_in, self.order) * self.dim_out > limit:
            raise ValidationError(
                f"truncation with dim {self.dim_in} and order {self.order}"
                f" exceeds {limit} terms"
            )
        cleaned: Dict[MultiIndex, Vector] = {}
        for key, vec in self.coeffs.items():
            k = as_multiindex(key)
            vec = tuple(vec)
            if k.dim != self.dim_in:
                raise ValidationError(
                    f"index {k.exponents} has dimension {k.dim}, expected {self.dim_in}"
                )
            if len(vec) != self.dim_out:
                raise ValidationError(
                    f"coefficient at {k.exponents} needs {self.dim_out} components"
                )
            if k.degree > self.order:
                continue
            if k.degree == 0 and not self.has_constant:
                raise ValidationError("constant term present but has_constant is not set")
            if all(is_zero(c) for c in vec):
                continue
            cleaned[k] = vec
        object.__setattr__(self, "coeffs", dict(sorted(cleaned.items())))

    # ----- Constructors -----

    @classmethod
    def from_terms(
        cls,
        dim_in: int,
        dim_out: int,
        order: int,
        terms: Mapping[Sequence[int], Sequence[Any]],
        exact: bool = True,
        has_constant: bool = False,
    ) -> "TruncatedSeries":
        """Build from plain numbers: ints, Fractions, "p/q" strings or [re, im] pairs"""
        coeffs = {
            as_multiindex(k): tuple(parse_complex(c, exact) for c in vec)
            for k, vec in terms.items()
        }
        return cls(dim_in, dim_out, order, coeffs, has_constant=has_constant, exact=exact)

    @classmethod
    def scalar(
        cls, order: int, terms: Mapping[int, Any], exact: bool = True
    ) -> "TruncatedSeries":
        """One-dimensional series from {degree: coefficient}"""
        return cls.from_terms(
            1, 1, order, {(n,): [c] for n, c in terms.items()}, exact=exact,
            has_constant=0 in terms,
        )

    @classmethod
    def identity(cls, dim: int, order: int, exact: bool = True) -> "TruncatedSeries":
        one = complex_from_real(1, exact)
        zero = complex_zero(exact)
        coeffs = {
            MultiIndex.unit(dim, i): tuple(one if j == i else zero for j in range(dim))
            for i in range(dim)
        }
        return cls(dim, dim, order, coeffs, exact=exact)

    @classmethod
    def diagonal(cls, eigenvalues: Sequence[Scalar], order: int) -> "TruncatedSeries":
        """The linear map diag(eigenvalues)"""
        dim = len(eigenvalues)
        exact = all(is_gaussian(v) for v in eigenvalues)
        zero = complex_zero(exact)
        coeffs = {
            MultiIndex.unit(dim, i): tuple(eigenvalues[i] if j == i else zero for j in range(dim))
            for i in range(dim)
        }
        return cls(dim, dim, order, coeffs, exact=exact)

    @classmethod
    def zero(cls, dim_in: int, dim_out: int, order: int, exact: bool = True) -> "TruncatedSeries":
        return cls(dim_in, dim_out, order, {}, exact=exact)

    # ----- Access -----

    def _zero(self) -> Scalar:
        if self.real:
            return Fraction(0) if self.exact else mpf(0)
        return complex_zero(self.exact)

    def coefficient(self, k: Sequence[int]) -> Vector:
        k = as_multiindex(k)
        return self.coeffs.get(k, tuple(self._zero() for _ in range(self.dim_out)))

    def items(self) -> Iterable[Tuple[MultiIndex, Vector]]:
        return self.coeffs.items()

    def component(self, j: int) -> ScalarSeries:
        return {k: vec[j] for k, vec in self.coeffs.items() if not is_zero(vec[j])}

    def degree_part(self, degree: int) -> Dict[MultiIndex, Vector]:
        return {k: v for k, v in self.coeffs.items() if k.degree == degree}

    def is_zero(self) -> bool:
        return not self.coeffs

    def without_constant(self) -> "TruncatedSeries":
        kept = {k: v for k, v in self.coeffs.items() if k.degree > 0}
        return self._replace(kept, has_constant=False)

    def constant_term(self) -> Vector:
        return self.coefficient((0,) * self.dim_in)

    def linear_part(self) -> Dict[MultiIndex, Vector]:
        return self.degree_part(1)

    def __len__(self) -> int:
        return len(self.coeffs)

    # ----- Arithmetic -----

    def _replace(self, coeffs: Mapping[MultiIndex, Vector], **changes: Any) -> "TruncatedSeries":
        params = dict(
            dim_in=self.dim_in,
            dim_out=self.dim_out,
            order=self.order,
            has_constant=self.has_constant,
            exact=self.exact,
            real=self.real,
        )
        params.update(changes)
        return TruncatedSeries(coeffs=coeffs, **params)

    def truncate(self, order: int) -> "TruncatedSeries":
        kept = {k: v for k, v in self.coeffs.items() if k.degree <= order}
        return self._replace(kept, order=order)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_same_shape(other)
        out: Dict[MultiIndex, Vector] = dict(self.coeffs)
        for k, vec in other.coeffs.items():
            if k in out:
                out[k] = tuple(a + b for a, b in zip(out[k], vec))
            else:
                out[k] = vec
        return self._replace(
            out,
            order=min(self.order, other.order),
            has_constant=self.has_constant or other.has_constant,
            exact=self.exact and other.exact,
        ).truncate(min(self.order, other.order))

    def __neg__(self) -> "TruncatedSeries":
        return self._replace({k: tuple(-c for c in vec) for k, vec in self.coeffs.items()})

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, factor: Scalar) -> "TruncatedSeries":
        """Multiply every coefficient by a scalar of the same kind"""
        return self._replace({k: tuple(c * factor for c in vec) for k, vec in self.coeffs.items()})

    def scale_real(self, factor: Real) -> "TruncatedSeries":
        if self.real:
            return self._replace(
                {k: tuple(real_mul(c, factor) for c in vec) for k, vec in self.coeffs.items()},
                exact=self.exact and is_rational(factor),
            )
        return self._replace(
            {k: tuple(complex_scale(c, factor) for c in vec) for k, vec in self.coeffs.items()},
            exact=self.exact and is_rational(factor),
        )

    def scale_argument(self, lam: Real) -> "TruncatedSeries":
        """f(lam x): coefficient k times lam^|k|"""
        out = {}
        for k, vec in self.coeffs.items():
            factor = real_pow(lam, k.degree)
            if self.real:
                out[k] = tuple(real_mul(c, factor) for c in vec)
            else:
                out[k] = tuple(complex_scale(c, factor) for c in vec)
        return self._replace(out, exact=self.exact and is_rational(lam))

    def to_inexact(self) -> "TruncatedSeries":
        if not self.exact:
            return self
        if self.real:
            coeffs = {k: tuple(to_mpf(c) for c in vec) for k, vec in self.coeffs.items()}
        else:
            coeffs = {k: tuple(to_mpc(c) for c in vec) for k, vec in self.coeffs.items()}
        return self._replace(coeffs, exact=False)

    def _check_same_shape(self, other: "TruncatedSeries") -> None:
        if (self.dim_in, self.dim_out) != (other.dim_in, other.dim_out):
            raise ValidationError(
                f"shape mismatch: {self.dim_in}->{self.dim_out} vs {other.dim_in}->{other.dim_out}"
            )
        if self.real != other.real:
            raise ValidationError("cannot combine majorant and coefficient series")

    # ----- Comparison -----

    def equals(self, other: "TruncatedSeries") -> bool:
        """Coefficientwise equality, exact or within tolerance"""
        diff = self - other
        if diff.exact:
            return diff.is_zero()
        tol2 = tolerance() * tolerance()
        return all(real_le(magnitude2(c), tol2) for _, vec in diff.items() for c in vec)

    def evaluate_radius(self, r: Real) -> List[Real]:
        """Componentwise sum of |coefficient| r^|k| over the stored terms"""
        totals: List[Real] = [Fraction(0)] * self.dim_out
        for k, vec in self.coeffs.items():
            rk = real_pow(r, k.degree)
            for i, c in enumerate(vec):
                totals[i] = real_add(totals[i], real_mul(magnitude(c), rk))
        return totals


# ----- Composition -----

def _accumulate(out: Dict[MultiIndex, Scalar], k: MultiIndex, term: Scalar) -> None:
    if k in out:
        out[k] = out[k] + term
    else:
        out[k] = term


def series_product(a: ScalarSeries, b: ScalarSeries, order: int) -> ScalarSeries:
    """Truncated product of two scalar series"""
    out: ScalarSeries = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            if ka.degree + kb.degree > order:
                continue
            _accumulate(out, ka + kb, ca * cb)
    return out


class _PowerCache:
    """h_j^p truncated to the order, built on demand"""

    def __init__(self, components: List[ScalarSeries], order: int):
        self.order = order
        self.table: List[List[ScalarSeries]] = [[{}, comp] for comp in components]

    def power(self, j: int, p: int) -> ScalarSeries:
        row = self.table[j]
        while len(row) <= p:
            row.append(series_product(row[-1], row[1], self.order))
        return row[p]


def compose(g: TruncatedSeries, h: TruncatedSeries, order: Optional[int] = None) -> TruncatedSeries:
    """g o h truncated at the order; h must not have a constant term.

    The coefficient of x^k collects g_l times the products of h-components over
    ordered tuples k_1 + ... + k_r = k with r = |l|, which is what expanding
    prod_j (h_j)^(l_j) factor by factor produces.
    """
    if h.has_constant and any(k.degree == 0 for k in h.coeffs):
        raise ValidationError("inner series has a constant term")
    if h.dim_out != g.dim_in:
        raise ValidationError(f"cannot compose: g takes {g.dim_in} inputs, h gives {h.dim_out}")
    if g.real != h.real:
        raise ValidationError("cannot compose majorant and coefficient series")
    n = order if order is not None else min(g.order, h.order)
    cache = _PowerCache([h.component(j) for j in range(h.dim_out)], n)
    out: Dict[MultiIndex, List[Scalar]] = {}
    has_constant = False
    for l, vec in g.items():
        if l.degree > n:
            continue
        if l.degree == 0:
            has_constant = True
            out[MultiIndex.zero(h.dim_in)] = list(vec)
            continue
        product: Optional[ScalarSeries] = None
        for j, p in enumerate(l.exponents):
            if p == 0:
                continue
            factor = cache.power(j, p)
            product = dict(factor) if product is None else series_product(product, factor, n)
            if not product:
                break
        if not product:
            continue
        for k, c in product.items():
            row = out.get(k)
            if row is None:
                out[k] = [gi * c for gi in vec]
            else:
                for i, gi in enumerate(vec):
                    row[i] = row[i] + gi * c
    return TruncatedSeries(
        h.dim_in,
        g.dim_out,
        n,
        {k: tuple(v) for k, v in out.items()},
        has_constant=has_constant,
        exact=g.exact and h.exact,
        real=g.real,
    )


# ----- Majorants -----

def weighted_majorant(
    f: TruncatedSeries, weight: Any, keep_constant: bool = False
) -> TruncatedSeries:
    """|f_k| / m_|k| entrywise; the constant term is dropped unless kept (m_0 = 1)"""
    out: Dict[MultiIndex, Vector] = {}
    for k, vec in f.items():
        if k.degree == 0 and not keep_constant:
            continue
        mk = weight.m(k.degree)
        out[k] = tuple(real_div(magnitude(c), mk) for c in vec)
    values = [c for vec in out.values() for c in vec]
    exact = all(is_rational(c) for c in values) and (weight.exact or not values)
    if not exact:
        out = {k: tuple(to_mpf(c) for c in vec) for k, vec in out.items()}
    return TruncatedSeries(
        f.dim_in,
        f.dim_out,
        f.order,
        out,
        has_constant=keep_constant and f.has_constant,
        exact=exact,
        real=True,
    )


def monomial_scale(f: TruncatedSeries, eigenvalues: Sequence[Scalar]) -> TruncatedSeries:
    """f(Lambda x) for diagonal Lambda: coefficient k times lambda^k"""
    out = {}
    for k, vec in f.items():
        factor = None
        for lam, p in zip(eigenvalues, k.exponents):
            if p:
                term = complex_pow(lam, p)
                factor = term if factor is None else factor * term
        out[k] = vec if factor is None else tuple(c * factor for c in vec)
    return f._replace(out)

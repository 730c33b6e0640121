"""Scalar helpers shared by the weight, series and linearization code.

Two arithmetic modes are supported throughout the package:

* exact: real scalars are ``fractions.Fraction`` and complex scalars are
  Gaussian rationals from sympy's ``QQ_I`` domain;
* inexact: real scalars are ``mpmath.mpf`` and complex scalars ``mpmath.mpc``,
  at a working precision of at least 128 bits.

Inequalities that involve an inexact operand are decided with the absolute
tolerance (scaled by the operand magnitude once it exceeds one).

Precision and tolerance are scoped: ``working_context`` applies them for the
duration of a block and restores the previous values on exit. Outside any
block the package defaults below are in effect.
"""

import math
from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction
from typing import Any, Iterable, Iterator, List, Sequence, Tuple, Union

import mpmath
from mpmath import mp, mpc, mpf
from sympy.polys.domains import QQ, QQ_I

DEFAULT_PRECISION = 128
DEFAULT_TOLERANCE = "1e-30"

Real = Union[Fraction, mpf]
Scalar = Any

GaussianRational = QQ_I.dtype

# package default for values built outside a kit
mp.prec = DEFAULT_PRECISION

_tolerance: ContextVar[mpf] = ContextVar("tolerance", default=mpf(DEFAULT_TOLERANCE))


@contextmanager
def working_context(bits: int, tol: Union[str, Fraction, mpf]) -> Iterator[None]:
    """Run a block at ``bits`` of mpmath precision with comparison tolerance ``tol``"""
    with mpmath.workprec(bits):
        value = to_mpf(parse_real(tol, exact=True) if isinstance(tol, str) else tol)
        token = _tolerance.set(value)
        try:
            yield
        finally:
            _tolerance.reset(token)


def tolerance() -> mpf:
    return _tolerance.get()


# ----- Real scalars -----

def is_rational(x: Any) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def to_fraction(x: Any) -> Fraction:
    """Convert an int, Fraction, str or QQ element to a Fraction"""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def to_mpf(x: Any) -> mpf:
    if isinstance(x, mpf):
        return x
    if is_rational(x):
        f = to_fraction(x)
        return mpf(f.numerator) / f.denominator
    if isinstance(x, str):
        return to_mpf(parse_real(x, exact=False))
    return mpf(x)


def uniform_reals(values: Iterable[Any]) -> Tuple[Real, ...]:
    """Return all values as Fractions, or all as mpf when any is inexact"""
    items = list(values)
    if all(is_rational(v) for v in items):
        return tuple(to_fraction(v) for v in items)
    return tuple(to_mpf(v) for v in items)


def real_le(a: Real, b: Real) -> bool:
    """a <= b, exactly for rationals and within tolerance otherwise"""
    if is_rational(a) and is_rational(b):
        return a <= b
    a, b = to_mpf(a), to_mpf(b)
    return a <= b + _tolerance.get() * max(mpf(1), abs(a), abs(b))


def real_lt(a: Real, b: Real) -> bool:
    """a < b with the same convention as real_le"""
    return not real_le(b, a)


def real_max(values: Iterable[Real]) -> Real:
    items = list(values)
    best = items[0]
    for v in items[1:]:
        if real_lt(best, v):
            best = v
    return best


def real_add(a: Real, b: Real) -> Real:
    if is_rational(a) and is_rational(b):
        return to_fraction(a) + to_fraction(b)
    return to_mpf(a) + to_mpf(b)


def real_sub(a: Real, b: Real) -> Real:
    if is_rational(a) and is_rational(b):
        return to_fraction(a) - to_fraction(b)
    return to_mpf(a) - to_mpf(b)


def real_mul(a: Real, b: Real) -> Real:
    if is_rational(a) and is_rational(b):
        return to_fraction(a) * to_fraction(b)
    return to_mpf(a) * to_mpf(b)


def real_div(a: Real, b: Real) -> Real:
    if is_rational(a) and is_rational(b):
        return to_fraction(a) / to_fraction(b)
    return to_mpf(a) / to_mpf(b)


def real_pow(a: Real, n: int) -> Real:
    if is_rational(a):
        return to_fraction(a) ** n
    return to_mpf(a) ** n


def real_log(x: Real) -> mpf:
    return mpmath.log(to_mpf(x))


def real_root(x: Real, n: int) -> mpf:
    return mpmath.root(to_mpf(x), n)


def real_sqrt(x: Real) -> Real:
    """Square root, exact when x is the square of a rational"""
    if is_rational(x):
        f = to_fraction(x)
        num, den = math.isqrt(f.numerator), math.isqrt(f.denominator)
        if num * num == f.numerator and den * den == f.denominator:
            return Fraction(int(num), int(den))
    return mpmath.sqrt(to_mpf(x))


def upper_fraction(x: Real, bits: int = 64) -> Fraction:
    """A rational number >= x with dyadic denominator 2**bits"""
    if is_rational(x):
        return to_fraction(x)
    scale = 2 ** bits
    return Fraction(int(mpmath.ceil(to_mpf(x) * scale)) + 1, scale)


# ----- Complex scalars -----

def gaussian(re: Any, im: Any = 0) -> GaussianRational:
    """Build an exact Gaussian rational from two rationals"""
    a, b = to_fraction(re), to_fraction(im)
    return QQ_I(QQ(a.numerator, a.denominator), QQ(b.numerator, b.denominator))


def is_gaussian(z: Any) -> bool:
    return isinstance(z, GaussianRational)


def complex_one(exact: bool) -> Scalar:
    return gaussian(1) if exact else mpc(1)


def complex_zero(exact: bool) -> Scalar:
    return gaussian(0) if exact else mpc(0)


def real_part(z: Scalar) -> Real:
    if is_gaussian(z):
        return to_fraction(z.x)
    if isinstance(z, mpc):
        return z.real
    return z


def imag_part(z: Scalar) -> Real:
    if is_gaussian(z):
        return to_fraction(z.y)
    if isinstance(z, mpc):
        return z.imag
    return Fraction(0) if is_rational(z) else mpf(0)


def to_mpc(z: Scalar) -> mpc:
    if isinstance(z, mpc):
        return z
    return mpc(to_mpf(real_part(z)), to_mpf(imag_part(z)))


def is_zero(c: Scalar) -> bool:
    """Exact zero test for any scalar kind"""
    if is_gaussian(c):
        return not c.x and not c.y
    return c == 0


def magnitude2(c: Scalar) -> Real:
    """Squared modulus; exact for Gaussian rationals and Fractions"""
    if is_gaussian(c):
        return to_fraction(c.x * c.x + c.y * c.y)
    if isinstance(c, mpc):
        return c.real * c.real + c.imag * c.imag
    if is_rational(c):
        return to_fraction(c) * to_fraction(c)
    return to_mpf(c) * to_mpf(c)


def magnitude(c: Scalar) -> Real:
    """Modulus; exact whenever the squared modulus is a rational square"""
    if is_gaussian(c) and not c.y:
        return abs(to_fraction(c.x))
    if is_rational(c):
        return abs(to_fraction(c))
    return real_sqrt(magnitude2(c))


def complex_div(a: Scalar, b: Scalar) -> Scalar:
    if is_gaussian(a) and is_gaussian(b):
        norm = b.x * b.x + b.y * b.y
        conj = QQ_I(b.x / norm, -b.y / norm)
        return a * conj
    return to_mpc(a) / to_mpc(b)


def complex_pow(z: Scalar, n: int) -> Scalar:
    result = complex_one(is_gaussian(z))
    base = z
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return result


def complex_scale(z: Scalar, factor: Real) -> Scalar:
    """Multiply a complex scalar by a real one, keeping exactness"""
    if is_gaussian(z) and is_rational(factor):
        return z * gaussian(factor)
    return to_mpc(z) * to_mpf(factor)


def complex_from_real(x: Real, exact: bool) -> Scalar:
    return gaussian(x) if exact else mpc(to_mpf(x))


def monomial_value(values: Sequence[Scalar], exponents: Sequence[int]) -> Scalar:
    """prod values[i] ** exponents[i] for complex scalars"""
    result = complex_one(all(is_gaussian(v) for v in values))
    for value, power in zip(values, exponents):
        if power:
            result = result * complex_pow(value, power)
    return result


# ----- Parsing and formatting -----

def parse_real(token: Any, exact: bool) -> Real:
    """Parse an int, float, "p/q" or decimal string"""
    if isinstance(token, bool):
        raise TypeError("booleans are not numbers")
    if exact:
        if isinstance(token, float):
            return Fraction(str(token))
        return to_fraction(token)
    if isinstance(token, str) and "/" in token:
        num, den = token.split("/", 1)
        return mpf(num.strip()) / mpf(den.strip())
    if is_rational(token):
        return to_mpf(token)
    return mpf(token)


def parse_complex(pair: Any, exact: bool) -> Scalar:
    """Parse [re, im] or a bare real token"""
    if isinstance(pair, (list, tuple)):
        if len(pair) != 2:
            raise ValueError(f"complex value needs [re, im], got {pair!r}")
        re, im = pair
    else:
        re, im = pair, 0
    if exact:
        return gaussian(parse_real(re, True), parse_real(im, True))
    return mpc(to_mpf(parse_real(re, False)), to_mpf(parse_real(im, False)))


def format_number(x: Any) -> str:
    """Full-precision decimal (or exact p/q) rendering of a real scalar"""
    if is_rational(x):
        f = to_fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return mpmath.nstr(to_mpf(x), mp.dps + 2, min_fixed=-mp.dps, max_fixed=mp.dps)


def format_complex(z: Scalar) -> List[str]:
    return [format_number(real_part(z)), format_number(imag_part(z))]

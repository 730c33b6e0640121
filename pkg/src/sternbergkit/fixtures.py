"""Deterministic fixtures: separating example weights, small-divisor regimes, random maps"""

import logging
import math
import random
from fractions import Fraction
from math import factorial
from typing import Any, Dict, List, Mapping, Optional

import mpmath
from pydantic import BaseModel
from sympy import integer_nthroot

from .arith import format_complex, format_number, gaussian, to_fraction, to_mpf
from .exceptions import HorizonError, ValidationError
from .linear import LinearPart
from .multiindex import indices_up_to
from .services.weights import MaxProducts
from .truncated import TruncatedSeries
from .types import (
    EigenvalueFixture,
    ExampleKind,
    FixtureKind,
    GeneratorKind,
    GeneratorSpec,
    OmegaDocument,
    ResonanceReport,
    SeriesDocument,
    SeriesTerm,
    WeightDocument,
)
from .weight import Weight

logger = logging.getLogger(__name__)

MIN_EXAMPLE_HORIZON: Dict[ExampleKind, int] = {
    ExampleKind.ASM_NOT_FDB: 16,
    ExampleKind.FDB_NOT_LOG: 8,
    ExampleKind.FDB_NOT_ASM: 8,
    ExampleKind.ASM_NOT_DIFF: 8,
}

POINCARE_EIGENVALUES = (Fraction(1, 2), Fraction(1, 3))

# asm-not-fdb: the first block ends at n = 4 and breaks FDB for every lambda <= 16
FIRST_STAGE = 4
FDB_BREAK_LAMBDA = 16
PLATEAU_FACTOR = 64

# binary exponents of the Liouville angle that fit exact arithmetic
LIOUVILLE_TERMS = 3

SMALL_PRIMES = (2, 3, 5, 7, 11, 13)

# shape of the seeded random map in the corpus
RANDOM_DIM = 2
RANDOM_ORDER = 8


# ----- Example weights -----

def _from_quotients(mu: List[int], horizon: int) -> List[Fraction]:
    """m_n = mu_1 ... mu_n / n!"""
    values: List[Fraction] = []
    big = Fraction(1)
    for n in range(1, horizon + 1):
        big *= mu[n]
        values.append(big / factorial(n))
    return values


def _ceil_root(value: Fraction, n: int) -> int:
    """Smallest integer a with a^n >= value"""
    root, exact = integer_nthroot(math.ceil(value), n)
    return int(root) if exact else int(root) + 1


def _plateau(mu: List[int], n: int, top: int) -> None:
    """mu_k = 64 ceil(k/n) M_n^(1/n) for n < k <= top, M_n^(1/n) rounded up"""
    level = _ceil_root(Fraction(math.prod(mu[1:n + 1])), n)
    for k in range(n + 1, top + 1):
        mu.append(PLATEAU_FACTOR * -(-k // n) * level)


def _first_stage(slope: int) -> List[int]:
    n = FIRST_STAGE
    mu = [0, 1] + [slope * k for k in range(2, n + 1)]
    _plateau(mu, n, n * n)
    return mu


def _asm_not_fdb(horizon: int, growth: int) -> List[Fraction]:
    # mu_k = lam k until M_n^(1/n) >= mu_n / 4, then a plateau of 64 ceil(k/n) M_n^(1/n)
    # up to n^2. The first stage ends at n = 4 with a slope steep enough that
    # m_4^5 > 16^16 m_16, so FDB fails at k_1 = ... = k_4 = 4 for every lam <= 16.
    n = FIRST_STAGE
    top = n * n
    slope = 8
    while True:
        mu = _first_stage(slope)
        m = _from_quotients(mu, top)
        if m[n - 1] ** (n + 1) > Fraction(FDB_BREAK_LAMBDA) ** top * m[top - 1]:
            break
        slope *= 2
    while len(mu) <= horizon:
        anchor = top
        m_anchor = _from_quotients(mu, anchor)[-1]
        slope = _ceil_root((8 * growth) ** anchor * m_anchor, anchor)
        big = m_anchor * factorial(anchor)
        k = anchor
        while len(mu) <= horizon:
            k += 1
            mu.append(slope * k)
            big *= slope * k
            if 4 ** k * big >= (slope * k) ** k:
                break
        n, top = k, k * k
        if len(mu) <= horizon:
            _plateau(mu, n, min(top, horizon))
    return _from_quotients(mu, horizon)


def _fdb_not_log(horizon: int) -> List[Fraction]:
    # alpha jumps to H_nu at the start of block (2^nu, 2^(nu+1)] and falls back to H_(nu-1)
    alphas: List[int] = [1]
    high_prev, nu = 1, 0
    while len(alphas) < horizon:
        high = high_prev * 2 ** (4 ** nu)
        block = [high] + [high_prev] * (2 ** nu - 1)
        alphas.extend(block)
        high_prev, nu = high, nu + 1
    values: List[Fraction] = []
    m = Fraction(1)
    for a in alphas[:horizon]:
        m *= a
        values.append(m)
    return values


def _asm_not_diff(horizon: int) -> List[Fraction]:
    return _from_quotients([0] + [n ** n for n in range(1, horizon + 1)], horizon)


def logpow_scale(horizon: int) -> int:
    """Smallest integer c with n_r n_(k_1)...n_(k_r) <= c^r n_k, n = logpow / m_1"""
    base = Weight.logpow(horizon).normalized()
    products = MaxProducts(base)
    worst = mpmath.mpf(1)
    for k in range(2, horizon + 1):
        for r in range(2, k + 1):
            ratio = base.m(r) * products.value(r, k) / base.m(k)
            worst = max(worst, mpmath.root(ratio, r))
    return int(mpmath.ceil(worst))


def example_weight(kind: Any, horizon: int, params: Optional[Mapping[str, str]] = None) -> Weight:
    """One of the four separating weights, materialized to the horizon.

    fdb-not-asm is the logarithmic weight log(1+n)^(-n) passed to the
    equivalent weight log(2) (c log(1+n))^(-n), with c the smallest integer
    that makes it strictly FDB with constant one up to the horizon.
    """
    kind = ExampleKind(kind)
    required = MIN_EXAMPLE_HORIZON[kind]
    if horizon < required:
        raise HorizonError(f"{kind.value} needs horizon >= {required}", required=required)
    growth = int((params or {}).get("growth", "1"))
    if growth < 1:
        raise ValidationError(f"growth must be a positive integer, got {growth}")
    if kind == ExampleKind.FDB_NOT_ASM:
        weight = Weight.logpow(horizon, logpow_scale(horizon))
        logger.debug("example weight %s horizon=%d %s", kind.value, horizon, weight.generator)
        return weight
    if kind == ExampleKind.ASM_NOT_FDB:
        values = _asm_not_fdb(horizon, growth)
    elif kind == ExampleKind.FDB_NOT_LOG:
        values = _fdb_not_log(horizon)
    else:
        values = _asm_not_diff(horizon)
    spec = GeneratorSpec(
        kind=GeneratorKind.CUSTOM_TABLE, params={"example": kind.value, "growth": str(growth)}
    )
    logger.debug("example weight %s horizon=%d", kind.value, horizon)
    return Weight(tuple(values), spec)


# ----- Small-divisor regimes -----

def poincare_linear_part() -> LinearPart:
    """Both eigenvalues inside the unit disc; Omega is bounded"""
    return LinearPart(tuple(gaussian(v) for v in POINCARE_EIGENVALUES))


def liouville_exponents(terms: int = LIOUVILLE_TERMS) -> List[int]:
    """d_1 = 1, d_(j+1) = d_j + d_j^2 2^(d_j)"""
    exponents = [1]
    while len(exponents) < terms:
        d = exponents[-1]
        exponents.append(d + d * d * 2 ** d)
    return exponents


def liouville_linear_part(terms: int = LIOUVILLE_TERMS) -> LinearPart:
    """A rational point on the unit circle at the Liouville angle theta = sum_j 2^(-d_j).

    The dyadic convergents p_j / 2^(d_j) of theta leave |2^(d_j) theta - p_j|
    of order 2^(-d_j^2 2^(d_j)), so lambda^(2^(d_j)) comes that close to 1:
    Omega jumps at every scale 2^(d_j) + 1, by a factor that grows
    super-exponentially in the scale.
    lambda is ((1 - t^2) + 2 i t) / (1 + t^2) for a dyadic rational t next to
    tan(pi theta): modulus one, and not a root of unity.
    """
    exponents = liouville_exponents(terms)
    theta = sum(Fraction(1, 2 ** d) for d in exponents)
    bits = 2 * exponents[-1] + 64
    with mpmath.workprec(bits + 64):
        scaled = mpmath.tan(mpmath.pi * to_mpf(theta)) * mpmath.mpf(2) ** bits
        t = Fraction(int(mpmath.nint(scaled)), 2 ** bits)
    norm = 1 + t * t
    return LinearPart((gaussian((1 - t * t) / norm, 2 * t / norm),))


def _step_table(max_degree: int, level_value: Any) -> Dict[int, Any]:
    """Omega(q)^2 constant on dyadic blocks (2^nu, 2^(nu+1)], made nondecreasing"""
    table: Dict[int, Any] = {}
    current = None
    for q in range(2, max_degree + 1):
        nu = (q - 1).bit_length() - 1
        value = level_value(nu)
        if current is None or value > current:
            current = value
        table[q] = current
    return table


def diophantine_omega(
    max_degree: int, tau: int = 2, gamma: Fraction = Fraction(1, 2)
) -> ResonanceReport:
    """|lambda^k - lambda_i|^(-1) <= |k|^tau / gamma"""
    table = {q: Fraction(q ** (2 * tau)) / (gamma * gamma) for q in range(2, max_degree + 1)}
    return ResonanceReport.from_omega(table, exact=True, source="diophantine")


def bruno_omega(max_degree: int) -> ResonanceReport:
    """Omega(2^(nu+1)) = exp(2^nu / (nu+1)^2): unbounded, Bruno sum finite"""
    table = _step_table(
        max_degree, lambda nu: mpmath.exp(mpmath.mpf(2 ** (nu + 1)) / (nu + 1) ** 2)
    )
    return ResonanceReport.from_omega(table, exact=False, source="bruno")


def arbitrary_omega(max_degree: int) -> ResonanceReport:
    """Omega(2^(nu+1)) = exp(4^nu): the Bruno increments grow without bound"""
    table = _step_table(max_degree, lambda nu: mpmath.exp(mpmath.mpf(2) * 4 ** nu))
    return ResonanceReport.from_omega(table, exact=False, source="arbitrary")


def gevrey_divisor_omega(max_degree: int, delta: Any = Fraction(1, 2)) -> ResonanceReport:
    """Omega(q)^2 = 2^(delta 2^(nu+1)) on (2^nu, 2^(nu+1)], so each Bruno term is delta log 2"""
    d = to_fraction(delta) if isinstance(delta, (str, int, Fraction)) else delta
    exponent_exact = isinstance(d, Fraction) and all(
        (d * 2 ** (nu + 1)).denominator == 1 for nu in range(max_degree.bit_length())
    )
    if exponent_exact:
        table = _step_table(max_degree, lambda nu: Fraction(2) ** int(d * 2 ** (nu + 1)))
    else:
        table = _step_table(max_degree, lambda nu: mpmath.mpf(2) ** (to_mpf(d) * 2 ** (nu + 1)))
    return ResonanceReport.from_omega(table, exact=exponent_exact, source="gevrey-divisors")


# ----- Random maps -----

def random_linear_part(dim: int, seed: int) -> LinearPart:
    """Units times distinct primes; nonresonant by unique factorization"""
    if not 1 <= dim <= len(SMALL_PRIMES):
        raise ValidationError(f"random eigenvalues support dimension 1..{len(SMALL_PRIMES)}")
    rng = random.Random(seed)
    primes = rng.sample(SMALL_PRIMES, dim)
    units = [gaussian(1), gaussian(-1), gaussian(0, 1), gaussian(0, -1)]
    return LinearPart(tuple(rng.choice(units) * gaussian(p) for p in primes))


def random_series(
    dim: int, order: int, seed: int, max_degree: int = 4, density: float = 0.5
) -> TruncatedSeries:
    """Sparse exact nonlinear part g_hat with small rational coefficients of degree 2..max_degree"""
    rng = random.Random(seed)
    coeffs = {}
    for k in indices_up_to(dim, min(order, max_degree), start=2):
        if rng.random() >= density:
            continue
        coeffs[k] = tuple(
            gaussian(Fraction(rng.randint(-3, 3), rng.randint(1, 4))) for _ in range(dim)
        )
    return TruncatedSeries(dim, dim, order, coeffs, exact=True)


# ----- Corpus -----

def _eigenvalue_document(linear: LinearPart) -> EigenvalueFixture:
    return EigenvalueFixture(
        eigenvalues=[format_complex(v) for v in linear.eigenvalues], exact=linear.exact
    )


def _omega_document(report: ResonanceReport) -> OmegaDocument:
    return OmegaDocument(
        omega_squared={str(q): format_number(v) for q, v in report.omega_squared.items()},
        exact=report.exact,
        source=report.source,
    )


def _weight_document(weight: Weight) -> WeightDocument:
    return WeightDocument(
        generator=weight.generator,
        values=[format_number(v) for v in weight.values],
        horizon=weight.horizon,
    )


def _series_document(series: TruncatedSeries) -> SeriesDocument:
    fmt = format_number if series.real else format_complex
    return SeriesDocument(
        dim_in=series.dim_in,
        dim_out=series.dim_out,
        order=series.order,
        coeffs=[SeriesTerm(k=k.to_list(), v=[fmt(c) for c in vec]) for k, vec in series.items()],
        exact=series.exact,
    )


def fixture_corpus(
    kind: FixtureKind,
    max_degree: int = 256,
    delta: Any = Fraction(1, 2),
    horizon: Optional[int] = None,
    seed: int = 0,
    order: int = RANDOM_ORDER,
) -> Dict[str, BaseModel]:
    """File name to document for one fixture kind, or all of them.

    ``seed`` and ``order`` only affect the random map: eigenvalues from
    ``random_linear_part`` and a nonlinear part from ``random_series``.
    """
    kind = FixtureKind(kind)
    if kind == FixtureKind.ALL:
        corpus: Dict[str, BaseModel] = {}
        for single in FixtureKind:
            if single != FixtureKind.ALL:
                corpus.update(fixture_corpus(single, max_degree, delta, horizon, seed, order))
        return corpus
    if kind == FixtureKind.WEIGHTS:
        return {
            f"weight-{example.value}.json": _weight_document(
                example_weight(example, max(horizon or 0, MIN_EXAMPLE_HORIZON[example]))
            )
            for example in ExampleKind
        }
    if kind == FixtureKind.POINCARE:
        return {"eigenvalues-poincare.json": _eigenvalue_document(poincare_linear_part())}
    if kind == FixtureKind.LIOUVILLE:
        return {"eigenvalues-liouville.json": _eigenvalue_document(liouville_linear_part())}
    if kind == FixtureKind.RANDOM:
        return {
            "eigenvalues-random.json": _eigenvalue_document(random_linear_part(RANDOM_DIM, seed)),
            "series-random.json": _series_document(random_series(RANDOM_DIM, order, seed)),
        }
    builders = {
        FixtureKind.DIOPHANTINE: lambda: diophantine_omega(max_degree),
        FixtureKind.BRUNO: lambda: bruno_omega(max_degree),
        FixtureKind.ARBITRARY: lambda: arbitrary_omega(max_degree),
        FixtureKind.GEVREY_DIVISORS: lambda: gevrey_divisor_omega(max_degree, delta),
    }
    return {f"omega-{kind.value}.json": _omega_document(builders[kind]())}

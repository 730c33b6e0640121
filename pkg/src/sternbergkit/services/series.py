"""Series service: composition, majorants and the composition estimates"""

import logging
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

from ..arith import (
    Real,
    Scalar,
    complex_from_real,
    complex_scale,
    format_complex,
    format_number,
    is_zero,
    magnitude,
    parse_complex,
    parse_real,
    real_div,
    real_le,
    real_max,
    real_mul,
    to_mpf,
)
from ..exceptions import HorizonError, SchemaError, ValidationError, VerificationError
from ..multiindex import MultiIndex, indices_of_degree
from ..truncated import TruncatedSeries, compose, weighted_majorant
from ..types import (
    FlowReport,
    MainLemmaReport,
    Property,
    SeminormBoundReport,
    SeriesDocument,
    SeriesTerm,
)
from ..weight import Weight
from .scope import scoped

if TYPE_CHECKING:
    from ..kit import SternbergKit

logger = logging.getLogger(__name__)


def _unify(a: TruncatedSeries, b: TruncatedSeries) -> Tuple[TruncatedSeries, TruncatedSeries]:
    if a.exact and b.exact:
        return a, b
    return a.to_inexact(), b.to_inexact()


class SeriesService:
    """Truncated power series and weighted majorants"""

    def __init__(self, kit: "SternbergKit"):
        self.kit = kit

    # ----- Documents -----

    @scoped
    def from_document(self, doc: SeriesDocument) -> TruncatedSeries:
        try:
            terms = {tuple(t.k): [parse_complex(c, doc.exact) for c in t.v] for t in doc.coeffs}
        except (TypeError, ValueError) as e:
            raise SchemaError(f"bad coefficient: {e}") from e
        return TruncatedSeries(
            doc.dim_in,
            doc.dim_out,
            doc.order,
            terms,
            has_constant=doc.has_constant,
            exact=doc.exact,
        )

    @scoped
    def to_document(self, f: TruncatedSeries) -> SeriesDocument:
        coeffs = []
        for k, vec in f.items():
            if f.real:
                values: List[Any] = [format_number(c) for c in vec]
            else:
                values = [format_complex(c) for c in vec]
            coeffs.append(SeriesTerm(k=k.to_list(), v=values))
        return SeriesDocument(
            dim_in=f.dim_in,
            dim_out=f.dim_out,
            order=f.order,
            coeffs=coeffs,
            exact=f.exact,
            has_constant=f.has_constant,
        )

    # ----- Composition and majorants -----

    @scoped
    def compose(
        self, g: TruncatedSeries, h: TruncatedSeries, order: Optional[int] = None
    ) -> TruncatedSeries:
        """g o h truncated at the order"""
        return compose(g, h, order)

    @scoped
    def majorant(self, f: TruncatedSeries, weight: Weight) -> TruncatedSeries:
        """|f_k| / m_|k| entrywise, constant term dropped"""
        if weight.horizon < f.order:
            raise HorizonError(
                f"weight horizon {weight.horizon} is below the series order {f.order}",
                required=f.order,
            )
        return weighted_majorant(f, weight)

    @scoped
    def seminorm(self, f: TruncatedSeries, weight: Weight, r: Real) -> Real:
        """Largest component of the weighted majorant evaluated at (r, ..., r)"""
        return real_max(self.majorant(f, weight).evaluate_radius(r))

    # ----- Composition estimates -----

    @scoped
    def main_lemma_check(
        self,
        g: TruncatedSeries,
        h: TruncatedSeries,
        w: Weight,
        m: Weight,
        lam: Any,
        order: Optional[int] = None,
    ) -> MainLemmaReport:
        """Compare M(g o h) against M^w g o (M^m h)(lam x) coefficient by coefficient"""
        n = order or min(g.order, h.order)
        if g.has_constant or h.has_constant:
            raise ValidationError("main_lemma_check needs series without constant terms")
        precondition = self.kit.weights.composition_hypothesis(w, m, lam, n)
        if not precondition.holds:
            logger.warning("composition hypothesis fails at %s", precondition.witness.indices)

        lhs = self.majorant(compose(*_unify(g, h), n), m)
        outer = self.majorant(g.truncate(n), w)
        inner = self.majorant(h.truncate(n), m).scale_argument(precondition.lam)
        outer, inner = _unify(outer, inner)
        rhs = compose(outer, inner, n)

        equal = strict = 0
        keys = sorted(set(lhs.coeffs) | set(rhs.coeffs))
        for k in keys:
            left, right = lhs.coefficient(k), rhs.coefficient(k)
            for j, (a, b) in enumerate(zip(left, right)):
                if not real_le(a, b):
                    logger.debug("main lemma conclusion fails at %s", k)
                    return MainLemmaReport(
                        precondition=precondition,
                        holds=False,
                        order=n,
                        first_violation=k.to_list(),
                        component=j,
                        lhs=a,
                        rhs=b,
                        equal_indices=equal,
                        strict_indices=strict,
                    )
                if real_le(b, a):
                    equal += 1
                else:
                    strict += 1
        return MainLemmaReport(
            precondition=precondition,
            holds=True,
            order=n,
            equal_indices=equal,
            strict_indices=strict,
        )

    @scoped
    def composition_seminorm_bound(
        self,
        g: TruncatedSeries,
        h: TruncatedSeries,
        w: Weight,
        m: Weight,
        lam: Any,
        r: Any,
    ) -> SeminormBoundReport:
        """||g o h||^m_r <= ||g||^w_rho with rho = ||h||^m at lam r.

        Coefficients are Taylor coefficients at the base point a; a constant
        term of h is the value h(a), the base point of g.
        """
        n = min(g.order, h.order)
        precondition = self.kit.weights.composition_hypothesis(w, m, lam, n)
        radius = parse_real(r, exact=True) if isinstance(r, (str, int)) else r
        outer, inner = _unify(g.without_constant(), h.without_constant())
        lhs = self.seminorm(compose(outer, inner, n), m, radius)
        rho = self.seminorm(inner, m, real_mul(precondition.lam, radius))
        rhs = self.seminorm(outer, w, rho)
        holds = real_le(lhs, rhs)
        logger.debug("seminorm bound lhs=%s rho=%s rhs=%s", lhs, rho, rhs)
        return SeminormBoundReport(
            precondition=precondition, lhs=lhs, rho=rho, rhs=rhs, holds=holds
        )

    # ----- Inverse -----

    @scoped
    def inverse_series(self, g: TruncatedSeries, order: Optional[int] = None) -> TruncatedSeries:
        """rho with g o rho = id, for g = id + (terms of degree >= 2)"""
        n = order or g.order
        if g.dim_in != g.dim_out:
            raise ValidationError("inverse_series needs a square map")
        if g.has_constant and not all(is_zero(c) for c in g.constant_term()):
            raise ValidationError("inverse_series needs a map without constant term")
        identity = TruncatedSeries.identity(g.dim_in, n, exact=g.exact)
        linear = g._replace(g.linear_part(), order=n)
        if not linear.equals(identity):
            raise ValidationError("linear part is not the identity; conjugate first")

        nonlinear = g.without_constant().truncate(n) - linear
        rho = identity
        for degree in range(2, n + 1):
            image = compose(nonlinear, rho, degree)
            coeffs = dict(rho.coeffs)
            for k in indices_of_degree(g.dim_in, degree):
                vec = image.coeffs.get(k)
                if vec is not None:
                    coeffs[k] = tuple(-c for c in vec)
            rho = rho._replace(coeffs)

        if not compose(g.without_constant(), rho, n).equals(identity):
            raise VerificationError("g o rho differs from the identity")
        logger.debug("inverse_series order=%d terms=%d", n, len(rho))
        return rho

    # ----- Flows -----

    def _flow(
        self, v: TruncatedSeries, order: int, zero: Scalar, one: Scalar, real: bool
    ) -> Dict[MultiIndex, Scalar]:
        """Coefficients phi_(i,j) of t^i x^j for d/dt phi = v(t, phi), phi(0, x) = x"""
        phi: Dict[MultiIndex, Scalar] = {MultiIndex.of(0, 1): one}
        start = v.constant_term()[0]
        if not is_zero(start):
            phi[MultiIndex.of(1, 0)] = start
        for degree in range(1, order):
            coeffs = {MultiIndex.of(1, 0): (one, phi.get(MultiIndex.of(1, 0), zero))}
            for k, c in phi.items():
                if k != MultiIndex.of(1, 0):
                    coeffs[k] = (zero, c)
            lifted = TruncatedSeries(2, 2, order, coeffs, exact=v.exact, real=real)
            image = compose(v, lifted, degree)
            for i in range(degree + 1):
                c = image.coefficient((i, degree - i))[0]
                if not is_zero(c):
                    phi[MultiIndex.of(i + 1, degree - i)] = (
                        real_div(c, i + 1) if real else complex_scale(c, real_div(1, i + 1))
                    )
        return phi

    @scoped
    def flow_majorant_check(
        self,
        v: TruncatedSeries,
        m_time: Weight,
        m_space: Weight,
        order: Optional[int] = None,
    ) -> FlowReport:
        """Flow coefficients of a time-dependent field on the line against the majorant flow.

        Args:
            v: Series in (t, x) with one output; a constant term is allowed
            m_time: Weight in t
            m_space: Weight in x
            order: Total truncation order

        Returns:
            FlowReport comparing |phi_(i,j)| / (m_time_i m_space_j) with the
            coefficients of the majorant flow g
        """
        n = order or v.order
        if v.dim_in != 2 or v.dim_out != 1:
            raise ValidationError("flow_majorant_check needs v(t, x) with one space dimension")
        if m_time.horizon < n or m_space.horizon < n:
            raise HorizonError(f"flow weights need horizon >= {n}", required=n)

        phi = self._flow(
            v.truncate(n), n, complex_from_real(0, v.exact), complex_from_real(1, v.exact), False
        )

        def product_weight(k: MultiIndex) -> Real:
            return real_mul(m_time.m(k[0]), m_space.m(k[1]))

        majorant_v = {
            k: (real_div(magnitude(vec[0]), product_weight(k)),) for k, vec in v.truncate(n).items()
        }
        exact = v.exact and m_time.exact and m_space.exact
        if not exact:
            majorant_v = {k: (to_mpf(vec[0]),) for k, vec in majorant_v.items()}
        mv = TruncatedSeries(
            2, 1, n, majorant_v, has_constant=v.has_constant, exact=exact, real=True
        )
        zero = mv._zero()
        g = self._flow(mv, n, zero, zero + 1, True)

        equality = True
        for k in sorted(set(phi) | set(g)):
            left = real_div(magnitude(phi[k]), product_weight(k)) if k in phi else zero
            right = g.get(k, zero)
            if not real_le(left, right):
                return FlowReport(
                    holds=False,
                    exact_equality=False,
                    order=n,
                    first_violation=k.to_list(),
                    lhs=left,
                    rhs=right,
                    time_weight_strict_fdb=self._strict_fdb(m_time),
                    space_weight_strict_fdb=self._strict_fdb(m_space),
                )
            if not real_le(right, left):
                equality = False
        return FlowReport(
            holds=True,
            exact_equality=equality,
            order=n,
            time_weight_strict_fdb=self._strict_fdb(m_time),
            space_weight_strict_fdb=self._strict_fdb(m_space),
        )

    @scoped
    def flow_coefficients(
        self, v: TruncatedSeries, order: Optional[int] = None
    ) -> Dict[MultiIndex, Scalar]:
        """Taylor coefficients of the flow alone"""
        n = order or v.order
        return self._flow(
            v.truncate(n), n, complex_from_real(0, v.exact), complex_from_real(1, v.exact), False
        )

    def _strict_fdb(self, weight: Weight) -> bool:
        if weight.horizon < 4:
            return True
        return self.kit.weights.check_property(weight, Property.STRICT_FDB).holds_to_horizon

"""Linearization service: small divisors, the formal conjugacy and its estimates"""

import logging
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

import mpmath

from ..arith import (
    Real,
    complex_div,
    format_number,
    is_rational,
    magnitude,
    magnitude2,
    real_add,
    real_div,
    real_le,
    real_log,
    real_lt,
    real_max,
    real_mul,
    real_pow,
    real_sqrt,
    to_fraction,
    to_mpc,
    to_mpf,
    tolerance,
    upper_fraction,
)
from ..exceptions import (
    DominationError,
    EscalationBudgetError,
    HorizonError,
    ResonanceError,
    ValidationError,
    VerificationError,
    WeightAssumptionError,
)
from ..linear import LinearPart
from ..multiindex import MultiIndex, as_multiindex, indices_of_degree, indices_up_to, sub_indices
from ..truncated import TruncatedSeries, compose, monomial_scale
from ..types import (
    AccumulationLedger,
    AnalyticTag,
    BorelReport,
    ClassTag,
    CountingReport,
    DecompositionTree,
    DominationCertificate,
    DominationPolicy,
    GeneratorKind,
    Property,
    RegularityReport,
    RegularityTag,
    ResonanceReport,
    ResonanceWitness,
    SiegelBoundReport,
)
from ..weight import Weight
from .scope import scoped

if TYPE_CHECKING:
    from ..kit import SternbergKit

logger = logging.getLogger(__name__)

TABLE_HEADER = ["k", "degree", "E_k", "Delta_k", "phi_k", "sigma_Delta", "m_k", "w_k"]

Split = Optional[Tuple[Real, Tuple[MultiIndex, ...]]]


def sigma_sequence(order: int) -> List[int]:
    """sigma_1..sigma_N, sigma_n summed over ordered compositions of n with at least two parts"""
    if order < 1:
        raise ValidationError("sigma needs order >= 1")
    sigma = [0, 1]
    # all[n]: the same sum with one part allowed, i.e. 2 sigma_n for n >= 2
    every = [0, 1]
    for n in range(2, order + 1):
        value = sum(sigma[j] * every[n - j] for j in range(1, n))
        sigma.append(value)
        every.append(2 * value)
    return sigma[1:]


def _dyadic_level(n: int) -> int:
    return n.bit_length() - 1


def _format_order(s: Any) -> str:
    if is_rational(s):
        f = to_fraction(s)
        if f.denominator == 1:
            return str(f.numerator)
        return mpmath.nstr(mpmath.mpf(f.numerator) / f.denominator, 6)
    return mpmath.nstr(to_mpf(s), 6)


class LinearizeService:
    """Formal linearization of x -> Lambda x + g(x) and its accumulation estimates"""

    def __init__(self, kit: "SternbergKit"):
        self.kit = kit

    # ----- Nonresonance -----

    @scoped
    def check_nonresonance(self, linear: LinearPart, max_degree: int) -> ResonanceReport:
        """Test lambda^k != lambda_i for 2 <= |k| <= Q and tabulate E_k^2 and Omega(q)^2.

        A resonance is returned as data. The first resonant index in graded-lex
        order is reported, with the smallest i.
        """
        if max_degree < 2:
            raise ValidationError(f"max_degree must be at least 2, got {max_degree}")
        exact = linear.exact
        limit = tolerance() ** 2
        powers = linear.powers(max_degree)
        e_squared: Dict[MultiIndex, Real] = {}
        omega_squared: Dict[int, Real] = {}
        current: Optional[Real] = None

        def partial(witness: ResonanceWitness, numerical: bool) -> ResonanceReport:
            logger.debug("resonance at k=%s i=%d", witness.k, witness.i)
            return ResonanceReport(
                resonant=not numerical,
                numerically_resonant=numerical,
                witness=witness,
                max_degree=max_degree,
                e_squared=e_squared,
                omega_squared=omega_squared,
                exact=exact,
            )

        for q in range(2, max_degree + 1):
            for k in indices_of_degree(linear.dim, q):
                worst: Optional[Real] = None
                for i, lam in enumerate(linear.eigenvalues, start=1):
                    d2 = magnitude2(powers[k] - lam)
                    if exact and d2 == 0:
                        return partial(ResonanceWitness(k=k.to_list(), i=i), False)
                    if not exact and d2 < limit:
                        return partial(ResonanceWitness(k=k.to_list(), i=i), True)
                    inverse = real_div(1, d2)
                    if worst is None or real_lt(worst, inverse):
                        worst = inverse
                e_squared[k] = worst
                if current is None or real_lt(current, worst):
                    current = worst
            omega_squared[q] = current

        logger.debug("nonresonant to degree %d, Omega^2(Q)=%s", max_degree, current)
        return ResonanceReport(
            resonant=False,
            max_degree=max_degree,
            e_squared=e_squared,
            omega_squared=omega_squared,
            exact=exact,
        )

    def _require_usable(self, report: ResonanceReport) -> None:
        if not report.usable:
            kind = "numerically resonant" if report.numerically_resonant else "resonant"
            witness = report.witness
            logger.warning("%s at k=%s i=%s", kind, witness.k, witness.i)
            raise ResonanceError(
                f"{kind}: lambda^{tuple(witness.k)} = lambda_{witness.i}", witness=witness
            )

    # ----- Formal solution -----

    @scoped
    def formal_linearize(
        self, linear: LinearPart, g_hat: TruncatedSeries, order: Optional[int] = None
    ) -> TruncatedSeries:
        """phi = id + phi_hat with (Lambda + g_hat) o phi = phi o Lambda up to the order.

        Args:
            linear: Eigenvalues of Lambda
            g_hat: Nonlinear part, terms of degree 2..N only
            order: Truncation order N, defaults to the order of g_hat

        Returns:
            The truncated conjugacy phi
        """
        n = order or g_hat.order
        if g_hat.dim_in != linear.dim or g_hat.dim_out != linear.dim:
            raise ValidationError(
                f"g_hat must map dimension {linear.dim} to itself",
                errors={"dim_in": g_hat.dim_in, "dim_out": g_hat.dim_out},
            )
        if any(k.degree < 2 for k, _ in g_hat.items()):
            raise ValidationError("g_hat must start at degree 2")
        self._require_usable(self.check_nonresonance(linear, max(n, 2)))

        exact = linear.exact and g_hat.exact
        if not exact:
            linear = LinearPart(tuple(to_mpc(v) for v in linear.eigenvalues))
            g_hat = g_hat.to_inexact()
        g = g_hat.truncate(n)
        powers = linear.powers(n)

        phi = TruncatedSeries.identity(linear.dim, n, exact=exact)
        for degree in range(2, n + 1):
            image = compose(g, phi, degree)
            coeffs = dict(phi.coeffs)
            for k in indices_of_degree(linear.dim, degree):
                vec = image.coeffs.get(k)
                if vec is None:
                    continue
                coeffs[k] = tuple(
                    complex_div(c, powers[k] - lam) for c, lam in zip(vec, linear.eigenvalues)
                )
            phi = phi._replace(coeffs)

        full = TruncatedSeries.diagonal(linear.eigenvalues, n) + g
        if not compose(full, phi, n).equals(monomial_scale(phi, linear.eigenvalues)):
            raise VerificationError("conjugacy residual is not zero")
        logger.debug("formal_linearize order=%d terms=%d exact=%s", n, len(phi), exact)
        return phi

    # ----- Accumulation -----

    @scoped
    def accumulation_ledger(
        self,
        linear: LinearPart,
        order: int,
        resonance: Optional[ResonanceReport] = None,
    ) -> AccumulationLedger:
        """sigma_n, Delta_k^2 with one recorded argmax decomposition per k, and N_n(k)"""
        if order < 2:
            raise ValidationError("accumulation_ledger needs order >= 2")
        resonance = resonance or self.check_nonresonance(linear, order)
        if resonance.max_degree < order:
            raise HorizonError(f"resonance table stops at {resonance.max_degree}", required=order)
        self._require_usable(resonance)

        e_squared = resonance.e_squared
        one: Real = Fraction(1) if resonance.exact else mpmath.mpf(1)
        delta: Dict[MultiIndex, Real] = {}
        parts_of: Dict[MultiIndex, Tuple[MultiIndex, ...]] = {}
        memo: Dict[Tuple[MultiIndex, MultiIndex], Split] = {}

        def best_split(rest: MultiIndex, bound: MultiIndex) -> Split:
            """Largest product of Delta^2 over nonincreasing parts <= bound summing to rest"""
            if rest.degree == 0:
                return one, ()
            key = (rest, bound)
            if key in memo:
                return memo[key]
            best: Split = None
            for p in sub_indices(rest):
                if bound < p:
                    break
                tail = best_split(rest - p, p)
                if tail is None:
                    continue
                value = real_mul(delta[p], tail[0])
                if best is None or real_lt(best[0], value):
                    best = (value, (p, *tail[1]))
            memo[key] = best
            return best

        for k in indices_up_to(linear.dim, order):
            if k.degree == 1:
                delta[k] = one
                parts_of[k] = ()
                continue
            best: Split = None
            for p in sub_indices(k):
                if p == k:
                    continue
                tail = best_split(k - p, p)
                if tail is None:
                    continue
                value = real_mul(delta[p], tail[0])
                if best is None or real_lt(best[0], value):
                    best = (value, (p, *tail[1]))
            delta[k] = real_mul(e_squared[k], best[0])
            parts_of[k] = best[1]

        trees: Dict[MultiIndex, DecompositionTree] = {}
        for k in delta:
            factors = self._flatten(k, parts_of)
            product: Real = one
            for l in factors:
                product = real_mul(product, e_squared[l])
            if not (real_le(product, delta[k]) and real_le(delta[k], product)):
                raise VerificationError(f"tree factors of {k.exponents} do not multiply to Delta_k")
            trees[k] = DecompositionTree(
                k=k.to_list(),
                parts=[p.to_list() for p in parts_of[k]],
                factors=[l.to_list() for l in factors],
            )

        omega_squared = {q: resonance.omega_squared[q] for q in range(2, order + 1)}
        counting: Dict[Tuple[int, Tuple[int, ...]], int] = {}
        for n in range(2, order + 1):
            threshold = real_mul(linear.eta_squared, omega_squared[n])
            for k, tree in trees.items():
                if k.degree < 2:
                    continue
                counting[(n, k.exponents)] = sum(
                    1 for l in tree.factors if real_lt(threshold, e_squared[as_multiindex(l)])
                )

        logger.debug("accumulation_ledger order=%d indices=%d", order, len(delta))
        return AccumulationLedger(
            order=order,
            sigma=sigma_sequence(order),
            delta_squared=delta,
            trees=trees,
            counting=counting,
            e_squared={k: e_squared[k] for k in delta if k.degree >= 2},
            omega_squared=omega_squared,
            eta_squared=linear.eta_squared,
            exact=resonance.exact,
        )

    def _flatten(
        self, k: MultiIndex, parts_of: Dict[MultiIndex, Tuple[MultiIndex, ...]]
    ) -> List[MultiIndex]:
        """E-factors l_0 = k, l_1, ..., l_s of the recorded tree"""
        if k.degree < 2:
            return []
        out = [k]
        for part in parts_of[k]:
            out.extend(self._flatten(part, parts_of))
        return out

    @scoped
    def counting_lemma_check(self, ledger: AccumulationLedger, n: int, k: Any) -> CountingReport:
        """N_n(k) <= max(0, 2|k|/n - 1) on the recorded tree of Delta_k.

        Counted factors are those with E_l > eta Omega(n). Pairs of counted
        factors l' < l are checked for |l - l'| >= n; that separation is
        reported, not enforced, since it relies on |lambda_i| = 1.
        """
        k = as_multiindex(k)
        if n < 2:
            raise ValidationError(f"threshold n must be at least 2, got {n}")
        if n > ledger.order:
            raise HorizonError(f"ledger stops at order {ledger.order}", required=n)
        if k not in ledger.trees:
            raise ValidationError(f"ledger does not cover {k.exponents}")

        threshold = real_mul(ledger.eta_squared, ledger.omega_squared[n])
        factors = [as_multiindex(l) for l in ledger.trees[k].factors]
        counted = [l for l in factors if real_lt(threshold, ledger.e_squared[l])]
        bound = Fraction(0) if k.degree <= n else Fraction(2 * k.degree, n) - 1

        pairs = violations = 0
        for i, l in enumerate(counted):
            for other in counted[i + 1:]:
                low, high = (other, l) if other.is_below(l) else (l, other)
                if low == high or not low.is_below(high):
                    continue
                pairs += 1
                if (high - low).degree < n:
                    violations += 1

        holds = len(counted) <= bound
        report = CountingReport(
            n=n,
            k=k.to_list(),
            count=len(counted),
            bound=bound,
            holds=holds,
            pairs_checked=pairs,
            separation_violations=violations,
            counted=[l.to_list() for l in counted],
        )
        if not holds:
            logger.warning(
                "counting bound fails at n=%d k=%s: %d > %s", n, k.exponents, len(counted), bound
            )
            raise VerificationError("counting bound violated", details=report)
        return report

    # ----- Estimates -----

    @scoped
    def siegel_bound_check(
        self,
        ledger: AccumulationLedger,
        linear: LinearPart,
        m: Weight,
        g_hat: TruncatedSeries,
        order: Optional[int] = None,
    ) -> SiegelBoundReport:
        """|phi_k| <= beta^|k| multinomial(k) sigma_|k| m~_|k| Delta_k for the rescaled map.

        m~ = m' / lam with m' the weight the predicates are evaluated on (m / m_1
        when m_1 > 1) and lam its strict-FDB constant, so m~ is strictly FDB with
        constant one; beta = lam. g_hat is divided by c >= 1 until
        sum_(|l| = r) |g_l| <= m~_r for every r.

        The asserted bound carries the factors beta^|k|, multinomial(k) and m~_|k|
        on top of sigma_|k| Delta_k. The bare comparison |phi_k| <= sigma_|k| Delta_k
        is reported in the literal_* fields and never raises.
        """
        n = order or ledger.order
        if n > ledger.order:
            raise HorizonError(f"ledger stops at order {ledger.order}", required=n)
        if m.horizon < n:
            raise HorizonError(f"weight horizon {m.horizon} is below the order {n}", required=n)
        strict = self.kit.weights.check_property(m, Property.STRICT_FDB)
        if not strict.holds_to_horizon:
            logger.warning("weight is not strictly FDB on the grid")
            raise WeightAssumptionError(
                "siegel_bound_check needs a strictly FDB weight", report=strict
            )
        lam = strict.lam
        w = m.representative()

        def tilde(r: int) -> Real:
            return real_div(w.m(r), lam)

        c: Real = Fraction(1)
        for r in range(2, n + 1):
            total: Real = Fraction(0)
            for _, vec in g_hat.truncate(n).degree_part(r).items():
                total = real_add(total, real_max([magnitude(x) for x in vec]))
            ratio = real_div(total, tilde(r))
            if real_lt(c, ratio):
                c = ratio
        c = upper_fraction(c)
        phi = self.formal_linearize(linear, g_hat.scale_real(Fraction(1) / c), n)

        checked = 0
        literal_violations = 0
        first_literal: Optional[List[int]] = None
        for k, vec in phi.items():
            if k.degree < 2:
                continue
            checked += 1
            size2 = real_max([magnitude2(x) for x in vec])
            sigma = ledger.sigma[k.degree - 1]
            if not real_le(size2, real_mul(sigma * sigma, ledger.delta_squared[k])):
                literal_violations += 1
                if first_literal is None:
                    first_literal = k.to_list()
            factor = real_mul(
                real_mul(real_pow(lam, k.degree), k.multinomial() * sigma),
                tilde(k.degree),
            )
            rhs = real_mul(real_mul(factor, factor), ledger.delta_squared[k])
            if not real_le(size2, rhs):
                logger.warning("accumulation bound fails at %s", k.exponents)
                raise VerificationError(
                    f"|phi_k| exceeds the accumulation bound at {k.exponents}",
                    details={"lhs": size2, "rhs": rhs},
                )
        logger.debug(
            "siegel_bound_check order=%d scale=%s checked=%d literal_violations=%d",
            n,
            c,
            checked,
            literal_violations,
        )
        return SiegelBoundReport(
            holds=True,
            order=n,
            scale=c,
            beta=lam,
            lam=lam,
            checked=checked,
            literal_holds=literal_violations == 0,
            literal_violations=literal_violations,
            first_literal_violation=first_literal,
        )

    @scoped
    def borel_seminorm_exponent(self, phi: TruncatedSeries, m: Weight, w: Weight) -> BorelReport:
        """sup over the table of (1/|k|) log(|phi_k| / (m_|k| w_|k|))"""
        best: Optional[mpmath.mpf] = None
        argmax: Optional[List[int]] = None
        for k, vec in phi.items():
            if k.degree < 2:
                continue
            if k.degree > m.horizon or k.degree > w.horizon:
                raise HorizonError(f"weights stop before degree {k.degree}", required=k.degree)
            size = real_max([magnitude(x) for x in vec])
            value = real_log(real_div(size, real_mul(m.m(k.degree), w.m(k.degree)))) / k.degree
            if best is None or value > best:
                best, argmax = value, k.to_list()
        if best is None:
            return BorelReport(exponent=mpmath.mpf("-inf"), finite=True)
        return BorelReport(exponent=best, argmax=argmax, finite=bool(mpmath.isfinite(best)))

    # ----- Domination -----

    @scoped
    def bruno_increments(self, omega: ResonanceReport) -> List[mpmath.mpf]:
        """log Omega(2^(nu+1)) / 2^nu for every nu with 2^(nu+1) <= Q"""
        self._require_usable(omega)
        if omega.max_degree < 4:
            raise HorizonError("domination needs Omega tabulated to Q >= 4", required=4)
        out: List[mpmath.mpf] = []
        nu = 0
        while 2 ** (nu + 1) <= omega.max_degree:
            out.append(real_log(omega.omega_squared[2 ** (nu + 1)]) / 2 / 2 ** nu)
            nu += 1
        return out

    @scoped
    def bruno_partial_sums(self, omega: ResonanceReport) -> List[mpmath.mpf]:
        sums: List[mpmath.mpf] = []
        total = mpmath.mpf(0)
        for t in self.bruno_increments(omega):
            total += t
            sums.append(total)
        return sums

    @scoped
    def fitted_gevrey_delta(self, omega: ResonanceReport) -> mpmath.mpf:
        """Least delta with sum_(2 <= nu <= log2 n) terms <= delta log(n / 2) on the table"""
        increments = self.bruno_increments(omega)
        certified = 2 ** len(increments) - 1
        best = mpmath.mpf(0)
        for n in range(3, certified + 1):
            level = _dyadic_level(n)
            rise = sum(increments[2: level + 1], mpmath.mpf(0))
            best = max(best, rise / (mpmath.log(n) - mpmath.log(2)))
        return best

    @scoped
    def dominating_weight(
        self,
        omega: ResonanceReport,
        policy: DominationPolicy = DominationPolicy.MINIMAL,
        delta: Optional[Any] = None,
    ) -> DominationCertificate:
        """A weight w and constant a with B(log2 n) <= a + log(w_n) / n on the table.

        B(L) is the Bruno partial sum up to L. The certificate holds for
        n < 2^(L+1) where 2^(L+1) is the largest dyadic degree tabulated.

        Args:
            omega: Tabulated nonresonance function, from eigenvalues or synthetic
            policy: minimal, constant or gevrey
            delta: Gevrey loss for the gevrey policy, defaults to the fitted value

        Returns:
            DominationCertificate whose inequality was checked before return
        """
        policy = DominationPolicy(policy)
        increments = self.bruno_increments(omega)
        sums = self.bruno_partial_sums(omega)
        certified = 2 ** len(increments) - 1
        gevrey_delta = None
        fitted = None

        if policy == DominationPolicy.CONSTANT:
            if len(increments) >= 2 and increments[-1] > 0 and increments[-1] >= increments[-2]:
                logger.warning(
                    "Bruno partial sums keep growing: %s", [format_number(s) for s in sums]
                )
                raise DominationError(
                    "Bruno partial sums are not bounded on the table", trace=sums
                )
            a: Any = max(mpmath.mpf(0), max(sums))
            weight = Weight.constant(certified, 1)
            tag = ClassTag.NO_LOSS
        elif policy == DominationPolicy.GEVREY:
            fitted = self.fitted_gevrey_delta(omega)
            if delta is None:
                gevrey_delta = fitted
            else:
                gevrey_delta = to_fraction(delta) if isinstance(delta, str) else delta
            weight = Weight.gevrey_factor(gevrey_delta, certified)
            a = max(
                sums[_dyadic_level(n)] - real_log(weight.m(n)) / n for n in range(2, certified + 1)
            )
            tag = ClassTag.GEVREY_LOSS
        else:
            a = sums[1]
            # w_1 is not constrained; only |k| >= 2 enters the inequality
            exponents = [mpmath.mpf(0)] + [
                max(mpmath.mpf(0), sums[_dyadic_level(n)] - a) for n in range(2, certified + 1)
            ]
            if all(e == 0 for e in exponents):
                weight = Weight.constant(certified, 1)
                tag = ClassTag.NO_LOSS
            else:
                weight = Weight(tuple(mpmath.exp(n * e) for n, e in enumerate(exponents, start=1)))
                tag = ClassTag.GENERAL

        for n in range(2, certified + 1):
            rhs = real_add(a, real_log(weight.m(n)) / n)
            if not real_le(sums[_dyadic_level(n)], rhs):
                raise VerificationError(
                    f"domination inequality fails at n={n}",
                    details={"lhs": sums[_dyadic_level(n)], "rhs": rhs},
                )
        logger.debug("dominating_weight policy=%s a=%s tag=%s", policy.value, a, tag.value)
        return DominationCertificate(
            weight=weight,
            a=a,
            bruno_partial_sums=sums,
            policy=policy,
            class_tag=tag,
            gevrey_delta=gevrey_delta,
            fitted_delta=fitted,
            table_horizon=omega.max_degree,
            certified_up_to=certified,
        )

    # ----- Regularity -----

    @scoped
    def classify_regularity(self, m: Weight, cert: DominationCertificate) -> RegularityReport:
        """Class of phi: convergent, E^m, Gevrey s + delta, or E^(m*w).

        When m*w is not log-convex and strongly non-analytic, w is multiplied
        by the escalation Gevrey factor and the check repeated.
        """
        horizon = min(m.horizon, cert.weight.horizon)
        if horizon < 4:
            raise HorizonError("classify_regularity needs a common horizon >= 4", required=4)
        weights = self.kit.weights
        base = m.truncate(horizon)
        w = cert.weight.truncate(horizon)

        escalations = 0
        while True:
            product = weights.star_product(base, w)
            if product.is_constant_one() or (
                horizon >= 8
                and weights.classify_analytic_type(product).tag != AnalyticTag.BEYOND_ANALYTIC
            ):
                logger.debug("m*w is analytic at horizon %d", horizon)
                return RegularityReport(
                    tag=RegularityTag.CONVERGENT, label="C^omega", escalations=escalations, weight=w
                )
            log_convex = weights.check_property(product, Property.LOG_CONVEX)
            nonanalytic = weights.check_property(product, Property.STRONGLY_NONANALYTIC)
            if log_convex.holds_to_horizon and nonanalytic.holds_to_horizon:
                break
            if escalations >= self.kit.escalation_budget:
                logger.warning("escalation budget %d exhausted", self.kit.escalation_budget)
                raise EscalationBudgetError(
                    f"m*w still fails after {escalations} escalations", attempts=escalations
                )
            escalations += 1
            w = weights.star_product(w, Weight.gevrey_factor(self.kit.escalation_delta, horizon))
            logger.info("escalating w, attempt %d", escalations)

        generator = product.generator
        m_gevrey = base.generator is not None and base.generator.kind == GeneratorKind.GEVREY
        if w.is_constant_one():
            tag = RegularityTag.SAME_CLASS
            s = to_fraction(base.generator.params["s"]) if m_gevrey else None
            label = "E^m" if s is None else f"G^{_format_order(s)}"
        elif m_gevrey and generator is not None and generator.kind == GeneratorKind.GEVREY:
            tag = RegularityTag.GEVREY
            s = to_fraction(generator.params["s"])
            label = f"G^{_format_order(s)}"
        else:
            tag, label, s = RegularityTag.GENERAL, "E^(m*w)", None
        return RegularityReport(
            tag=tag,
            label=label,
            escalations=escalations,
            weight=w,
            gevrey_s=s,
            log_convex=log_convex,
            strongly_nonanalytic=nonanalytic,
        )

    # ----- Tables -----

    @scoped
    def coefficient_table(
        self,
        ledger: AccumulationLedger,
        phi: TruncatedSeries,
        m: Weight,
        w: Weight,
    ) -> List[List[str]]:
        """Plot-ready rows (k, |k|, E_k, Delta_k, |phi_k|, sigma Delta, m_k, w_k)"""
        rows: List[List[str]] = [list(TABLE_HEADER)]
        for k, delta2 in ledger.delta_squared.items():
            d = k.degree
            if d > phi.order or d > m.horizon or d > w.horizon:
                continue
            vec = phi.coefficient(k)
            e = real_sqrt(ledger.e_squared[k]) if d >= 2 else None
            delta_k = real_sqrt(delta2)
            rows.append(
                [
                    " ".join(str(x) for x in k.exponents),
                    str(d),
                    "" if e is None else format_number(e),
                    format_number(delta_k),
                    format_number(real_max([magnitude(x) for x in vec])),
                    format_number(real_mul(ledger.sigma[d - 1], delta_k)),
                    format_number(m.m(d)),
                    format_number(w.m(d)),
                ]
            )
        return rows

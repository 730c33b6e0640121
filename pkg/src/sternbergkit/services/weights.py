"""Weight service: property predicates, regularization and example weights"""

import logging
from fractions import Fraction
from math import factorial
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence, Tuple

import mpmath

from ..arith import (
    Real,
    format_number,
    is_rational,
    parse_real,
    real_add,
    real_div,
    real_le,
    real_log,
    real_lt,
    real_mul,
    real_pow,
    real_root,
    real_sub,
    to_mpf,
)
from ..exceptions import (
    HorizonError,
    ImplicationChainError,
    SchemaError,
    ValidationError,
    VerificationError,
    WeightAssumptionError,
)
from ..types import (
    IMPLICATION_CHAIN,
    LAMBDA_PROPERTIES,
    AnalyticTag,
    AnalyticTypeReport,
    CharacteristicReport,
    ClosureReport,
    CompositionHypothesisReport,
    ExampleKind,
    GeneratorKind,
    GeneratorSpec,
    InequalityReport,
    Property,
    PropertyReport,
    ShiftDualityReport,
    WeightDocument,
    Witness,
)
from ..weight import Weight
from .scope import scoped

if TYPE_CHECKING:
    from ..kit import SternbergKit

logger = logging.getLogger(__name__)

MIN_HORIZON: Dict[Property, int] = {
    Property.STRICT_FDB: 4,
    Property.FDB: 4,
    Property.ASM: 4,
    Property.DIFF_STABLE: 4,
    Property.STRONGLY_NONANALYTIC: 4,
    Property.ANALYTIC_TYPE: 8,
}

# how the lambda predicates were evaluated, recorded in the report notes
NOTE_NORMALIZED = "evaluated on m / m_1"
NOTE_AS_GIVEN = "evaluated on m"

# mu_k must grow faster than k^(1 + margin) over the last doubling
NONANALYTIC_MARGIN = Fraction(1, 20)


class MaxProducts:
    """P[r][k] = max m_(k_1)...m_(k_r) over k_1 + ... + k_r = k with every k_i >= 1.

    Built by the recursion P[r][k] = max_j m_j P[r-1][k-j]; the first maximizing
    j is recorded so the maximizing tuple can be read back for witnesses.
    """

    def __init__(self, weight: Weight, horizon: Optional[int] = None):
        n = horizon or weight.horizon
        self.horizon = n
        self.table: List[List[Optional[Real]]] = [[None] * (n + 1) for _ in range(n + 1)]
        self.first: List[List[int]] = [[0] * (n + 1) for _ in range(n + 1)]
        for k in range(1, n + 1):
            self.table[1][k] = weight.m(k)
            self.first[1][k] = k
        for r in range(2, n + 1):
            for k in range(r, n + 1):
                best: Optional[Real] = None
                arg = 0
                for j in range(1, k - r + 2):
                    value = real_mul(weight.m(j), self.table[r - 1][k - j])
                    if best is None or value > best:
                        best, arg = value, j
                self.table[r][k] = best
                self.first[r][k] = arg

    def value(self, r: int, k: int) -> Real:
        return self.table[r][k]

    def parts(self, r: int, k: int) -> List[int]:
        out: List[int] = []
        while r > 1:
            j = self.first[r][k]
            out.append(j)
            k -= j
            r -= 1
        out.append(k)
        return out


def _argmax(values: Sequence[Real], offset: int) -> Tuple[int, Real]:
    best = 0
    for i in range(1, len(values)):
        if real_lt(values[best], values[i]):
            best = i
    return best + offset, values[best]


def _argmin(values: Sequence[Real], offset: int) -> Tuple[int, Real]:
    best = 0
    for i in range(1, len(values)):
        if real_lt(values[i], values[best]):
            best = i
    return best + offset, values[best]


def _product(weight: Weight, parts: Sequence[int]) -> Real:
    result: Real = weight.m(0)
    for p in parts:
        result = real_mul(result, weight.m(p))
    return result


def _lambda(value: Any) -> Real:
    if value is None:
        raise ValidationError("lambda is required for this predicate")
    lam = parse_real(value, exact=True) if isinstance(value, (str, int)) else value
    if not lam > 0:
        raise ValidationError(f"lambda must be positive, got {value}")
    return lam


class WeightService:
    """Predicates of weight sequences, up to the materialized horizon"""

    def __init__(self, kit: "SternbergKit"):
        self.kit = kit

    # ----- Documents -----

    @scoped
    def from_document(self, doc: WeightDocument) -> Weight:
        """Rebuild from the generator when it has a closed form, else parse the values"""
        spec = doc.generator
        if Weight.regenerable(spec):
            try:
                return Weight.from_generator(spec, doc.horizon)
            except (KeyError, ValueError) as e:
                raise SchemaError(f"bad generator parameters: {e}") from e
        try:
            values = [
                v if isinstance(v, float) else parse_real(v, exact=True) for v in doc.values
            ]
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise SchemaError(f"bad weight value: {e}") from e
        return Weight.from_values(values, spec)

    @scoped
    def to_document(self, weight: Weight) -> WeightDocument:
        return WeightDocument(
            generator=weight.generator,
            values=[format_number(v) for v in weight.values],
            horizon=weight.horizon,
        )

    # ----- Predicates -----

    @scoped
    def check_property(
        self,
        weight: Weight,
        prop: Property,
        lam: Optional[Any] = None,
        grid: Optional[Sequence[Any]] = None,
        normalize: bool = True,
    ) -> PropertyReport:
        """Evaluate one predicate exhaustively up to the horizon.

        Args:
            weight: The weight to test
            prop: Which predicate
            lam: Constant for the lambda-parameterized predicates. When omitted
                the kit's lambda grid is searched and the smallest passing value
                is reported as the constant.
            grid: Explicit grid, overriding the kit's
            normalize: Evaluate the lambda predicates on m / m_1 when m_1 > 1.
                With False the values are taken as given.

        Returns:
            PropertyReport with a witness when the predicate fails
        """
        prop = Property(prop)
        required = MIN_HORIZON.get(prop, 2)
        if weight.horizon < required:
            raise HorizonError(
                f"{prop.value} needs horizon >= {required}, got {weight.horizon}",
                required=required,
            )
        if prop not in LAMBDA_PROPERTIES:
            report = self._check_plain(weight, prop)
        else:
            if lam is not None:
                candidates = [_lambda(lam)]
            else:
                candidates = [_lambda(v) for v in (grid or self.kit.lambda_grid)]
                if not candidates:
                    raise ValidationError(f"{prop.value} needs lambda and the grid is empty")
            report = self._search(weight, prop, candidates, normalize)
        logger.debug(
            "check_property %s horizon=%d holds=%s",
            prop.value,
            weight.horizon,
            report.holds_to_horizon,
        )
        return report

    def _search(
        self, weight: Weight, prop: Property, candidates: Sequence[Real], normalize: bool
    ) -> PropertyReport:
        w = weight.representative() if normalize else weight
        note = NOTE_NORMALIZED if w is not weight else NOTE_AS_GIVEN
        products = None
        if prop in (Property.STRICT_FDB, Property.FDB, Property.ASM):
            products = MaxProducts(w)
        witness: Optional[Witness] = None
        for lam in candidates:
            witness = self._scan_lambda(w, prop, lam, products)
            if witness is None:
                return PropertyReport(
                    property=prop,
                    holds_to_horizon=True,
                    constant=lam,
                    horizon=weight.horizon,
                    lam=lam,
                    notes=[note],
                )
        return PropertyReport(
            property=prop,
            holds_to_horizon=False,
            witness=witness,
            horizon=weight.horizon,
            lam=candidates[-1],
            notes=[note],
        )

    def _scan_lambda(
        self,
        w: Weight,
        prop: Property,
        lam: Real,
        products: Optional[MaxProducts],
    ) -> Optional[Witness]:
        n = w.horizon
        if prop == Property.STRONGLY_SUBMULT:
            for k in range(1, n + 1):
                for l in range(1, n + 2 - k):
                    lhs = real_mul(w.m(k), w.m(l))
                    rhs = real_mul(lam, w.m(k + l - 1))
                    if not real_le(lhs, rhs):
                        return Witness(indices=[k, l], lhs=lhs, rhs=rhs, lam=lam)
            return None
        if prop == Property.ALMOST_INCREASING:
            for k in range(1, n + 1):
                for l in range(k + 1, n + 1):
                    lhs, rhs, holds = self._almost_increasing_pair(w, k, l, lam)
                    if not holds:
                        return Witness(indices=[k, l], lhs=lhs, rhs=rhs, lam=lam)
            return None
        for k in range(1, n + 1):
            for r in range(1, k + 1):
                best = products.value(r, k)
                if prop == Property.ASM:
                    lhs, power = best, k
                else:
                    lhs = real_mul(w.m(r), best)
                    power = r if prop == Property.STRICT_FDB else k
                rhs = real_mul(real_pow(lam, power), w.m(k))
                if not real_le(lhs, rhs):
                    return Witness(indices=[r, *products.parts(r, k)], lhs=lhs, rhs=rhs, lam=lam)
        return None

    @staticmethod
    def _almost_increasing_pair(w: Weight, k: int, l: int, lam: Real) -> Tuple[Real, Real, bool]:
        """m_k^(1/k) <= lam m_l^(1/l), decided exactly as m_k^l <= lam^(kl) m_l^k"""
        lhs = real_root(w.m(k), k)
        rhs = real_mul(lam, real_root(w.m(l), l))
        if w.exact and is_rational(lam):
            holds = w.m(k) ** l <= lam ** (k * l) * w.m(l) ** k
        else:
            holds = real_le(lhs, rhs)
        return lhs, rhs, holds

    def _check_plain(self, weight: Weight, prop: Property) -> PropertyReport:
        if prop == Property.LOG_CONVEX:
            return self._log_convex(weight)
        if prop == Property.BLOCK_CONVEX:
            return self._block_convex(weight)
        if prop == Property.DIFF_STABLE:
            return self._diff_stable(weight)
        if prop == Property.STRONGLY_NONANALYTIC:
            return self._strongly_nonanalytic(weight)
        return self._analytic_type(weight)

    def _log_convex(self, w: Weight) -> PropertyReport:
        # m_n^2 <= m_(n-1) m_(n+1) from n = 1 on, with m_0 = 1
        for n in range(1, w.horizon):
            lhs = real_mul(w.m(n), w.m(n))
            rhs = real_mul(w.m(n - 1), w.m(n + 1))
            if not real_le(lhs, rhs):
                return PropertyReport(
                    property=Property.LOG_CONVEX,
                    holds_to_horizon=False,
                    witness=Witness(indices=[n - 1, n, n + 1], lhs=lhs, rhs=rhs),
                    horizon=w.horizon,
                )
        return PropertyReport(
            property=Property.LOG_CONVEX, holds_to_horizon=True, horizon=w.horizon
        )

    def _block_convex(self, w: Weight) -> PropertyReport:
        alphas = [w.alpha(n) for n in range(1, w.horizon + 1)]
        nu = 0
        while 2 ** nu < w.horizon:
            split = 2 ** nu
            i, head = _argmax(alphas[:split], 1)
            j, tail = _argmin(alphas[split:], split + 1)
            if not real_le(head, tail):
                return PropertyReport(
                    property=Property.BLOCK_CONVEX,
                    holds_to_horizon=False,
                    witness=Witness(indices=[nu, i, j], lhs=head, rhs=tail),
                    horizon=w.horizon,
                )
            nu += 1
        return PropertyReport(
            property=Property.BLOCK_CONVEX, holds_to_horizon=True, horizon=w.horizon
        )

    @staticmethod
    def _diff_quotient(w: Weight, n: int) -> Real:
        """(m_n / m_(n-1))^(1/n)"""
        return real_root(real_div(w.m(n), w.m(n - 1)), n)

    def _diff_stable(self, w: Weight) -> PropertyReport:
        half = w.horizon // 2
        quotients = [self._diff_quotient(w, n) for n in range(2, w.horizon + 1)]
        early_n, early = _argmax(quotients[: half - 1], 2)
        late_n, late = _argmax(quotients[half - 1:], half + 1)
        sup = early if real_le(late, early) else late
        notes = ["bounded iff the sup over the second half does not exceed the first half"]
        if real_le(late, early):
            return PropertyReport(
                property=Property.DIFF_STABLE,
                holds_to_horizon=True,
                constant=sup,
                horizon=w.horizon,
                notes=notes,
            )
        return PropertyReport(
            property=Property.DIFF_STABLE,
            holds_to_horizon=False,
            witness=Witness(indices=[late_n, early_n], lhs=late, rhs=early),
            constant=sup,
            horizon=w.horizon,
            notes=notes,
        )

    @staticmethod
    def _growth_exponent(w: Weight, q: int, n: int) -> mpmath.mpf:
        """log(mu_n / mu_q) / log(n / q)"""
        return real_log(real_div(w.mu(n), w.mu(q))) / mpmath.log(mpmath.mpf(n) / q)

    def _strongly_nonanalytic(self, w: Weight) -> PropertyReport:
        n = w.horizon
        q_max = n // 2
        notes: List[str] = []
        tail: Real = Fraction(0)
        ratio = real_div(w.mu(n), w.mu(n - 1))
        if real_lt(Fraction(1), ratio):
            tail = real_div(Fraction(1), real_mul(w.mu(n), real_sub(ratio, Fraction(1))))
            notes.append("geometric tail bound from mu_N / mu_(N-1)")
        else:
            notes.append("tail-inconclusive")

        suffix: List[Real] = [Fraction(0)] * (n + 2)
        for k in range(n, 0, -1):
            suffix[k] = real_add(suffix[k + 1], real_div(Fraction(1), w.mu(k)))
        partial_sup: Optional[Real] = None
        for q in range(1, q_max + 1):
            value = real_mul(real_div(w.mu(q), q), real_add(suffix[q], tail))
            if partial_sup is None or real_lt(partial_sup, value):
                partial_sup = value

        growth = self._growth_exponent(w, q_max, n)
        threshold = 1 + NONANALYTIC_MARGIN
        holds = real_lt(threshold, growth)
        notes.append(f"mu growth exponent over [{q_max}, {n}] must exceed {threshold}")
        return PropertyReport(
            property=Property.STRONGLY_NONANALYTIC,
            holds_to_horizon=holds,
            witness=None if holds else Witness(indices=[q_max, n], lhs=threshold, rhs=growth),
            constant=partial_sup,
            horizon=n,
            notes=notes,
        )

    def _analytic_type(self, w: Weight) -> PropertyReport:
        report = self.classify_analytic_type(w)
        holds = report.tag != AnalyticTag.SUB_ANALYTIC
        witness = None
        if not holds:
            n = w.horizon
            slope = self._trend(w, n // 2, (3 * n) // 4, n, big=False)
            witness = Witness(
                indices=[n // 2, (3 * n) // 4, n], lhs=-slope, rhs=self.kit.trend_tolerance
            )
        return PropertyReport(
            property=Property.ANALYTIC_TYPE,
            holds_to_horizon=holds,
            witness=witness,
            constant=report.alpha_est,
            horizon=w.horizon,
            notes=[f"tag {report.tag.value} (horizon-limited)"],
        )

    @scoped
    def evaluate_witness(self, weight: Weight, report: PropertyReport) -> bool:
        """True when the report's witness violates the defining inequality"""
        if report.witness is None:
            return False
        idx = report.witness.indices
        prop = report.property
        if prop in LAMBDA_PROPERTIES:
            w = weight.normalized() if NOTE_NORMALIZED in report.notes else weight
            lam = _lambda(report.witness.lam if report.witness.lam is not None else report.lam)
            if prop == Property.STRONGLY_SUBMULT:
                k, l = idx
                return not real_le(real_mul(w.m(k), w.m(l)), real_mul(lam, w.m(k + l - 1)))
            if prop == Property.ALMOST_INCREASING:
                return not self._almost_increasing_pair(w, idx[0], idx[1], lam)[2]
            r, parts = idx[0], idx[1:]
            k = sum(parts)
            if len(parts) != r:
                raise ValidationError(f"witness {idx} does not list {r} parts")
            if prop == Property.ASM:
                lhs, power = _product(w, parts), k
            else:
                lhs = real_mul(w.m(r), _product(w, parts))
                power = r if prop == Property.STRICT_FDB else k
            return not real_le(lhs, real_mul(real_pow(lam, power), w.m(k)))
        if prop == Property.LOG_CONVEX:
            n = idx[1]
            square = real_mul(weight.m(n), weight.m(n))
            return not real_le(square, real_mul(weight.m(n - 1), weight.m(n + 1)))
        if prop == Property.BLOCK_CONVEX:
            nu, i, j = idx
            return i <= 2 ** nu < j and not real_le(weight.alpha(i), weight.alpha(j))
        if prop == Property.DIFF_STABLE:
            late, early = idx
            late_q, early_q = self._diff_quotient(weight, late), self._diff_quotient(weight, early)
            return not real_le(late_q, early_q)
        if prop == Property.STRONGLY_NONANALYTIC:
            q, n = idx
            return not real_lt(1 + NONANALYTIC_MARGIN, self._growth_exponent(weight, q, n))
        lo, mid, n = idx
        return -self._trend(weight, lo, mid, n, big=False) > to_mpf(self.kit.trend_tolerance)

    @scoped
    def implication_matrix(
        self, weight: Weight, lam: Optional[Any] = None
    ) -> List[PropertyReport]:
        """All ten predicates; the chain log_convex => ... => fdb must not break.

        With ``lam`` the lambda predicates are tested at that constant instead
        of searching the grid.
        """
        if weight.horizon < 8:
            raise HorizonError("implication_matrix needs horizon >= 8", required=8)
        reports = [self.check_property(weight, prop, lam=lam) for prop in Property]
        by_prop = {r.property: r for r in reports}
        for i, earlier in enumerate(IMPLICATION_CHAIN):
            for later in IMPLICATION_CHAIN[i + 1:]:
                if by_prop[earlier].holds_to_horizon and not by_prop[later].holds_to_horizon:
                    logger.warning(
                        "implication chain broken: %s holds, %s fails", earlier.value, later.value
                    )
                    raise ImplicationChainError(
                        f"{earlier.value} holds but {later.value} fails", reports=reports
                    )
        return reports

    @scoped
    def weak_submultiplicativity_check(self, weight: Weight) -> InequalityReport:
        """m_k m_l <= 2^(k+l) m_(k+l) for k + l <= N"""
        checked = 0
        for k in range(1, weight.horizon):
            for l in range(1, weight.horizon - k + 1):
                checked += 1
                lhs = real_mul(weight.m(k), weight.m(l))
                rhs = real_mul(Fraction(2) ** (k + l), weight.m(k + l))
                if not real_le(lhs, rhs):
                    return InequalityReport(
                        name="weak_submultiplicativity",
                        holds=False,
                        checked=checked,
                        witness=Witness(indices=[k, l], lhs=lhs, rhs=rhs),
                    )
        return InequalityReport(name="weak_submultiplicativity", holds=True, checked=checked)

    @scoped
    def closure_report(self, weight: Weight) -> ClosureReport:
        asm = self.check_property(weight, Property.ASM)
        fdb = self.check_property(weight, Property.FDB)
        diff = self.check_property(weight, Property.DIFF_STABLE)
        return ClosureReport(
            holomorphically_closed=asm.holds_to_horizon,
            composition_closed=fdb.holds_to_horizon,
            inverse_closed=fdb.holds_to_horizon,
            derivation_closed=diff.holds_to_horizon,
            reports=[asm, fdb, diff],
        )

    @scoped
    def composition_hypothesis(
        self, w: Weight, m: Weight, lam: Any, order: Optional[int] = None
    ) -> CompositionHypothesisReport:
        """w_r m_(k_1)...m_(k_r) <= lam^k m_k for 1 <= r <= k <= order"""
        lam = _lambda(lam)
        n = order or min(w.horizon, m.horizon)
        if n > w.horizon or n > m.horizon:
            raise HorizonError(f"order {n} exceeds a weight horizon", required=n)
        products = MaxProducts(m, n)
        for k in range(1, n + 1):
            for r in range(1, k + 1):
                lhs = real_mul(w.m(r), products.value(r, k))
                rhs = real_mul(real_pow(lam, k), m.m(k))
                if not real_le(lhs, rhs):
                    return CompositionHypothesisReport(
                        holds=False,
                        lam=lam,
                        order=n,
                        witness=Witness(
                            indices=[r, *products.parts(r, k)], lhs=lhs, rhs=rhs, lam=lam
                        ),
                    )
        return CompositionHypothesisReport(holds=True, lam=lam, order=n)

    # ----- Shifts and duality -----

    @scoped
    def left_shift(self, weight: Weight) -> Weight:
        """m'_n = m_(n+1)"""
        if weight.horizon < 3:
            raise HorizonError("left_shift needs horizon >= 3", required=3)
        return Weight(weight.values[1:])

    @scoped
    def shift_duality_check(self, weight: Weight, lam: Any = 1) -> ShiftDualityReport:
        """FDB of m against ASM of its left shift, over {lam, 2 lam, 4 lam, 8 lam}.

        The shift is taken of the representative m / m_1 (when m_1 > 1) and its
        ASM is evaluated as given, without a second normalization.
        """
        if weight.horizon < 8:
            raise HorizonError("shift_duality_check needs horizon >= 8", required=8)
        base = _lambda(lam)
        grid = [base * 2 ** i for i in range(4)]
        fdb = self.check_property(weight, Property.FDB, grid=grid)
        shifted = self.left_shift(weight.representative())
        asm = self.check_property(shifted, Property.ASM, grid=grid, normalize=False)
        agree = fdb.holds_to_horizon == asm.holds_to_horizon
        if not agree:
            logger.info("shift duality disagreement at horizon %d", weight.horizon)
        return ShiftDualityReport(fdb=fdb, asm_of_shift=asm, agree=agree)

    # ----- Regularization -----

    @scoped
    def log_convex_minorant(self, weight: Weight) -> Weight:
        """Largest weakly log-convex minorant: lower convex hull of n -> log M_n"""
        n = weight.horizon
        if n < 3:
            raise HorizonError("log_convex_minorant needs horizon >= 3", required=3)
        big = [None] + [weight.big_m(i) for i in range(1, n + 1)]
        exact = weight.exact
        logs = None if exact else [None] + [real_log(big[i]) for i in range(1, n + 1)]

        def on_or_above(i: int, j: int, k: int) -> bool:
            # point j is not strictly below the chord from i to k
            if exact:
                return big[j] ** (k - i) >= big[i] ** (k - j) * big[k] ** (j - i)
            chord = ((k - j) * logs[i] + (j - i) * logs[k]) / (k - i)
            return real_le(chord, logs[j])

        hull: List[int] = []
        for k in range(1, n + 1):
            while len(hull) >= 2 and on_or_above(hull[-2], hull[-1], k):
                hull.pop()
            hull.append(k)

        values: List[Real] = []
        for left, right in zip(hull, hull[1:]):
            for j in range(left, right):
                if j == left:
                    big_j = big[j]
                else:
                    chord = real_mul(real_pow(big[left], right - j), real_pow(big[right], j - left))
                    big_j = real_root(chord, right - left)
                values.append(real_div(big_j, factorial(j)))
        values.append(real_div(big[n], factorial(n)))
        result = Weight(tuple(values))
        for i in range(2, n):
            if not real_le(result.mu(i), result.mu(i + 1)):
                raise VerificationError(
                    f"minorant quotients decrease at {i}", details={"hull": hull}
                )
        logger.debug("log_convex_minorant hull vertices %s", hull)
        return result

    @scoped
    def star_product(self, m: Weight, w: Weight) -> Weight:
        """(m * w)_k = m_k w_k"""
        if m.horizon != w.horizon:
            raise HorizonError(
                f"star product needs equal horizons, got {m.horizon} and {w.horizon}",
                required=max(m.horizon, w.horizon),
            )
        values = tuple(real_mul(a, b) for a, b in zip(m.values, w.values))
        return Weight(values, _star_generator(m, w))

    # ----- Characteristic function -----

    @scoped
    def characteristic_term(self, weight: Weight, n: int, nu: int) -> Real:
        """2^(-nu) mu_nu^(n - nu) M_nu / n!, one summand of s_n"""
        term = real_mul(real_pow(weight.mu(nu), n - nu), weight.big_m(nu))
        return real_div(term, Fraction(2) ** nu * factorial(n))

    @scoped
    def characteristic_coefficients(
        self, weight: Weight, terms: Optional[int] = None
    ) -> CharacteristicReport:
        """s_n = (1/n!) sum_(nu <= V) 2^(-nu) mu_nu^n / T_nu with T_nu = mu_nu^nu / M_nu"""
        n = weight.horizon
        v = terms or n
        if v < n:
            raise ValidationError(f"need at least {n} terms, got {v}")
        extended = weight
        if v > n:
            try:
                extended = weight.with_horizon(v)
            except HorizonError:
                logger.warning("weight has no generator; summing %d terms instead of %d", n, v)
                v = n
        for i in range(1, v):
            if not real_le(extended.mu(i), extended.mu(i + 1)):
                witness = Witness(indices=[i, i + 1], lhs=extended.mu(i), rhs=extended.mu(i + 1))
                report = PropertyReport(
                    property=Property.LOG_CONVEX,
                    holds_to_horizon=False,
                    witness=witness,
                    horizon=v,
                    notes=["mu must be nondecreasing"],
                )
                logger.warning("weight is not weakly log-convex at %d", i)
                raise WeightAssumptionError(
                    f"mu_{i} > mu_{i + 1}: weight is not weakly log-convex", report=report
                )
        coefficients: List[Real] = []
        bounds: List[Real] = []
        for k in range(1, n + 1):
            total: Real = Fraction(0)
            for nu in range(1, v + 1):
                total = real_add(total, self.characteristic_term(extended, k, nu))
            bound = real_div(weight.m(k), Fraction(2) ** k)
            if not real_le(bound, total):
                raise VerificationError(f"s_{k} below m_{k} / 2^{k}", details={"s": total})
            coefficients.append(total)
            bounds.append(bound)
        return CharacteristicReport(coefficients=coefficients, lower_bounds=bounds, terms=v)

    # ----- Analytic type -----

    @staticmethod
    def _window_min(w: Weight, lo: int, hi: int, big: bool) -> Real:
        values = [
            real_root(w.big_m(i), i) if big else w.root(i) for i in range(lo, hi + 1)
        ]
        return _argmin(values, lo)[1]

    def _trend(self, w: Weight, lo: int, mid: int, n: int, big: bool) -> mpmath.mpf:
        """Log-log slope between the window minima of [lo, mid] and [mid, n]"""
        first = self._window_min(w, lo, mid, big)
        second = self._window_min(w, mid, n, big)
        centers = mpmath.mpf(mid + n) / (lo + mid)
        return mpmath.log(to_mpf(second) / to_mpf(first)) / mpmath.log(centers)

    @scoped
    def classify_analytic_type(self, weight: Weight) -> AnalyticTypeReport:
        """Estimates of liminf m_n^(1/n) and liminf M_n^(1/n) with a trend tag"""
        n = weight.horizon
        if n < 8:
            raise HorizonError("classify_analytic_type needs horizon >= 8", required=8)
        lo, mid = n // 2, (3 * n) // 4
        tol = to_mpf(self.kit.trend_tolerance)
        slope = self._trend(weight, lo, mid, n, big=False)
        if slope < -tol:
            tag = AnalyticTag.SUB_ANALYTIC
        elif slope > tol:
            tag = AnalyticTag.BEYOND_ANALYTIC
        else:
            tag = AnalyticTag.CONTAINS_ANALYTIC
        big_slope = self._trend(weight, lo, mid, n, big=True)
        return AnalyticTypeReport(
            alpha_est=self._window_min(weight, lo, n, big=False),
            big_a_est=self._window_min(weight, lo, n, big=True),
            tag=tag,
            equals_analytic=tag == AnalyticTag.CONTAINS_ANALYTIC,
            big_a_bounded=big_slope <= tol,
            horizon=n,
        )

    # ----- Examples -----

    @scoped
    def generate_example(self, kind: ExampleKind, horizon: int, growth: int = 1) -> Weight:
        """Materialize one of the four separating example weights"""
        from ..fixtures import example_weight

        return example_weight(ExampleKind(kind).value, horizon, {"growth": str(growth)})


def _star_generator(m: Weight, w: Weight) -> Optional[GeneratorSpec]:
    a, b = m.generator, w.generator
    if a is None or b is None:
        return None
    if a.kind == GeneratorKind.CONSTANT and b.kind == GeneratorKind.CONSTANT:
        c = Fraction(a.params.get("c", "1")) * Fraction(b.params.get("c", "1"))
        return GeneratorSpec(kind=GeneratorKind.CONSTANT, params={"c": str(c)})
    if a.kind == GeneratorKind.CONSTANT and a.params.get("c", "1") == "1":
        return b
    if b.kind == GeneratorKind.CONSTANT and b.params.get("c", "1") == "1":
        return a
    if a.kind == GeneratorKind.GEVREY and b.kind == GeneratorKind.GEVREY:
        s = Fraction(a.params["s"]) + Fraction(b.params["s"]) - 1
        return GeneratorSpec(kind=GeneratorKind.GEVREY, params={"s": str(s)})
    return None

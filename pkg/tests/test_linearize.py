"""Tests for nonresonance, the formal conjugacy and the accumulation estimates"""

import itertools
from fractions import Fraction

import mpmath
import pytest

from sternbergkit import (
    ClassTag,
    DominationError,
    DominationPolicy,
    EscalationBudgetError,
    ExampleKind,
    HorizonError,
    LinearPart,
    MultiIndex,
    RegularityTag,
    ResonanceError,
    ResonanceReport,
    TruncatedSeries,
    ValidationError,
    Weight,
    WeightAssumptionError,
    compose,
)
from sternbergkit.arith import to_mpf
from sternbergkit.fixtures import (
    arbitrary_omega,
    bruno_omega,
    diophantine_omega,
    example_weight,
    gevrey_divisor_omega,
    liouville_exponents,
    liouville_linear_part,
    poincare_linear_part,
    random_linear_part,
    random_series,
)
from sternbergkit.services.linearize import TABLE_HEADER, sigma_sequence
from sternbergkit.truncated import monomial_scale

from .helpers import real_value


def _expanding():
    return LinearPart.from_values(["2"])


def _square(order):
    return TruncatedSeries.scalar(order, {2: 1})


def _compositions(n):
    """Ordered compositions of n"""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


def _brute_delta(ledger, dim, order):
    """Delta_k^2 by maximizing over every ordered split into nonzero parts"""
    delta = {}

    def best_any(rest):
        if rest.degree == 0:
            return Fraction(1)
        best = None
        for p in _below(rest):
            value = delta[p] * best_any(rest - p)
            if best is None or value > best:
                best = value
        return best

    for degree in range(1, order + 1):
        for exps in itertools.product(range(degree + 1), repeat=dim):
            if sum(exps) != degree:
                continue
            k = MultiIndex(exps)
            if degree == 1:
                delta[k] = Fraction(1)
                continue
            best = max(delta[p] * best_any(k - p) for p in _below(k) if p != k)
            delta[k] = ledger.e_squared[k] * best
    return delta


def _below(k):
    for exps in itertools.product(*(range(e + 1) for e in k.exponents)):
        if any(exps):
            yield MultiIndex(exps)


def _check_all_levels(kit, linear, order):
    """Counting bound for every 2 <= n <= |k| <= order; violations raise"""
    ledger = kit.linearize.accumulation_ledger(linear, order)
    checked = 0
    for k in ledger.trees:
        for n in range(2, k.degree + 1):
            assert kit.linearize.counting_lemma_check(ledger, n, k).holds
            checked += 1
    assert checked > 0


class TestNonresonance:
    def test_expanding_scalar_tables(self, kit):
        report = kit.linearize.check_nonresonance(_expanding(), 8)
        assert not report.resonant
        for k in range(2, 9):
            assert report.e_squared[MultiIndex.of(k)] == Fraction(1, (2 ** k - 2) ** 2)
            assert report.omega_squared[k] == Fraction(1, 4)

    def test_contracting_scalar_omega(self, kit):
        report = kit.linearize.check_nonresonance(LinearPart.from_values(["1/2"]), 8)
        assert all(v == 16 for v in report.omega_squared.values())

    def test_resonance_is_reported_as_data(self, kit):
        report = kit.linearize.check_nonresonance(LinearPart.from_values(["2", "4"]), 6)
        assert report.resonant
        assert report.witness.k == [2, 0]
        assert report.witness.i == 2

    def test_inexact_resonance_is_numerical(self, kit):
        linear = LinearPart.from_values(["2", "4"], exact=False)
        report = kit.linearize.check_nonresonance(linear, 6)
        assert not report.resonant
        assert report.numerically_resonant

    def test_zero_eigenvalue_rejected(self):
        with pytest.raises(ValidationError):
            LinearPart.from_values(["0", "2"])

    def test_poincare_domain_is_bounded(self, kit):
        linear = poincare_linear_part()
        report = kit.linearize.check_nonresonance(linear, 10)
        assert all(v == 144 for v in report.omega_squared.values())
        assert linear.eta_squared == 36

    def test_liouville_omega_jumps_at_dyadic_scale(self, kit):
        report = kit.linearize.check_nonresonance(liouville_linear_part(), 16)
        assert not report.resonant
        omega = report.omega_squared
        for j in (1, 2, 3):
            assert to_mpf(omega[2 ** j]) < 8
        # lambda^8 is within 2 pi 2^-72 of one, so E_9 dominates from q = 9 on
        assert to_mpf(omega[16]) > mpmath.exp(64)
        assert to_mpf(omega[9]) == to_mpf(omega[16])
        assert mpmath.log(to_mpf(omega[16])) / 2 / 16 > 2
        increments = kit.linearize.bruno_increments(report)
        assert increments[-1] > 10 * max(increments[:-1])

    def test_liouville_exponents_grow_super_exponentially(self):
        assert liouville_exponents(3) == [1, 3, 75]
        assert liouville_exponents(4)[-1] == 75 + 75 ** 2 * 2 ** 75

    def test_max_degree_below_two_rejected(self, kit):
        with pytest.raises(ValidationError):
            kit.linearize.check_nonresonance(_expanding(), 1)


class TestFormalLinearize:
    def test_scalar_square(self, kit):
        phi = kit.linearize.formal_linearize(_expanding(), _square(6))
        assert real_value(phi.coefficient((1,))[0]) == 1
        assert real_value(phi.coefficient((2,))[0]) == Fraction(1, 2)
        assert real_value(phi.coefficient((3,))[0]) == Fraction(1, 6)
        assert real_value(phi.coefficient((4,))[0]) == Fraction(1, 24)

    @pytest.mark.parametrize("seed", range(30))
    def test_random_conjugacy(self, kit, seed):
        dim = 1 + seed % 3
        order = 8
        linear = random_linear_part(dim, seed)
        g_hat = random_series(dim, order, seed)
        phi = kit.linearize.formal_linearize(linear, g_hat)
        full = TruncatedSeries.diagonal(linear.eigenvalues, order) + g_hat
        assert compose(full, phi, order).equals(monomial_scale(phi, linear.eigenvalues))

    def test_resonance_raises(self, kit):
        g_hat = TruncatedSeries.from_terms(2, 2, 4, {(2, 0): [0, 1]})
        with pytest.raises(ResonanceError) as exc:
            kit.linearize.formal_linearize(LinearPart.from_values(["2", "4"]), g_hat)
        assert exc.value.exit_code == 3

    def test_linear_terms_rejected(self, kit):
        with pytest.raises(ValidationError):
            kit.linearize.formal_linearize(_expanding(), TruncatedSeries.scalar(4, {1: 1, 2: 1}))

    def test_dimension_mismatch_rejected(self, kit):
        g_hat = TruncatedSeries.from_terms(2, 2, 4, {(1, 1): [1, 0]})
        with pytest.raises(ValidationError):
            kit.linearize.formal_linearize(_expanding(), g_hat)


class TestAccumulation:
    def test_sigma_matches_compositions(self):
        sigma = sigma_sequence(12)
        assert sigma[:6] == [1, 1, 3, 11, 45, 197]
        for n in range(2, 13):
            total = 0
            for parts in _compositions(n):
                if len(parts) < 2:
                    continue
                product = 1
                for p in parts:
                    product *= sigma[p - 1]
                total += product
            assert sigma[n - 1] == total

    def test_expanding_scalar_ledger(self, kit):
        ledger = kit.linearize.accumulation_ledger(_expanding(), 6)
        assert ledger.delta_squared[MultiIndex.of(2)] == Fraction(1, 4)
        assert ledger.delta_squared[MultiIndex.of(3)] == Fraction(1, 36)
        assert ledger.trees[MultiIndex.of(3)].factors == [[3]]
        assert ledger.eta_squared == 16

    @pytest.mark.parametrize("dim, order", [(1, 6), (2, 5)])
    def test_delta_matches_brute_force(self, kit, dim, order):
        ledger = kit.linearize.accumulation_ledger(random_linear_part(dim, 7), order)
        expected = _brute_delta(ledger, dim, order)
        for k, value in expected.items():
            assert ledger.delta_squared[k] == value

    def test_tree_factors_multiply_to_delta(self, kit):
        ledger = kit.linearize.accumulation_ledger(random_linear_part(2, 3), 5)
        for k, tree in ledger.trees.items():
            product = Fraction(1)
            for l in tree.factors:
                product *= ledger.e_squared[MultiIndex(tuple(l))]
            assert product == ledger.delta_squared[k]

    def test_ledger_rejects_resonance(self, kit):
        with pytest.raises(ResonanceError):
            kit.linearize.accumulation_ledger(LinearPart.from_values(["2", "4"]), 4)

    def test_short_resonance_table(self, kit):
        resonance = kit.linearize.check_nonresonance(_expanding(), 4)
        with pytest.raises(HorizonError):
            kit.linearize.accumulation_ledger(_expanding(), 6, resonance)


class TestCountingLemma:
    @pytest.mark.parametrize("k", [2, 4, 8])
    def test_expanding_scalar_counts_nothing(self, kit, k):
        ledger = kit.linearize.accumulation_ledger(_expanding(), 8)
        report = kit.linearize.counting_lemma_check(ledger, 2, [k])
        assert report.count == 0
        assert report.holds

    def test_contracting_scalar(self, kit):
        ledger = kit.linearize.accumulation_ledger(LinearPart.from_values(["1/2"]), 8)
        report = kit.linearize.counting_lemma_check(ledger, 2, [8])
        assert report.count == 0
        assert report.bound == 7

    def test_poincare_counts_nothing(self, kit):
        ledger = kit.linearize.accumulation_ledger(poincare_linear_part(), 6)
        for k in ledger.trees:
            if k.degree >= 2:
                assert kit.linearize.counting_lemma_check(ledger, 3, k).count == 0

    @pytest.mark.parametrize(
        "linear",
        [
            _expanding(),
            LinearPart.from_values(["1/2"]),
            poincare_linear_part(),
            liouville_linear_part(),
        ],
        ids=["expanding", "contracting", "poincare", "liouville"],
    )
    def test_every_level_on_fixed_points(self, kit, linear):
        _check_all_levels(kit, linear, 10)

    @pytest.mark.parametrize("seed", range(6))
    def test_every_level_on_random_points(self, kit, seed):
        _check_all_levels(kit, random_linear_part(1 + seed % 3, seed), 10)

    def test_liouville_near_resonance_is_counted(self, kit):
        ledger = kit.linearize.accumulation_ledger(liouville_linear_part(), 10)
        report = kit.linearize.counting_lemma_check(ledger, 2, [9])
        assert report.count == 1
        assert report.holds

    def test_bound_is_zero_up_to_threshold(self, kit):
        ledger = kit.linearize.accumulation_ledger(_expanding(), 6)
        assert kit.linearize.counting_lemma_check(ledger, 4, [3]).bound == 0

    def test_threshold_beyond_ledger(self, kit):
        ledger = kit.linearize.accumulation_ledger(_expanding(), 4)
        with pytest.raises(HorizonError):
            kit.linearize.counting_lemma_check(ledger, 6, [3])


class TestSiegelBound:
    def test_expanding_scalar_with_analytic_weight(self, kit):
        ledger = kit.linearize.accumulation_ledger(_expanding(), 8)
        report = kit.linearize.siegel_bound_check(
            ledger, _expanding(), Weight.constant(8, 1), _square(8)
        )
        assert report.holds
        assert report.scale == 1
        assert report.checked == 7

    @pytest.mark.parametrize("seed", range(12))
    def test_random_maps(self, kit, seed):
        dim = 1 + seed % 3
        linear = random_linear_part(dim, seed)
        ledger = kit.linearize.accumulation_ledger(linear, 8)
        g_hat = random_series(dim, 8, seed)
        report = kit.linearize.siegel_bound_check(ledger, linear, Weight.gevrey(2, 8), g_hat)
        assert report.holds
        assert report.checked > 0
        assert report.scale >= 1
        assert report.literal_holds == (report.literal_violations == 0)
        assert report.literal_holds == (report.first_literal_violation is None)

    def test_literal_comparison_on_expanding_scalar(self, kit):
        ledger = kit.linearize.accumulation_ledger(_expanding(), 8)
        report = kit.linearize.siegel_bound_check(
            ledger, _expanding(), Weight.constant(8), _square(8)
        )
        assert report.literal_holds
        assert report.literal_violations == 0

    def test_large_first_weight_term_is_divided_out(self, kit):
        ledger = kit.linearize.accumulation_ledger(_expanding(), 8)
        plain = kit.linearize.siegel_bound_check(
            ledger, _expanding(), Weight.constant(8), _square(8)
        )
        scaled = kit.linearize.siegel_bound_check(
            ledger, _expanding(), Weight.constant(8, 5), _square(8)
        )
        assert scaled.scale == plain.scale
        assert scaled.lam == plain.lam

    def test_needs_strictly_fdb_weight(self, kit):
        ledger = kit.linearize.accumulation_ledger(_expanding(), 8)
        m = Weight.from_values([1, 100, 1, 1, 1, 1, 1, 1])
        with pytest.raises(WeightAssumptionError):
            kit.linearize.siegel_bound_check(ledger, _expanding(), m, _square(8))


class TestDomination:
    def test_expanding_scalar_has_no_loss(self, kit):
        omega = kit.linearize.check_nonresonance(_expanding(), 16)
        for policy in (DominationPolicy.CONSTANT, DominationPolicy.MINIMAL):
            cert = kit.linearize.dominating_weight(omega, policy)
            assert cert.class_tag == ClassTag.NO_LOSS
            assert cert.certified_up_to == 15
        assert kit.linearize.dominating_weight(omega, DominationPolicy.CONSTANT).a == 0

    def test_poincare_has_no_loss(self, kit):
        omega = kit.linearize.check_nonresonance(poincare_linear_part(), 8)
        cert = kit.linearize.dominating_weight(omega, DominationPolicy.CONSTANT)
        assert cert.class_tag == ClassTag.NO_LOSS

    def test_diophantine_table(self, kit):
        cert = kit.linearize.dominating_weight(diophantine_omega(256), DominationPolicy.CONSTANT)
        assert cert.class_tag == ClassTag.NO_LOSS
        assert cert.certified_up_to == 255

    def test_bruno_table(self, kit):
        cert = kit.linearize.dominating_weight(bruno_omega(256), DominationPolicy.CONSTANT)
        assert cert.weight.is_constant_one()

    def test_arbitrary_table_needs_a_general_weight(self, kit):
        with pytest.raises(DominationError):
            kit.linearize.dominating_weight(arbitrary_omega(256), DominationPolicy.CONSTANT)
        cert = kit.linearize.dominating_weight(arbitrary_omega(256))
        assert cert.class_tag == ClassTag.GENERAL
        assert cert.certified_up_to == 255

    def test_gevrey_divisors(self, kit):
        omega = gevrey_divisor_omega(256)
        increments = kit.linearize.bruno_increments(omega)
        assert len(increments) == 8
        for t in increments:
            assert abs(t - mpmath.log(2) / 2) < mpmath.mpf("1e-30")
        fitted = kit.linearize.fitted_gevrey_delta(omega)
        assert abs(fitted - mpmath.mpf("0.5")) < mpmath.mpf("0.05")
        cert = kit.linearize.dominating_weight(omega, DominationPolicy.GEVREY)
        assert cert.class_tag == ClassTag.GEVREY_LOSS

    def test_partial_sums_accumulate(self, kit):
        omega = gevrey_divisor_omega(16)
        sums = kit.linearize.bruno_partial_sums(omega)
        assert abs(sums[-1] - 2 * mpmath.log(2)) < mpmath.mpf("1e-30")

    def test_short_table_rejected(self, kit):
        with pytest.raises(HorizonError):
            kit.linearize.bruno_increments(ResonanceReport.from_omega({2: 1, 3: 1}))


class TestRegularity:
    def _no_loss(self, kit):
        omega = kit.linearize.check_nonresonance(_expanding(), 16)
        return kit.linearize.dominating_weight(omega, DominationPolicy.CONSTANT)

    def test_gevrey_keeps_its_class(self, kit):
        report = kit.linearize.classify_regularity(Weight.gevrey(2, 12), self._no_loss(kit))
        assert report.tag == RegularityTag.SAME_CLASS
        assert report.label == "G^2"
        assert report.escalations == 0

    def test_analytic_weight_is_convergent(self, kit):
        report = kit.linearize.classify_regularity(Weight.constant(12), self._no_loss(kit))
        assert report.tag == RegularityTag.CONVERGENT

    def test_gevrey_loss_adds_delta(self, kit):
        cert = kit.linearize.dominating_weight(
            gevrey_divisor_omega(16), DominationPolicy.GEVREY, delta="1/2"
        )
        report = kit.linearize.classify_regularity(Weight.gevrey(2, 12), cert)
        assert report.tag == RegularityTag.GEVREY
        assert report.label == "G^2.5"
        assert report.gevrey_s == Fraction(5, 2)

    def test_escalation_budget(self, kit):
        m = example_weight(ExampleKind.FDB_NOT_LOG, 12)
        with pytest.raises(EscalationBudgetError) as exc:
            kit.linearize.classify_regularity(m, self._no_loss(kit))
        assert exc.value.attempts == 3


class TestBorelAndTables:
    def test_borel_exponent_of_expanding_scalar(self, kit):
        phi = kit.linearize.formal_linearize(_expanding(), _square(8))
        report = kit.linearize.borel_seminorm_exponent(phi, Weight.constant(8), Weight.constant(8))
        assert report.finite
        assert report.exponent <= 0
        assert report.argmax == [2]

    def test_coefficient_table_rows(self, kit):
        ledger = kit.linearize.accumulation_ledger(_expanding(), 4)
        phi = kit.linearize.formal_linearize(_expanding(), _square(4))
        rows = kit.linearize.coefficient_table(ledger, phi, Weight.constant(4), Weight.constant(4))
        assert rows[0] == TABLE_HEADER
        assert len(rows) == 5
        assert rows[2][:2] == ["2", "2"]

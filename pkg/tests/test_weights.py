"""Tests for weight predicates, regularization and the separating examples"""

import random
from fractions import Fraction
from math import factorial

import mpmath
import pytest

from sternbergkit import (
    AnalyticTag,
    ExampleKind,
    GeneratorKind,
    HorizonError,
    Property,
    ValidationError,
    Weight,
    WeightAssumptionError,
)
from sternbergkit.arith import to_mpf
from sternbergkit.fixtures import example_weight, logpow_scale
from sternbergkit.types import WeightDocument


def _from_big(big):
    return Weight.from_values([Fraction(b, factorial(n)) for n, b in enumerate(big, start=1)])


class TestPredicates:
    @pytest.mark.parametrize("s", [2, 3])
    @pytest.mark.parametrize(
        "prop",
        [Property.LOG_CONVEX, Property.STRONGLY_SUBMULT, Property.STRICT_FDB, Property.FDB,
         Property.ASM, Property.ALMOST_INCREASING],
    )
    def test_gevrey_satisfies_chain_with_unit_constant(self, kit, s, prop):
        report = kit.weights.check_property(Weight.gevrey(s, 12), prop)
        assert report.holds_to_horizon
        if report.constant is not None:
            assert report.constant == 1

    def test_log_convex_counts_first_quotient(self, kit):
        # m_1^2 <= m_0 m_2 with m_0 = 1
        report = kit.weights.check_property(Weight.from_values([2, 3, 5, 8]), Property.LOG_CONVEX)
        assert not report.holds_to_horizon
        assert report.witness.indices == [0, 1, 2]

    def test_fdb_not_log_fails_log_convexity_only(self, kit):
        weight = example_weight(ExampleKind.FDB_NOT_LOG, 8)
        log_convex = kit.weights.check_property(weight, Property.LOG_CONVEX)
        assert not log_convex.holds_to_horizon
        assert log_convex.witness.indices == [2, 3, 4]
        assert kit.weights.evaluate_witness(weight, log_convex)
        assert kit.weights.check_property(weight, Property.BLOCK_CONVEX).holds_to_horizon
        assert kit.weights.check_property(weight, Property.FDB).holds_to_horizon

    def test_fdb_not_asm_separates(self, kit):
        weight = example_weight(ExampleKind.FDB_NOT_ASM, 20)
        strict = kit.weights.check_property(weight, Property.STRICT_FDB, lam=1)
        assert strict.holds_to_horizon
        assert kit.weights.check_property(weight, Property.STRICT_FDB).constant == 1
        asm = kit.weights.check_property(weight, Property.ASM, lam=1)
        assert not asm.holds_to_horizon
        assert asm.witness.indices == [2, 1, 1]
        assert kit.weights.evaluate_witness(weight, asm)

    def test_fdb_not_asm_first_term_is_inverse_scale(self):
        weight = example_weight(ExampleKind.FDB_NOT_ASM, 20)
        scale = logpow_scale(20)
        assert weight.generator.params == {"scale": str(scale)}
        assert mpmath.almosteq(to_mpf(weight.m(1)), mpmath.mpf(1) / scale)

    def test_asm_not_fdb_fails_fdb_on_whole_grid(self, kit):
        weight = example_weight(ExampleKind.ASM_NOT_FDB, 16)
        fdb = kit.weights.check_property(weight, Property.FDB)
        assert not fdb.holds_to_horizon
        assert fdb.lam == 16
        assert fdb.witness.indices == [4, 4, 4, 4, 4]
        assert kit.weights.evaluate_witness(weight, fdb)
        asm = kit.weights.check_property(weight, Property.ASM)
        assert asm.holds_to_horizon
        assert asm.constant == 1

    @pytest.mark.parametrize("lam", [1, 2, 4, 8, 16])
    def test_asm_not_fdb_fails_fdb_at_each_lambda(self, kit, lam):
        weight = example_weight(ExampleKind.ASM_NOT_FDB, 16)
        fdb = kit.weights.check_property(weight, Property.FDB, lam=lam)
        assert not fdb.holds_to_horizon
        assert kit.weights.evaluate_witness(weight, fdb)

    def test_asm_not_fdb_almost_increasing(self, kit):
        weight = example_weight(ExampleKind.ASM_NOT_FDB, 16)
        report = kit.weights.check_property(weight, Property.ALMOST_INCREASING, lam=8)
        assert report.holds_to_horizon

    def test_asm_not_fdb_first_stage_quotients(self):
        weight = example_weight(ExampleKind.ASM_NOT_FDB, 16)
        slope = 2 ** 43
        assert [weight.mu(k) for k in range(1, 5)] == [1, 2 * slope, 3 * slope, 4 * slope]
        level = weight.mu(5) / 128
        assert weight.mu(8) == 64 * 2 * level
        assert weight.mu(9) == 64 * 3 * level
        assert weight.mu(16) == 64 * 4 * level

    def test_asm_not_diff_fails_diff_stability(self, kit):
        weight = example_weight(ExampleKind.ASM_NOT_DIFF, 8)
        report = kit.weights.check_property(weight, Property.DIFF_STABLE)
        assert not report.holds_to_horizon
        assert report.witness.indices == [8, 4]
        assert kit.weights.evaluate_witness(weight, report)

    def test_failed_search_reports_last_lambda(self, kit):
        weight = example_weight(ExampleKind.FDB_NOT_ASM, 20)
        report = kit.weights.check_property(weight, Property.ASM, grid=[1, 2])
        assert not report.holds_to_horizon
        assert report.lam == 2

    def test_short_horizon_rejected(self, kit):
        with pytest.raises(HorizonError) as exc:
            kit.weights.check_property(Weight.constant(3), Property.STRICT_FDB)
        assert exc.value.required == 4

    def test_nonpositive_lambda_rejected(self, kit):
        with pytest.raises(ValidationError):
            kit.weights.check_property(Weight.constant(8), Property.ASM, lam=0)

    def test_nonpositive_weight_rejected(self):
        with pytest.raises(ValidationError):
            Weight.from_values([1, 0, 1])


class TestImplicationChain:
    @pytest.mark.parametrize("s", [1, "3/2", 2, 3])
    def test_chain_holds_on_gevrey_weights(self, kit, s):
        reports = kit.weights.implication_matrix(Weight.gevrey(s, 12))
        assert len(reports) == len(Property)
        assert all(r.holds_to_horizon for r in reports[:5])

    def test_chain_holds_on_constant_weight(self, kit):
        reports = kit.weights.implication_matrix(Weight.constant(12))
        by_prop = {r.property: r for r in reports}
        assert by_prop[Property.FDB].holds_to_horizon
        assert not by_prop[Property.STRONGLY_NONANALYTIC].holds_to_horizon

    @pytest.mark.parametrize(
        "kind, horizon",
        [
            (ExampleKind.ASM_NOT_FDB, 16),
            (ExampleKind.FDB_NOT_LOG, 8),
            (ExampleKind.FDB_NOT_ASM, 20),
            (ExampleKind.ASM_NOT_DIFF, 8),
        ],
    )
    def test_chain_does_not_break_on_examples(self, kit, kind, horizon):
        kit.weights.implication_matrix(example_weight(kind, horizon))

    def test_matrix_at_fixed_lambda(self, kit):
        weight = example_weight(ExampleKind.FDB_NOT_ASM, 20)
        reports = kit.weights.implication_matrix(weight, lam=1)
        by_prop = {r.property: r for r in reports}
        assert by_prop[Property.STRICT_FDB].holds_to_horizon
        assert by_prop[Property.STRICT_FDB].lam == 1
        assert not by_prop[Property.ASM].holds_to_horizon

    def test_matrix_needs_horizon_eight(self, kit):
        with pytest.raises(HorizonError):
            kit.weights.implication_matrix(Weight.gevrey(2, 7))

    @pytest.mark.parametrize(
        "kind, horizon",
        [
            (ExampleKind.ASM_NOT_FDB, 16),
            (ExampleKind.FDB_NOT_LOG, 8),
            (ExampleKind.FDB_NOT_ASM, 20),
            (ExampleKind.ASM_NOT_DIFF, 8),
        ],
    )
    def test_shift_duality_agrees_on_examples(self, kit, kind, horizon):
        assert kit.weights.shift_duality_check(example_weight(kind, horizon)).agree

    def test_shift_duality_on_both_sides_of_separation(self, kit):
        asm_not_fdb = kit.weights.shift_duality_check(example_weight(ExampleKind.ASM_NOT_FDB, 16))
        assert not asm_not_fdb.fdb.holds_to_horizon
        assert not asm_not_fdb.asm_of_shift.holds_to_horizon
        fdb_not_asm = kit.weights.shift_duality_check(example_weight(ExampleKind.FDB_NOT_ASM, 20))
        assert fdb_not_asm.fdb.holds_to_horizon
        assert fdb_not_asm.asm_of_shift.holds_to_horizon

    @pytest.mark.parametrize("s", [1, "3/2", 2, 3])
    def test_shift_duality_agrees_on_gevrey(self, kit, s):
        report = kit.weights.shift_duality_check(Weight.gevrey(s, 12))
        assert report.agree
        assert report.fdb.holds_to_horizon

    @pytest.mark.parametrize("c", [1, 3])
    def test_shift_duality_agrees_on_constant_weight(self, kit, c):
        report = kit.weights.shift_duality_check(Weight.constant(12, c))
        assert report.agree
        assert report.fdb.holds_to_horizon

    def test_left_shift_drops_first_value(self, kit):
        shifted = kit.weights.left_shift(Weight.gevrey(2, 6))
        assert shifted.values == tuple(Fraction(factorial(n)) for n in range(2, 7))


class TestInequalities:
    def test_weak_submultiplicativity_on_gevrey(self, kit):
        report = kit.weights.weak_submultiplicativity_check(Weight.gevrey(2, 10))
        assert report.holds
        assert report.checked == 45

    def test_closure_of_constant_weight(self, kit):
        report = kit.weights.closure_report(Weight.constant(8))
        assert report.holomorphically_closed
        assert report.composition_closed
        assert report.inverse_closed
        assert report.derivation_closed

    def test_composition_hypothesis_witness(self, kit):
        report = kit.weights.composition_hypothesis(Weight.constant(4, 2), Weight.constant(4), 1)
        assert not report.holds
        assert report.witness.indices == [1, 1]

    def test_composition_hypothesis_holds_for_equal_constants(self, kit):
        assert kit.weights.composition_hypothesis(Weight.constant(6), Weight.constant(6), 1).holds


class TestRegularization:
    def test_minorant_interpolates_geometrically(self, kit):
        minorant = kit.weights.log_convex_minorant(_from_big([4, 2, 16, 4]))
        assert minorant.big_m(1) == 4
        assert minorant.big_m(2) == 2
        assert abs(minorant.big_m(3) - 2 * mpmath.sqrt(2)) < mpmath.mpf("1e-30")
        assert abs(minorant.big_m(4) - 4) < mpmath.mpf("1e-30")

    def test_minorant_keeps_log_convex_weight(self, kit):
        weight = Weight.gevrey(2, 8)
        minorant = kit.weights.log_convex_minorant(weight)
        assert minorant.values == weight.values

    @pytest.mark.parametrize("seed", range(50))
    def test_minorant_matches_chord_oracle(self, kit, seed):
        rng = random.Random(seed)
        size = rng.randint(3, 20)
        big = [rng.randint(1, 10 ** 6) for _ in range(size)]
        minorant = kit.weights.log_convex_minorant(_from_big(big))

        logs = [None] + [mpmath.log(b) for b in big]
        for j in range(1, size + 1):
            expected = logs[j]
            for i in range(1, j):
                for k in range(j + 1, size + 1):
                    chord = ((k - j) * logs[i] + (j - i) * logs[k]) / (k - i)
                    expected = min(expected, chord)
            actual = mpmath.log(to_mpf(minorant.big_m(j)))
            assert abs(actual - expected) < mpmath.mpf("1e-25")

    def test_star_product_of_gevrey_weights(self, kit):
        product = kit.weights.star_product(Weight.gevrey(2, 8), Weight.gevrey_factor("1/2", 8))
        assert product.generator.kind == GeneratorKind.GEVREY
        assert product.generator.params["s"] == "5/2"

    def test_star_product_needs_equal_horizons(self, kit):
        with pytest.raises(HorizonError):
            kit.weights.star_product(Weight.gevrey(2, 8), Weight.gevrey(2, 6))

    def test_characteristic_coefficients_dominate(self, kit):
        report = kit.weights.characteristic_coefficients(Weight.constant(8))
        assert len(report.coefficients) == 8
        assert report.coefficients[1] >= Fraction(1, 4)
        for s, bound in zip(report.coefficients, report.lower_bounds):
            assert s >= bound

    def test_characteristic_coefficients_need_log_convexity(self, kit):
        with pytest.raises(WeightAssumptionError):
            kit.weights.characteristic_coefficients(example_weight(ExampleKind.FDB_NOT_LOG, 8))


class TestAnalyticType:
    def test_constant_weight_contains_analytic(self, kit):
        report = kit.weights.classify_analytic_type(Weight.constant(16))
        assert report.tag == AnalyticTag.CONTAINS_ANALYTIC
        assert report.equals_analytic
        assert report.horizon_limited

    def test_gevrey_is_beyond_analytic(self, kit):
        assert kit.weights.classify_analytic_type(Weight.gevrey(2, 16)).tag == (
            AnalyticTag.BEYOND_ANALYTIC
        )

    def test_inverse_factorial_is_sub_analytic(self, kit):
        assert kit.weights.classify_analytic_type(Weight.gevrey(0, 16)).tag == (
            AnalyticTag.SUB_ANALYTIC
        )

    def test_slow_logarithmic_decay_is_sub_analytic(self, kit):
        assert kit.weights.classify_analytic_type(Weight.logpow(20)).tag == (
            AnalyticTag.SUB_ANALYTIC
        )


class TestExamplesAndDocuments:
    def test_example_horizon_minimum(self):
        with pytest.raises(HorizonError):
            example_weight(ExampleKind.FDB_NOT_LOG, 4)

    def test_example_regenerates_at_longer_horizon(self, kit):
        short = kit.weights.generate_example(ExampleKind.ASM_NOT_DIFF, 8)
        longer = short.with_horizon(12)
        assert longer.values[:8] == short.values

    def test_custom_table_cannot_be_extended(self):
        with pytest.raises(HorizonError):
            Weight.from_values([1, 2, 3]).with_horizon(5)

    def test_document_regenerates_gevrey(self, kit):
        doc = WeightDocument(
            generator={"kind": "gevrey", "params": {"s": "2"}},
            values=["0"] * 6,
            horizon=6,
        )
        weight = kit.weights.from_document(doc)
        assert weight.values == tuple(Fraction(factorial(n)) for n in range(1, 7))

    def test_document_with_plain_values(self, kit):
        doc = WeightDocument(values=["1", "3/2", "9/4"], horizon=3)
        weight = kit.weights.from_document(doc)
        assert weight.values == (Fraction(1), Fraction(3, 2), Fraction(9, 4))
        assert kit.weights.to_document(weight).values == ["1", "3/2", "9/4"]

    def test_scaled_logpow_regenerates_with_its_scale(self):
        weight = Weight.logpow(8, 5)
        longer = weight.with_horizon(12)
        assert longer.generator.params == {"scale": "5"}
        assert longer.values[:8] == weight.values

    def test_logpow_scale_must_be_positive(self):
        with pytest.raises(ValidationError):
            Weight.logpow(8, 0)


class TestRepresentative:
    def test_large_first_term_is_divided_out(self, kit):
        weight = Weight.from_values([3, 9, 27, 81])
        assert weight.representative().values == (1, 3, 9, 27)
        report = kit.weights.check_property(weight, Property.STRICT_FDB)
        assert report.notes == ["evaluated on m / m_1"]

    def test_small_first_term_is_kept(self, kit):
        weight = Weight.logpow(8, 4)
        assert weight.representative() is weight
        report = kit.weights.check_property(weight, Property.ASM, lam=16)
        assert report.notes == ["evaluated on m"]

    def test_normalization_can_be_disabled(self, kit):
        weight = Weight.from_values([2, 2, 2, 2])
        as_given = kit.weights.check_property(weight, Property.STRICT_FDB, lam=1, normalize=False)
        assert not as_given.holds_to_horizon
        assert kit.weights.check_property(weight, Property.STRICT_FDB, lam=1).holds_to_horizon

"""Extension property: brute force, closed forms, conditions, orbit checks,
and the canonical level decomposition."""

from fractions import Fraction

import pytest

from posetmetrics.errors import PredicateUnavailable, ValidationError
from posetmetrics.mep import (
    canonical_decomposition,
    condition_report,
    extend_to_isometry,
    level_class_bound,
    mep_brute_force,
    mep_p_support_predicate,
    mep_predicate,
    preserves_p_support,
    preserves_weight,
    single_orbit_check,
)
from posetmetrics.posets import Poset, WeightFunction, powers_of_two_weight
from posetmetrics.spaces import AlphabetSpec, FieldSpec, LinearCode, enumerate_codes, linear_maps

F2 = FieldSpec(2)
CHAIN2 = Poset.chain(("1", "2"))
ANTI2 = Poset.antichain(("1", "2"))
ANTI3 = Poset.antichain(("a", "b", "c"))
MIXED = Poset.from_covers(("a", "b", "c"), [("a", "b")])
SP21 = AlphabetSpec.uniform(F2, CHAIN2.elements, 1)
ONES2 = WeightFunction.ones(CHAIN2.elements)


class TestPreservation:
    def test_identity_preserves(self):
        code = LinearCode.from_rows(SP21, [(1, 1)])
        assert preserves_weight(SP21, CHAIN2, ONES2, code, code.basis)
        assert preserves_p_support(SP21, CHAIN2, code, code.basis)

    def test_zero_map_on_nonzero_code_fails(self):
        code = LinearCode.from_rows(SP21, [(1, 1)])
        assert not preserves_weight(SP21, CHAIN2, ONES2, code, ((0, 0),))

    def test_doubling_weights_tie_weight_to_support(self):
        omega = powers_of_two_weight(MIXED)
        space = AlphabetSpec.uniform(F2, MIXED.elements, 1)
        for code in enumerate_codes(space, max_dim=2):
            if code.dim == 0:
                continue
            for images in linear_maps(code, space):
                assert preserves_weight(space, MIXED, omega, code, images) == (
                    preserves_p_support(space, MIXED, code, images)
                )

    def test_weight_preserving_maps_are_injective(self):
        # checked on the two smallest spaces rather than assumed
        for poset, labels in ((CHAIN2, ("1", "2")), (ANTI2, ("1", "2"))):
            space = AlphabetSpec.uniform(F2, labels, 1)
            omega = WeightFunction.ones(labels)
            for code in enumerate_codes(space):
                if code.dim == 0:
                    continue
                for images in linear_maps(code, space):
                    if preserves_weight(space, poset, omega, code, images):
                        seen = set()
                        for coeffs, _vec in code.coefficient_pairs():
                            img = tuple(
                                sum(c * row[t] for c, row in zip(coeffs, images)) % 2
                                for t in range(space.total_dim)
                            )
                            assert img not in seen
                            seen.add(img)


class TestExtension:
    def test_identity_extends_to_identity(self):
        code = LinearCode.from_rows(SP21, [(1, 1)])
        iso = extend_to_isometry(SP21, CHAIN2, ONES2, code, code.basis)
        assert iso is not None and iso.apply((1, 1)) == (1, 1)

    def test_chain_maps_always_extend(self):
        space = AlphabetSpec(F2, ("1", "2"), (1, 2))
        omega = WeightFunction.ones(("1", "2"))
        for code in enumerate_codes(space):
            if code.dim == 0:
                continue
            for images in linear_maps(code, space):
                if preserves_weight(space, CHAIN2, omega, code, images):
                    assert extend_to_isometry(space, CHAIN2, omega, code, images) is not None

    def test_threshold_counterexample_does_not_extend(self):
        space = AlphabetSpec.uniform(F2, ANTI3.elements, 2)
        omega = WeightFunction.ones(ANTI3.elements)
        verdict = mep_brute_force(space, ANTI3, omega, max_dim=2)
        code, images = verdict.counterexample
        assert preserves_weight(space, ANTI3, omega, code, images)
        assert extend_to_isometry(space, ANTI3, omega, code, images) is None


class TestBruteForce:
    def test_single_coordinate_holds(self):
        one = Poset.chain(("a",))
        space = AlphabetSpec.uniform(F2, ("a",), 1)
        assert mep_brute_force(space, one, WeightFunction.ones(("a",))).holds

    def test_two_equal_blocks_hold(self):
        space = AlphabetSpec.uniform(F2, ANTI2.elements, 2)
        verdict = mep_brute_force(space, ANTI2, ONES2)
        assert verdict.holds and verdict.complete

    def test_three_equal_planes_fail(self):
        space = AlphabetSpec.uniform(F2, ANTI3.elements, 2)
        verdict = mep_brute_force(space, ANTI3, WeightFunction.ones(ANTI3.elements), max_dim=3)
        assert not verdict.holds
        assert verdict.counterexample[0].dim == 2

    def test_mixed_dims_fail_with_unit_weights(self):
        # same weight class with blocks of different sizes cannot extend
        space = AlphabetSpec(F2, ("1", "2"), (1, 2))
        verdict = mep_brute_force(space, ANTI2, ONES2)
        assert not verdict.holds

    def test_counterexample_is_deterministic(self):
        space = AlphabetSpec.uniform(F2, ANTI3.elements, 2)
        omega = WeightFunction.ones(ANTI3.elements)
        first = mep_brute_force(space, ANTI3, omega, max_dim=2)
        second = mep_brute_force(space, ANTI3, omega, max_dim=2)
        assert first.counterexample == second.counterexample

    def test_antichain_reduces_to_weight_classes(self):
        # extension holds exactly when UDP does and each class extends alone
        omega = WeightFunction(("a", "b", "c"), (Fraction(1), Fraction(1), Fraction(2)))
        space = AlphabetSpec.uniform(F2, ANTI3.elements, 1)
        whole = mep_brute_force(space, ANTI3, omega)
        from posetmetrics.posets import udp_check

        udp_ok, _ = udp_check(ANTI3, omega)
        classes = {}
        for label in ANTI3.elements:
            classes.setdefault(omega.of(label), []).append(label)
        per_class = True
        for labels in classes.values():
            sub_space = AlphabetSpec.uniform(F2, tuple(labels), 1)
            sub_poset = Poset.antichain(tuple(labels))
            sub = mep_brute_force(sub_space, sub_poset, WeightFunction.ones(tuple(labels)))
            per_class = per_class and sub.holds
        assert whole.holds == (udp_ok and per_class)


class TestMatrixScanCrossCheck:
    @pytest.mark.parametrize("poset", [CHAIN2, ANTI2, MIXED])
    def test_structured_and_matrix_scan_verdicts_agree(self, poset):
        # an extension search over the raw invertible-matrix scan must reach
        # the same verdict as the structured-group search, code by code
        from posetmetrics.isometries import brute_force_isometries, weight_sum_functional

        space = AlphabetSpec.uniform(F2, poset.elements, 1)
        omega = WeightFunction.ones(poset.elements)
        matrices = brute_force_isometries(space, poset, weight_sum_functional(poset, omega))
        scan_holds = True
        witness = None
        for code in enumerate_codes(space):
            if code.dim == 0:
                continue
            for images in linear_maps(code, space):
                if not preserves_weight(space, poset, omega, code, images):
                    continue
                extendable = any(
                    all(
                        tuple(sum(m[r][c] * b[c] for c in range(len(b))) % 2 for r in range(len(b)))
                        == img
                        for b, img in zip(code.basis, images)
                    )
                    for m in matrices
                )
                if not extendable:
                    scan_holds = False
                    witness = (code, images)
                    break
            if not scan_holds:
                break
        verdict = mep_brute_force(space, poset, omega)
        assert verdict.holds == scan_holds
        if witness is not None:
            assert extend_to_isometry(space, poset, omega, *witness) is None


class TestPredicates:
    def test_chain_predicate_always_true(self):
        space = AlphabetSpec(F2, ("1", "2"), (1, 2))
        assert mep_predicate(space, CHAIN2, ONES2).holds

    def test_threshold_class_bound(self):
        space = AlphabetSpec.uniform(F2, ANTI3.elements, 2)
        ones = WeightFunction.ones(ANTI3.elements)
        assert not mep_predicate(space, ANTI3, ones).holds
        ok, witness = level_class_bound(space, ANTI3, ones)
        assert not ok and witness[2] == ("a", "b", "c")

    def test_two_planes_pass_the_bound(self):
        space = AlphabetSpec.uniform(F2, ANTI2.elements, 2)
        assert mep_predicate(space, ANTI2, ONES2).holds

    def test_refuses_without_a_closed_form(self):
        space = AlphabetSpec.uniform(F2, MIXED.elements, 1)
        omega = WeightFunction.from_map({"a": 1, "b": "1/2", "c": 2})
        with pytest.raises(PredicateUnavailable):
            mep_predicate(space, MIXED, omega)

    def test_agreement_with_brute_force_on_weighted_hierarchical(self):
        vee = Poset.from_covers(("a", "b", "c"), [("a", "b"), ("a", "c")])
        space = AlphabetSpec.uniform(F2, vee.elements, 1)
        for omega in (
            WeightFunction.ones(vee.elements),
            WeightFunction.from_map({"a": "1/2", "b": 1, "c": 1}),
            WeightFunction.from_map({"a": 1, "b": 2, "c": 3}),
        ):
            assert mep_predicate(space, vee, omega).holds == mep_brute_force(
                space, vee, omega
            ).holds

    def test_support_mode_always_holds(self):
        for poset in (CHAIN2, ANTI2, MIXED):
            space = AlphabetSpec.uniform(F2, poset.elements, 1)
            assert mep_p_support_predicate(space, poset).holds
            assert mep_brute_force(space, poset, mode="support").holds


class TestConditions:
    def test_unit_weights_tie_the_two_dim_conditions(self):
        from posetmetrics.posets import all_posets_on

        for poset in all_posets_on(("a", "b", "c")):
            space = AlphabetSpec.uniform(F2, poset.elements, 1)
            report = condition_report(space, poset, WeightFunction.ones(poset.elements))
            assert report.udp_matched_dims == report.level_matched_dims

    def test_chain_with_mixed_dims(self):
        space = AlphabetSpec(F2, ("1", "2"), (1, 2))
        report = condition_report(space, CHAIN2, ONES2)
        assert report.udp_matched_dims and report.level_matched_dims

    def test_antichain_mixed_dims_fails_level_condition(self):
        space = AlphabetSpec(F2, ("1", "2"), (1, 2))
        report = condition_report(space, ANTI2, ONES2)
        assert not report.level_matched_dims
        assert not report.udp_matched_dims
        assert report.common_nonzero_block


class TestSingleOrbit:
    def test_single_coordinate_transitive(self):
        one = Poset.chain(("a",))
        space = AlphabetSpec.uniform(FieldSpec(3), ("a",), 1)
        ok, _ = single_orbit_check(space, one, WeightFunction.ones(("a",)))
        assert ok

    def test_matches_the_condition_on_hierarchical_instances(self):
        for poset, dims in ((CHAIN2, (1, 2)), (ANTI2, (1, 1)), (ANTI2, (1, 2))):
            space = AlphabetSpec(F2, poset.elements, dims)
            report = condition_report(space, poset, ONES2)
            ok, _ = single_orbit_check(space, poset, ONES2)
            assert ok == report.udp_matched_dims

    def test_mixed_dims_witness(self):
        space = AlphabetSpec(F2, ("1", "2"), (1, 2))
        ok, witness = single_orbit_check(space, ANTI2, ONES2)
        assert not ok and witness is not None
        a, b = witness
        from posetmetrics.spaces import weight as wt

        assert wt(space, ANTI2, ONES2, a) == wt(space, ANTI2, ONES2, b)


class TestCanonicalDecomposition:
    def test_chain_span_example(self):
        code = LinearCode.from_rows(SP21, [(1, 1)])
        phi, parts = canonical_decomposition(SP21, CHAIN2, code)
        image = LinearCode.from_rows(SP21, [phi.apply(r) for r in code.basis])
        assert image == LinearCode.from_rows(SP21, [(0, 1)])
        assert parts[0].dim == 0
        assert parts[1] == LinearCode.from_rows(SP21, [(0, 1)])

    def test_level_supported_code_can_stay_put(self):
        code = LinearCode.from_rows(SP21, [(1, 0)])
        phi, parts = canonical_decomposition(SP21, CHAIN2, code)
        assert len(parts) == 1 and parts[0] == code
        assert phi.apply((0, 1)) == (0, 1)

    def test_zero_code(self):
        phi, parts = canonical_decomposition(SP21, CHAIN2, LinearCode.zero(SP21))
        assert parts == [] and phi.lam == (0, 1)

    def test_requires_hierarchy(self):
        space = AlphabetSpec.uniform(F2, MIXED.elements, 1)
        with pytest.raises(ValidationError):
            canonical_decomposition(space, MIXED, LinearCode.zero(space))

    def test_full_replay_on_wedge(self):
        wedge = Poset.from_covers(("a", "b", "c"), [("a", "c"), ("b", "c")])
        space = AlphabetSpec.uniform(F2, wedge.elements, 1)
        levels = wedge.level_sets()
        for code in enumerate_codes(space):
            phi, parts = canonical_decomposition(space, wedge, code)
            assert phi.lam == (0, 1, 2)
            image = LinearCode.from_rows(space, [phi.apply(r) for r in code.basis])
            combined = LinearCode.from_rows(space, [r for p in parts for r in p.basis])
            assert image == combined
            assert sum(p.dim for p in parts) == code.dim
            for idx, part in enumerate(parts, start=1):
                for row in part.basis:
                    assert space.support(row) <= levels[idx - 1]

"""Structured isometries: functionals, enumeration, oracle agreement, decomposition."""

import pytest

from posetmetrics import fields
from posetmetrics.errors import PropertyViolation, ValidationError
from posetmetrics.isometries import (
    Isometry,
    SupportFunctional,
    admissible_automorphisms,
    brute_force_isometries,
    build_isometry,
    check_support_functional,
    decompose,
    group_order,
    p_support_functional,
    support_isometry_group,
    weight_automorphisms,
    weight_isometry_group,
    weight_sum_functional,
)
from posetmetrics.posets import Poset, WeightFunction, compose_perms, invert_perm
from posetmetrics.spaces import AlphabetSpec, FieldSpec, p_support

F2 = FieldSpec(2)
F3 = FieldSpec(3)
CHAIN2 = Poset.chain(("1", "2"))
ANTI2 = Poset.antichain(("1", "2"))
SP21 = AlphabetSpec.uniform(F2, ("1", "2"), 1)
ONES2 = WeightFunction.ones(("1", "2"))


class TestSupportFunctionals:
    @pytest.mark.parametrize(
        "poset,omega",
        [
            (CHAIN2, ONES2),
            (ANTI2, WeightFunction.from_map({"1": "1/2", "2": 3})),
            (Poset.from_covers(("a", "b", "c"), [("a", "b")]), WeightFunction.ones(("a", "b", "c"))),
        ],
    )
    def test_weight_sum_satisfies_all_conditions(self, poset, omega):
        ok, violations = check_support_functional(weight_sum_functional(poset, omega), poset)
        assert ok, violations

    def test_support_closure_satisfies_all_conditions(self):
        ok, _ = check_support_functional(p_support_functional(CHAIN2), CHAIN2)
        assert ok

    def test_raw_cardinality_breaks_closure_invariance(self):
        raw = SupportFunctional("raw-size", lambda s: len(s), lambda a, b: a <= b)
        ok, violations = check_support_functional(raw, CHAIN2)
        assert not ok
        assert violations["closure_invariant"] is not None

    def test_negated_size_breaks_monotonicity(self):
        neg = SupportFunctional(
            "negated",
            lambda s: -len(CHAIN2.ideal_closure(s)),
            lambda a, b: a <= b,
        )
        ok, violations = check_support_functional(neg, CHAIN2)
        assert not ok
        assert violations["monotone"] is not None


class TestAdmissible:
    def test_distinct_weights_pin_everything(self):
        omega = WeightFunction.from_map({"1": 1, "2": 2})
        assert weight_automorphisms(ANTI2, SP21, omega) == ((0, 1),)

    def test_equal_weights_allow_the_swap(self):
        assert set(weight_automorphisms(ANTI2, SP21, ONES2)) == {(0, 1), (1, 0)}

    def test_chain_admits_only_identity(self):
        assert weight_automorphisms(CHAIN2, SP21, ONES2) == ((0, 1),)

    def test_dimension_mismatch_pins_the_swap(self):
        space = AlphabetSpec(F2, ("1", "2"), (1, 2))
        assert weight_automorphisms(ANTI2, space, ONES2) == ((0, 1),)

    def test_functional_filter_agrees_with_pointwise(self):
        for poset in (CHAIN2, ANTI2):
            for omega in (ONES2, WeightFunction.from_map({"1": 1, "2": 2})):
                sf = weight_sum_functional(poset, omega)
                assert admissible_automorphisms(poset, SP21, sf) == weight_automorphisms(
                    poset, SP21, omega
                )

    def test_support_functional_forces_identity(self):
        assert admissible_automorphisms(ANTI2, SP21, p_support_functional(ANTI2)) == ((0, 1),)


class TestBuildApply:
    def test_identity_fixes_everything(self):
        iso = Isometry.identity(SP21, CHAIN2)
        for vec in SP21.vectors():
            assert iso.apply(vec) == vec

    def test_strict_block_example(self):
        iso = build_isometry(SP21, CHAIN2, (0, 1), (((1,),), ((1,),)), [(1, 0, ((1,),))])
        assert iso.apply((1, 0)) == (1, 0)
        assert iso.apply((0, 1)) == (1, 1)
        assert iso.apply((1, 1)) == (0, 1)

    def test_composition_is_matrix_product(self):
        group = weight_isometry_group(SP21, CHAIN2, ONES2)
        for a in group:
            for b in group:
                product = fields.mat_mul(2, a.matrix, b.matrix)
                for vec in SP21.vectors():
                    assert fields.mat_vec(2, product, vec) == a.apply(b.apply(vec))

    def test_non_invertible_diagonal_rejected(self):
        with pytest.raises(ValidationError, match="invertible"):
            build_isometry(SP21, CHAIN2, (0, 1), (((0,),), ((1,),)))

    def test_strict_block_must_sit_below(self):
        with pytest.raises(ValidationError, match="below"):
            build_isometry(SP21, CHAIN2, (0, 1), (((1,),), ((1,),)), [(0, 1, ((1,),))])


class TestEnumeration:
    def test_chain_group_order_two(self):
        group = weight_isometry_group(SP21, CHAIN2, ONES2)
        assert len(group) == 2

    def test_antichain_group_order_two(self):
        group = weight_isometry_group(SP21, ANTI2, ONES2)
        assert len(group) == 2
        assert {iso.lam for iso in group} == {(0, 1), (1, 0)}

    def test_order_formula_matches(self):
        vee = Poset.from_covers(("a", "b", "c"), [("a", "b"), ("a", "c")])
        space = AlphabetSpec.uniform(F3, vee.elements, 1)
        omega = WeightFunction.ones(vee.elements)
        group = weight_isometry_group(space, vee, omega)
        lams = weight_automorphisms(vee, space, omega)
        assert len(group) == group_order(space, vee, len(lams)) == 144

    def test_enumeration_is_deterministic(self):
        first = [iso.matrix for iso in weight_isometry_group(SP21, CHAIN2, ONES2)]
        second = [iso.matrix for iso in weight_isometry_group(SP21, CHAIN2, ONES2)]
        assert first == second

    def test_support_group_is_weight_group_kernel(self):
        space = AlphabetSpec.uniform(F2, ("a", "b", "c"), 1)
        anti = Poset.antichain(("a", "b", "c"))
        ones = WeightFunction.ones(anti.elements)
        weight_group = weight_isometry_group(space, anti, ones)
        identity = (0, 1, 2)
        kernel = {iso.matrix for iso in weight_group if iso.lam == identity}
        support = {iso.matrix for iso in support_isometry_group(space, anti)}
        assert kernel == support


class TestBruteForce:
    def test_single_coordinate(self):
        space = AlphabetSpec.uniform(F3, ("a",), 1)
        one = Poset.chain(("a",))
        sf = weight_sum_functional(one, WeightFunction.ones(("a",)))
        assert len(brute_force_isometries(space, one, sf)) == 2

    def test_chain_two_matrices(self):
        sf = weight_sum_functional(CHAIN2, ONES2)
        matrices = brute_force_isometries(SP21, CHAIN2, sf)
        assert sorted(matrices) == [((1, 0), (0, 1)), ((1, 1), (0, 1))]

    def test_every_member_decomposes_and_rebuilds(self):
        vee = Poset.from_covers(("a", "b", "c"), [("a", "b"), ("a", "c")])
        space = AlphabetSpec.uniform(F2, vee.elements, 1)
        omega = WeightFunction.ones(vee.elements)
        sf = weight_sum_functional(vee, omega)
        admissible = set(weight_automorphisms(vee, space, omega))
        for matrix in brute_force_isometries(space, vee, sf):
            iso = decompose(space, vee, matrix, sf)
            assert iso.matrix == matrix
            assert iso.lam in admissible


class TestDecompose:
    def test_identity_maps_to_identity_label_map(self):
        sf = weight_sum_functional(CHAIN2, ONES2)
        iso = decompose(SP21, CHAIN2, fields.identity_matrix(2), sf)
        assert iso.lam == (0, 1)

    def test_swap_recovers_the_transposition(self):
        sf = weight_sum_functional(ANTI2, ONES2)
        swap = ((0, 1), (1, 0))
        iso = decompose(SP21, ANTI2, swap, sf)
        assert iso.lam == (1, 0)

    def test_label_map_respects_products_and_inverses(self):
        space = AlphabetSpec.uniform(F2, ("a", "b", "c"), 1)
        anti = Poset.antichain(("a", "b", "c"))
        group = weight_isometry_group(space, anti, WeightFunction.ones(anti.elements))
        to_lam = {iso.matrix: iso.lam for iso in group}
        for a in group:
            assert to_lam[fields.mat_inv(2, a.matrix)] == invert_perm(a.lam)
            for b in group:
                product = fields.mat_mul(2, a.matrix, b.matrix)
                assert to_lam[product] == compose_perms(a.lam, b.lam)

    def test_rejects_non_isometry_with_witness(self):
        sf = weight_sum_functional(CHAIN2, ONES2)
        bad = ((0, 1), (1, 0))  # swap is invertible but not a chain isometry
        with pytest.raises(PropertyViolation, match="not preserved"):
            decompose(SP21, CHAIN2, bad, sf)


class TestClosureTransform:
    @pytest.mark.parametrize(
        "poset", [CHAIN2, ANTI2, Poset.from_covers(("1", "2"), [("1", "2")]).dual()]
    )
    def test_supports_transform_by_the_label_map(self, poset):
        # the structured form and the support-closure behaviour must agree
        space = AlphabetSpec.uniform(F2, poset.elements, 1)
        for iso in weight_isometry_group(space, poset, WeightFunction.ones(poset.elements)):
            for vec in space.vectors():
                left = p_support(space, poset, iso.apply(vec))
                right = poset.apply_perm(iso.lam, p_support(space, poset, vec))
                assert left == right

    def test_single_block_images_close_to_principal_ideals(self):
        # equivalent formulation: the image of any nonzero single-block vector
        # has the principal ideal of its label's image as support closure
        import itertools

        vee = Poset.from_covers(("a", "b", "c"), [("a", "b"), ("a", "c")])
        space = AlphabetSpec(F2, vee.elements, (1, 2, 2))
        omega = WeightFunction.from_map({"a": 1, "b": "3/2", "c": "3/2"})
        for iso in weight_isometry_group(space, vee, omega):
            for idx, label in enumerate(vee.elements):
                rng = space.block_range(label)
                for entries in itertools.product(range(2), repeat=len(rng)):
                    if not any(entries):
                        continue
                    vec = [0] * space.total_dim
                    for t, x in zip(rng, entries):
                        vec[t] = x
                    closure = p_support(space, vee, iso.apply(tuple(vec)))
                    target = vee.ideal_closure({vee.elements[iso.lam[idx]]})
                    assert closure == target

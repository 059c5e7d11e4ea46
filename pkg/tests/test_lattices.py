"""Intersection-closed families: Moebius values, indicator identities,
minimal solutions, module thresholds, and the kernel-tuple translation."""

import itertools
import random

import pytest

from posetmetrics.errors import (
    AllSolutionsTrivial,
    BoundExceeded,
    ValidationError,
)
from posetmetrics.lattices import (
    FiniteLattice,
    Solution,
    boolean_lattice,
    construct_minimal_solution,
    hamming_extension_via_solutions,
    is_solution,
    is_trivial,
    matrix_module_min_length,
    minimal_nontrivial_length,
    minimal_nontrivial_solution,
    moebius,
    moebius_indicator_identity,
    nontrivial_solutions_up_to,
    pointed_boolean_lattice,
    restrict_solution,
    subgroup_indicator_equivalence,
    subspace_lattice,
)
from posetmetrics.mep import extend_to_isometry, preserves_weight
from posetmetrics.posets import Poset, WeightFunction
from posetmetrics.spaces import AlphabetSpec, FieldSpec, LinearCode, enumerate_codes, linear_maps

S22 = subspace_lattice(2, 2)
FULL22 = frozenset(S22.ground)
ZERO22 = frozenset({(0, 0)})


def binomial(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


class TestLattice:
    def test_requires_ground_member(self):
        with pytest.raises(ValidationError, match="ground set itself"):
            FiniteLattice.from_sets((1, 2), [{1}])

    def test_requires_intersection_closure(self):
        with pytest.raises(ValidationError, match="intersection-closed"):
            FiniteLattice.from_sets((1, 2, 3), [{1, 2}, {2, 3}, {1, 2, 3}])

    def test_closure_of_member_is_itself(self):
        assert S22.closure({(1, 0), (0, 1)}) == FULL22

    def test_closure_of_empty_is_bottom(self):
        assert S22.closure(set()) == S22.bottom() == ZERO22

    def test_closure_of_point_is_its_line(self):
        assert S22.closure({(1, 1)}) == frozenset({(0, 0), (1, 1)})

    def test_non_point_closures(self):
        assert S22.non_point_closures() == (FULL22,)


class TestMoebius:
    def test_two_element_chain(self):
        chain = FiniteLattice.from_sets((1, 2), [{1}, {1, 2}])
        assert moebius(chain).of(frozenset({1}), frozenset({1, 2})) == -1

    def test_boolean_closed_form(self):
        lattice = boolean_lattice(3)
        table = moebius(lattice)
        for a in lattice.members:
            for b in lattice.members:
                expected = (-1) ** len(b - a) if a <= b else 0
                assert table.of(a, b) == expected

    @pytest.mark.parametrize("q,k", [(2, 3), (3, 2)])
    def test_subspace_closed_form(self, q, k):
        # oracle: alternating prime powers with exponent d choose 2
        lattice = subspace_lattice(q, k)
        table = moebius(lattice)

        def dim(member):
            size, d = len(member), 0
            while size > 1:
                size //= q
                d += 1
            return d

        for below in lattice.members:
            for above in lattice.members:
                if below <= above:
                    d = dim(above) - dim(below)
                    expected = (-1) ** d * q ** binomial(d, 2)
                else:
                    expected = 0
                assert table.of(below, above) == expected

    def test_plane_value_is_field_size(self):
        assert moebius(S22).of(ZERO22, FULL22) == 2
        s32 = subspace_lattice(3, 2)
        assert moebius(s32).of(frozenset({(0, 0)}), frozenset(s32.ground)) == 3

    def test_interval_sums_vanish_both_ways(self):
        lattice = pointed_boolean_lattice(3)
        table = moebius(lattice)
        for low in lattice.members:
            for high in lattice.members:
                if low < high:
                    inside = [m for m in lattice.members if low <= m <= high]
                    assert sum(table.of(m, high) for m in inside) == 0
                    assert sum(table.of(low, m) for m in inside) == 0

    def test_inversion_round_trip(self):
        rng = random.Random(7)
        lattice = subspace_lattice(2, 2)
        table = moebius(lattice)
        f = {m: rng.randint(-5, 5) for m in lattice.members}
        g = {m: sum(f[e] for e in lattice.members if m <= e) for m in lattice.members}
        for m in lattice.members:
            recovered = sum(
                table.of(m, e) * g[e] for e in lattice.members if m <= e
            )
            assert recovered == f[m]

    def test_mass_splits_evenly_above_bottom(self):
        for lattice in (S22, subspace_lattice(3, 2), pointed_boolean_lattice(3)):
            table = moebius(lattice)
            bottom = lattice.bottom()
            for member in lattice.members:
                if member == bottom:
                    continue
                values = [
                    table.of(below, member)
                    for below in lattice.members
                    if below <= member
                ]
                assert sum(values) == 0
                positive = sum(v for v in values if v > 0)
                negative = -sum(v for v in values if v < 0)
                assert positive == negative == sum(map(abs, values)) // 2


class TestIndicatorIdentity:
    def test_line_is_generated(self):
        identity_ok, split_ok, generators = moebius_indicator_identity(
            S22, frozenset({(0, 0), (1, 0)})
        )
        assert identity_ok and split_ok and generators == {(1, 0)}

    def test_plane_has_no_generator(self):
        identity_ok, split_ok, generators = moebius_indicator_identity(S22, FULL22)
        assert identity_ok and split_ok and generators == frozenset()

    def test_random_families(self):
        rng = random.Random(99)
        for _ in range(40):
            size = rng.randint(1, 6)
            ground = tuple(range(size))
            members = {frozenset(ground)}
            for _ in range(rng.randint(1, 7)):
                members.add(frozenset(x for x in ground if rng.random() < 0.5))
            stable = False
            while not stable:
                stable = True
                for a in list(members):
                    for b in list(members):
                        if a & b not in members:
                            members.add(a & b)
                            stable = False
            lattice = FiniteLattice.from_sets(ground, members)
            for member in lattice.members:
                identity_ok, split_ok, _ = moebius_indicator_identity(lattice, member)
                assert identity_ok and split_ok


class TestSolutions:
    def test_identical_sides_are_trivial(self):
        s = Solution((frozenset({1}),), (frozenset({1}),))
        assert is_solution(s) and is_trivial(s)

    def test_reordered_sides_are_trivial(self):
        a, b = frozenset({1}), frozenset({2})
        s = Solution((a, b), (b, a))
        assert is_solution(s) and is_trivial(s)

    def test_empty_member_breaks_the_length_law(self):
        # with the empty set allowed, sides of different lengths can balance
        s = Solution((frozenset(),), ())
        assert is_solution(s) and not is_trivial(s)
        assert s.length == (1, 0)

    def test_equal_length_law_without_empty(self):
        hits = list(nontrivial_solutions_up_to(S22, 3, include_unequal=True))
        assert hits and all(h.length[0] == h.length[1] for h in hits)

    def test_restriction_stability(self):
        solution = construct_minimal_solution(S22, FULL22)
        rng = random.Random(3)
        for _ in range(20):
            window = frozenset(x for x in S22.ground if rng.random() < 0.6)
            assert is_solution(restrict_solution(solution, window))


class TestConstruction:
    def test_plane_solution_layout(self):
        solution = construct_minimal_solution(S22, FULL22)
        assert solution.length == (3, 3)
        # negative side: the three lines; positive side: the plane plus bottom twice
        assert sorted(len(s) for s in solution.left) == [2, 2, 2]
        assert sorted(len(s) for s in solution.right) == [1, 1, 4]

    def test_rejects_generated_members(self):
        with pytest.raises(ValidationError, match="generated"):
            construct_minimal_solution(S22, frozenset({(0, 0), (1, 0)}))

    def test_rejects_families_with_the_empty_set(self):
        with pytest.raises(ValidationError, match="empty"):
            construct_minimal_solution(boolean_lattice(2), frozenset({1, 2}))

    def test_three_element_field_gives_length_four(self):
        lattice = subspace_lattice(3, 2)
        solution = construct_minimal_solution(lattice, frozenset(lattice.ground))
        assert solution.length == (4, 4)
        assert is_solution(solution) and not is_trivial(solution)


class TestMinimalLength:
    def test_binary_plane(self):
        assert minimal_nontrivial_length(S22) == 3

    def test_five_element_field_plane(self):
        assert minimal_nontrivial_length(subspace_lattice(5, 2)) == 6

    def test_pointed_boolean(self):
        lattice = pointed_boolean_lattice(2)
        assert minimal_nontrivial_length(lattice) == 2
        assert lattice.non_point_closures() == (frozenset({0, 1, 2}),)

    def test_all_trivial_signal(self):
        chain = FiniteLattice.from_sets((1, 2), [{1}, {1, 2}])
        with pytest.raises(AllSolutionsTrivial):
            minimal_nontrivial_length(chain)

    def test_solution_helper_returns_the_argmin(self):
        length, top, solution = minimal_nontrivial_solution(S22)
        assert length == 3 and top == FULL22 and solution.length == (3, 3)

    def test_exhaustive_search_confirms_binary_minimum(self):
        assert not list(nontrivial_solutions_up_to(S22, 2))
        found = next(iter(nontrivial_solutions_up_to(S22, 3)))
        assert found.length == (3, 3)

    def test_search_caps(self):
        with pytest.raises(BoundExceeded):
            list(nontrivial_solutions_up_to(subspace_lattice(2, 3), 2))


class TestModuleThreshold:
    @pytest.mark.parametrize(
        "q,e,k,expected", [(2, 1, 2, 3), (3, 1, 2, 4), (5, 1, 2, 6), (2, 2, 3, 15)]
    )
    def test_product_formula(self, q, e, k, expected):
        assert matrix_module_min_length(q, e, k) == expected

    def test_wider_cyclic_cutoff_raises_the_threshold(self):
        # the plain lattice bottoms out at the planes; the rank-2 cutoff does not
        assert minimal_nontrivial_length(subspace_lattice(2, 3)) == 3
        assert matrix_module_min_length(2, 2, 3) == 15

    def test_requires_a_non_cyclic_submodule(self):
        with pytest.raises(ValidationError):
            matrix_module_min_length(2, 2, 2)


class TestSubgroupIndicators:
    def test_equal_pairs(self):
        space = AlphabetSpec.uniform(FieldSpec(2), ("x", "y"), 1)
        a = LinearCode.from_rows(space, [(1, 0)])
        b = LinearCode.from_rows(space, [(0, 1)])
        assert subgroup_indicator_equivalence(a, b, a, b) == (True, True, True)
        assert subgroup_indicator_equivalence(a, b, b, a) == (True, True, True)

    def test_full_group_everywhere(self):
        space = AlphabetSpec.uniform(FieldSpec(2), ("x", "y"), 1)
        g = LinearCode.full(space)
        assert subgroup_indicator_equivalence(g, g, g, g) == (True, True, True)

    def test_mixed_lines_fail_together(self):
        space = AlphabetSpec.uniform(FieldSpec(2), ("x", "y"), 1)
        l1 = LinearCode.from_rows(space, [(1, 0)])
        l2 = LinearCode.from_rows(space, [(0, 1)])
        l3 = LinearCode.from_rows(space, [(1, 1)])
        assert subgroup_indicator_equivalence(l1, l2, l1, l3) == (False, False, False)

    def test_exhaustive_quadruples_agree(self):
        space = AlphabetSpec.uniform(FieldSpec(2), ("x", "y"), 1)
        codes = list(enumerate_codes(space))
        for a, b, c, d in itertools.product(codes, repeat=4):
            verdicts = subgroup_indicator_equivalence(a, b, c, d)
            assert len(set(verdicts)) == 1


class TestHammingExtension:
    def test_identity_is_trivial(self):
        space = AlphabetSpec.uniform(FieldSpec(2), ("1", "2"), 2)
        code = LinearCode.from_rows(space, [(1, 0, 1, 0)])
        record, preserved, trivial = hamming_extension_via_solutions(space, code, code.basis)
        assert preserved and trivial

    def test_two_blocks_always_trivial(self):
        poset = Poset.antichain(("1", "2"))
        space = AlphabetSpec.uniform(FieldSpec(2), poset.elements, 2)
        omega = WeightFunction.ones(poset.elements)
        for code in enumerate_codes(space, max_dim=2):
            if code.dim == 0:
                continue
            for images in linear_maps(code, space):
                record, preserved, trivial = hamming_extension_via_solutions(
                    space, code, images
                )
                assert preserved == preserves_weight(space, poset, omega, code, images)
                if preserved:
                    assert trivial

    def test_three_blocks_counterexample_is_nontrivial(self):
        poset = Poset.antichain(("1", "2", "3"))
        space = AlphabetSpec.uniform(FieldSpec(2), poset.elements, 2)
        omega = WeightFunction.ones(poset.elements)
        # kernel construction: embed a plane so the three block kernels are its
        # three distinct lines, then map it isomorphically onto two blocks
        code = LinearCode.from_rows(space, [(1, 0, 0, 0, 1, 0), (0, 0, 1, 0, 1, 0)])
        images = ((0, 1, 0, 1, 0, 0), (1, 0, 1, 0, 0, 0))
        record, preserved, trivial = hamming_extension_via_solutions(space, code, images)
        assert preserved and not trivial
        assert record.length == (3, 3)
        assert preserves_weight(space, poset, omega, code, images)
        assert extend_to_isometry(space, poset, omega, code, images) is None

    def test_extension_flag_matches_group_search(self):
        poset = Poset.antichain(("1", "2"))
        space = AlphabetSpec.uniform(FieldSpec(2), poset.elements, 1)
        omega = WeightFunction.ones(poset.elements)
        for code in enumerate_codes(space):
            if code.dim == 0:
                continue
            for images in linear_maps(code, space):
                record, preserved, trivial = hamming_extension_via_solutions(
                    space, code, images
                )
                if preserved:
                    extension = extend_to_isometry(space, poset, omega, code, images)
                    assert trivial == (extension is not None)

    def test_requires_equal_dims(self):
        space = AlphabetSpec(FieldSpec(2), ("1", "2"), (1, 2))
        with pytest.raises(ValidationError):
            hamming_extension_via_solutions(space, LinearCode.zero(space), ())

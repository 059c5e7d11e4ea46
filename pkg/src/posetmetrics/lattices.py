"""Intersection-closed set families, their Moebius functions, and solutions
to the indicator-sum (isometry) equation.

A lattice here is a finite family of subsets of a ground set, containing the
ground set and closed under pairwise intersection.  Members are mirrored as
int bitmasks and the Moebius recursion runs as a downward sieve, so even the
2825-subspace lattice of F_2^6 stays tractable.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    AllSolutionsTrivial,
    BoundExceeded,
    PropertyViolation,
    ValidationError,
)
from .fields import Vector
from .spaces import AlphabetSpec, FieldSpec, LinearCode, enumerate_codes


@dataclass(frozen=True)
class FiniteLattice:
    ground: tuple
    members: tuple[frozenset, ...]

    def __post_init__(self) -> None:
        ground_set = frozenset(self.ground)
        if len(self.ground) != len(ground_set):
            raise ValidationError("ground points must be distinct")
        member_set = set(self.members)
        if len(member_set) != len(self.members):
            raise ValidationError("duplicate members")
        if ground_set not in member_set:
            raise ValidationError("the ground set itself must be a member")
        for m in self.members:
            if not m <= ground_set:
                raise ValidationError("member outside the ground set")
        for a in self.members:
            for b in self.members:
                if a & b not in member_set:
                    raise ValidationError(
                        f"family is not intersection-closed at {sorted(a)} and {sorted(b)}"
                    )

    @classmethod
    def from_sets(cls, ground: Iterable, members: Iterable[Iterable]) -> "FiniteLattice":
        ground = tuple(ground)
        frozen = {frozenset(m) for m in members}
        ordered = sorted(frozen, key=lambda s: (len(s), _sort_key(ground, s)))
        return cls(ground, tuple(ordered))

    def closure(self, subset: Iterable) -> frozenset:
        """Smallest member containing the subset; unique by intersection-closure."""
        subset = frozenset(subset)
        if not subset <= frozenset(self.ground):
            raise ValidationError("closure argument outside the ground set")
        best: Optional[frozenset] = None
        for m in self.members:
            if subset <= m and (best is None or len(m) < len(best)):
                best = m
        assert best is not None  # the ground set always qualifies
        return best

    def bottom(self) -> frozenset:
        out = frozenset(self.ground)
        for m in self.members:
            out &= m
        return out

    def point_closures(self) -> dict:
        return _point_closures(self)

    def non_point_closures(self) -> tuple[frozenset, ...]:
        """Members that are not the closure of any single point."""
        hit = set(self.point_closures().values())
        return tuple(m for m in self.members if m not in hit)

    def contains_empty(self) -> bool:
        return frozenset() in set(self.members)


def _sort_key(ground: tuple, subset: frozenset):
    pos = {x: i for i, x in enumerate(ground)}
    return sorted(pos[x] for x in subset)


@lru_cache(maxsize=None)
def _member_index(lattice: FiniteLattice) -> dict:
    return {m: t for t, m in enumerate(lattice.members)}


@lru_cache(maxsize=None)
def _point_closures(lattice: FiniteLattice) -> dict:
    # smallest-first member order makes the first hit the closure
    by_size = sorted(lattice.members, key=len)
    out = {}
    for x in lattice.ground:
        for m in by_size:
            if x in m:
                out[x] = m
                break
    return out


class MoebiusTable:
    """Sparse table of the lattice's Moebius values.

    entries maps (below index, above index) to the nonzero value; by_above
    groups the same data per upper member for interval scans.
    """

    def __init__(self, lattice: FiniteLattice, entries: dict):
        self.lattice = lattice
        self.entries = entries
        self.by_above: dict[int, list[tuple[int, int]]] = {}
        for (i, j), v in entries.items():
            self.by_above.setdefault(j, []).append((i, v))

    def of(self, below: frozenset, above: frozenset) -> int:
        index = _member_index(self.lattice)
        return self.entries.get((index[below], index[above]), 0)

    def column(self, above: frozenset) -> list[tuple[frozenset, int]]:
        j = _member_index(self.lattice)[above]
        members = self.lattice.members
        return [(members[i], v) for i, v in self.by_above.get(j, [])]


@lru_cache(maxsize=None)
def moebius(lattice: FiniteLattice) -> MoebiusTable:
    """The unique table with unit diagonal, zero off intervals, and vanishing
    interval sums, computed per upper member by a downward sieve."""
    pos = {x: t for t, x in enumerate(lattice.ground)}
    masks = []
    for m in lattice.members:
        mask = 0
        for x in m:
            mask |= 1 << pos[x]
        masks.append(mask)
    count = len(masks)
    sizes = [bin(m).count("1") for m in masks]
    down_lists: list[tuple[int, ...]] = []
    for j in range(count):
        mj = masks[j]
        down = [i for i in range(count) if masks[i] & mj == masks[i]]
        down.sort(key=lambda t: -sizes[t])
        down_lists.append(tuple(down))
    entries: dict[tuple[int, int], int] = {}
    for j in range(count):
        acc = [0] * count
        for i in down_lists[j]:
            value = 1 if i == j else -acc[i]
            if value:
                entries[(i, j)] = value
                for w in down_lists[i]:
                    if w != i:
                        acc[w] += value
    return MoebiusTable(lattice, entries)


def moebius_indicator_identity(
    lattice: FiniteLattice, above: frozenset
) -> tuple[bool, bool, frozenset]:
    """Check the alternating indicator identity at one member.

    Returns (identity_ok, split_ok, generators): generators are the points
    whose closure is exactly the member; the signed sum of member indicators
    below the member must match the generator-set indicator pointwise, and
    the positive/negative split equation must hold exactly when no point
    generates the member.
    """
    table = moebius(lattice)
    idx_above = _member_index(lattice)[above]
    closures = lattice.point_closures()
    generators = frozenset(x for x in lattice.ground if closures[x] == above)
    signed = {x: 0 for x in lattice.ground}
    positive = {x: 0 for x in lattice.ground}
    negative = {x: 0 for x in lattice.ground}
    members = lattice.members
    for i, coeff in table.by_above.get(idx_above, []):
        for x in members[i]:
            signed[x] += coeff
            if coeff > 0:
                positive[x] += coeff
            else:
                negative[x] -= coeff
    identity_ok = all(signed[x] == (1 if x in generators else 0) for x in lattice.ground)
    split_holds = all(positive[x] == negative[x] for x in lattice.ground)
    split_ok = split_holds == (not generators)
    return identity_ok, split_ok, generators


# -- solutions to the indicator equation ---------------------------------------


@dataclass(frozen=True)
class Solution:
    """Two multisets of sets; a solution when the indicator sums agree pointwise."""

    left: tuple[frozenset, ...]
    right: tuple[frozenset, ...]

    @property
    def length(self) -> tuple[int, int]:
        return (len(self.left), len(self.right))


def is_solution(candidate: Solution) -> bool:
    points = set()
    for s in candidate.left:
        points |= s
    for s in candidate.right:
        points |= s
    return all(
        sum(1 for s in candidate.left if x in s) == sum(1 for s in candidate.right if x in s)
        for x in points
    )


def is_trivial(candidate: Solution) -> bool:
    """Trivial when the two multisets coincide."""
    return Counter(candidate.left) == Counter(candidate.right)


def restrict_solution(candidate: Solution, window: Iterable) -> Solution:
    window = frozenset(window)
    return Solution(
        tuple(s & window for s in candidate.left),
        tuple(s & window for s in candidate.right),
    )


def construct_minimal_solution(lattice: FiniteLattice, top: frozenset) -> Solution:
    """Signed Moebius masses at a member no point generates, split by sign.

    Left side: members with negative value, repeated |value| times; right
    side: members with positive value (the member itself once).  The output
    is validated as a nontrivial solution of the predicted length.
    """
    if lattice.contains_empty():
        raise ValidationError("the family must not contain the empty set")
    if top not in lattice.non_point_closures():
        raise ValidationError("the chosen member is generated by a point")
    table = moebius(lattice)
    left: list[frozenset] = []
    right: list[frozenset] = []
    total_mass = 0
    for member, value in table.column(top):
        total_mass += abs(value)
        if value < 0:
            left.extend([member] * (-value))
        else:
            right.extend([member] * value)
    out = Solution(tuple(left), tuple(right))
    expected = total_mass // 2
    if len(out.left) != expected or len(out.right) != expected:
        raise PropertyViolation("signed masses did not split evenly")
    if not is_solution(out) or is_trivial(out):
        raise PropertyViolation("constructed candidate failed validation")
    return out


def minimal_nontrivial_length(
    lattice: FiniteLattice, tops: Optional[Sequence[frozenset]] = None
) -> int:
    """Least length of a nontrivial solution with members from the lattice.

    The minimum runs over candidate top members (by default every member no
    point generates); each candidate contributes half its total absolute
    Moebius mass.
    """
    if lattice.contains_empty():
        raise ValidationError("the family must not contain the empty set")
    if tops is None:
        tops = lattice.non_point_closures()
    tops = tuple(tops)
    if not tops:
        raise AllSolutionsTrivial("every member is generated by a point")
    table = moebius(lattice)
    index = _member_index(lattice)
    best: Optional[int] = None
    for top in tops:
        mass = sum(abs(v) for _i, v in table.by_above.get(index[top], []))
        if mass % 2 != 0:
            raise PropertyViolation("odd total Moebius mass")
        half = mass // 2
        if best is None or half < best:
            best = half
    assert best is not None
    return best


def minimal_nontrivial_solution(
    lattice: FiniteLattice, tops: Optional[Sequence[frozenset]] = None
) -> tuple[int, frozenset, Solution]:
    """Minimal length together with a minimizing top and a built solution."""
    if lattice.contains_empty():
        raise ValidationError("the family must not contain the empty set")
    if tops is None:
        tops = lattice.non_point_closures()
    tops = tuple(tops)
    if not tops:
        raise AllSolutionsTrivial("every member is generated by a point")
    table = moebius(lattice)
    index = _member_index(lattice)
    best_top = min(
        tops, key=lambda m: sum(abs(v) for _i, v in table.by_above.get(index[m], []))
    )
    best = minimal_nontrivial_length(lattice, tops=(best_top,))
    solution = construct_minimal_solution(lattice, best_top)
    if len(solution.left) != best:
        raise PropertyViolation("constructed solution length disagrees with the minimum")
    return best, best_top, solution


def nontrivial_solutions_up_to(
    lattice: FiniteLattice, max_len: int, include_unequal: bool = False
) -> Iterator[Solution]:
    """Exhaustive scan over multiset pairs of members, shortest first.

    Confirms minimality on tiny lattices; member count and length are capped.
    """
    if len(lattice.members) > 8 or max_len > 6:
        raise BoundExceeded("exhaustive solution search capped at 8 members, length 6")
    members = lattice.members
    for n in range(1, max_len + 1):
        right_lengths = [n] if not include_unequal else list(range(0, max_len + 1))
        for n_right in right_lengths:
            for left in itertools.combinations_with_replacement(members, n):
                for right in itertools.combinations_with_replacement(members, n_right):
                    candidate = Solution(left, right)
                    if is_solution(candidate) and not is_trivial(candidate):
                        yield candidate


# -- concrete lattices -----------------------------------------------------------


def subspace_lattice(q: int, k: int, point_bound: int = 4096) -> FiniteLattice:
    """All subspaces of F_q^k as sets of vector tuples."""
    if q**k > point_bound:
        raise BoundExceeded(f"{q ** k} points exceed the bound {point_bound}")
    space = AlphabetSpec(FieldSpec(q), ("x",), (k,))
    members = [frozenset(code.codewords()) for code in enumerate_codes(space)]
    return FiniteLattice.from_sets(list(space.vectors()), members)


def boolean_lattice(n: int) -> FiniteLattice:
    """Plain powerset of {1..n}; contains the empty set."""
    ground = tuple(range(1, n + 1))
    members = [
        frozenset(c) for r in range(n + 1) for c in itertools.combinations(ground, r)
    ]
    return FiniteLattice.from_sets(ground, members)


def pointed_boolean_lattice(n: int) -> FiniteLattice:
    """Powerset of {1..n} with a shared basepoint 0 added to every member.

    Isomorphic to the powerset as a lattice but avoids the empty set, so the
    minimal-length machinery applies.
    """
    ground = tuple(range(0, n + 1))
    members = [
        frozenset(c) | {0}
        for r in range(n + 1)
        for c in itertools.combinations(range(1, n + 1), r)
    ]
    return FiniteLattice.from_sets(ground, members)


def _vector_set_dim(q: int, member: frozenset) -> int:
    size = len(member)
    d = 0
    while size > 1:
        size //= q
        d += 1
    return d


def matrix_module_min_length(q: int, e: int, k: int) -> int:
    """Least nontrivial solution length over the submodule lattice of the
    width-k column module over e x e matrices.

    Left submodules correspond to subspaces of F_q^k, cyclic ones to the
    subspaces of dimension at most e, so the minimum runs over subspaces of
    dimension above e.  The value always equals prod_{i=1..e} (q^i + 1),
    which is asserted before returning.
    """
    if k <= e:
        raise ValidationError("the module has no non-cyclic submodule when k <= e")
    lattice = subspace_lattice(q, k)
    tops = [m for m in lattice.members if _vector_set_dim(q, m) > e]
    value = minimal_nontrivial_length(lattice, tops=tops)
    closed_form = 1
    for i in range(1, e + 1):
        closed_form *= q**i + 1
    if value != closed_form:
        raise PropertyViolation(
            f"lattice minimum {value} disagrees with the product formula {closed_form}"
        )
    return value


# -- subgroup indicators and Hamming extension -------------------------------------


def subgroup_indicator_equivalence(
    a: LinearCode, b: LinearCode, c: LinearCode, d: LinearCode
) -> tuple[bool, bool, bool]:
    """Three faces of one fact for subgroups A, B, C, D of the ambient space:
    pairing equality, pointwise indicator-sum equality, and union-plus-
    intersection equality.  All three are evaluated and must agree."""
    set_a, set_b = frozenset(a.codewords()), frozenset(b.codewords())
    set_c, set_d = frozenset(c.codewords()), frozenset(d.codewords())
    paired = (set_a == set_c and set_b == set_d) or (set_a == set_d and set_b == set_c)
    ambient = set_a | set_b | set_c | set_d
    sums = all(
        (x in set_a) + (x in set_b) == (x in set_c) + (x in set_d) for x in ambient
    )
    boundary = (set_a | set_b == set_c | set_d) and (set_a & set_b == set_c & set_d)
    if not (paired == sums == boundary):
        raise PropertyViolation(
            f"indicator equivalence split: paired={paired} sums={sums} boundary={boundary}"
        )
    return paired, sums, boundary


def hamming_extension_via_solutions(
    space: AlphabetSpec, code: LinearCode, images: Sequence[Vector]
) -> tuple[Solution, bool, bool]:
    """Kernel-tuple translation of a map on a code over equal-size blocks.

    Builds (per-block kernels of the code, per-block kernels of the map) as
    subsets of the code and returns (record, preserves block weight,
    extendable).  Preservation is equivalent to the record being a solution;
    extendability to it being trivial, because field blocks always admit the
    final patching step.
    """
    if len(set(space.dims)) != 1:
        raise ValidationError("equal block dimensions are required")
    q = space.q
    n = space.total_dim
    codewords = []
    image_of = {}
    for coeffs, vec in code.coefficient_pairs():
        img = [0] * n
        for cc, irow in zip(coeffs, images):
            if cc:
                for t in range(n):
                    img[t] = (img[t] + cc * irow[t]) % q
        codewords.append(vec)
        image_of[vec] = tuple(img)
    left = []
    right = []
    for label in space.labels:
        rng = space.block_range(label)
        left.append(frozenset(v for v in codewords if not any(v[t] for t in rng)))
        right.append(
            frozenset(v for v in codewords if not any(image_of[v][t] for t in rng))
        )
    record = Solution(tuple(left), tuple(right))
    return record, is_solution(record), is_trivial(record)

"""Weight isometries in structured form: a poset automorphism plus block maps.

Every weight isometry of the ambient space factors as a label permutation
(constrained to preserve weights and block dimensions), one invertible
square block per label, and arbitrary "strict" blocks feeding a label from
labels strictly above its image.  The structured form is stored; the full
N x N matrix is derived on demand.

The same machinery runs for any support functional: a function on label
subsets that only sees the ideal closure, is monotone on ideals, and pins
ideals that share a value with one of their points.  The exact-rational
weight sum and the ideal-closure map itself are the two shipped instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

from . import fields
from .errors import BoundExceeded, PropertyViolation, ValidationError
from .fields import Matrix, Vector
from .posets import Perm, Poset, WeightFunction
from .spaces import AlphabetSpec


@dataclass(frozen=True)
class SupportFunctional:
    """A closure-respecting functional on label subsets with a comparison."""

    name: str
    evaluate: Callable[[frozenset[str]], object]
    leq: Callable[[object, object], bool]


def weight_sum_functional(poset: Poset, omega: WeightFunction) -> SupportFunctional:
    """Exact rational weight of the ideal closure, compared by <=."""

    def evaluate(subset: frozenset[str]):
        return omega.total(poset.ideal_closure(subset))

    return SupportFunctional("weight-sum", evaluate, lambda a, b: a <= b)


def p_support_functional(poset: Poset) -> SupportFunctional:
    """The ideal closure itself, compared by inclusion."""

    def evaluate(subset: frozenset[str]):
        return poset.ideal_closure(subset)

    return SupportFunctional("support-closure", evaluate, lambda a, b: a <= b)


def check_support_functional(
    sf: SupportFunctional, poset: Poset, cap: int = 12
) -> tuple[bool, dict[str, Optional[tuple]]]:
    """Exhaustively check the three defining conditions over all subsets.

    Returns (ok, violations) where violations maps each condition name to a
    witness tuple or None:
      closure_invariant:     value must not change under ideal closure;
      monotone:              nested ideals must have comparable values;
      singleton_determined:  an ideal sharing its value with a member point
                             must be that point's principal ideal.
    """
    n = len(poset.elements)
    if n > cap:
        raise BoundExceeded(f"support functional check capped at {cap} elements")
    violations: dict[str, Optional[tuple]] = {
        "closure_invariant": None,
        "monotone": None,
        "singleton_determined": None,
    }
    subsets = [
        frozenset(poset.elements[i] for i in range(n) if mask >> i & 1)
        for mask in range(1 << n)
    ]
    for subset in subsets:
        closed = poset.ideal_closure(subset)
        if sf.evaluate(subset) != sf.evaluate(closed):
            violations["closure_invariant"] = (subset, closed)
            break
    ideals = poset.all_ideals()
    for small in ideals:
        for large in ideals:
            if small <= large and not sf.leq(sf.evaluate(small), sf.evaluate(large)):
                violations["monotone"] = (small, large)
                break
        if violations["monotone"]:
            break
    for ideal in ideals:
        for u in ideal:
            if sf.evaluate(ideal) == sf.evaluate(frozenset({u})):
                if ideal != poset.ideal_closure({u}):
                    violations["singleton_determined"] = (ideal, u)
                    break
        if violations["singleton_determined"]:
            break
    return all(v is None for v in violations.values()), violations


# -- admissible label permutations --------------------------------------------


def admissible_automorphisms(
    poset: Poset, space: AlphabetSpec, sf: SupportFunctional
) -> tuple[Perm, ...]:
    """Poset automorphisms preserving the functional on every ideal and all
    block dimensions (block isomorphism over a field is dimension equality)."""
    ideals = poset.all_ideals()
    dims = space.dims
    out = []
    for perm in poset.automorphisms():
        if any(dims[perm[i]] != dims[i] for i in range(len(dims))):
            continue
        if all(sf.evaluate(poset.apply_perm(perm, ideal)) == sf.evaluate(ideal) for ideal in ideals):
            out.append(perm)
    return tuple(out)


def weight_automorphisms(
    poset: Poset, space: AlphabetSpec, omega: WeightFunction
) -> tuple[Perm, ...]:
    """Pointwise filter: automorphisms fixing the weight of every label and
    every block dimension.  Agrees with the weight-sum functional filter."""
    values = tuple(omega.of(e) for e in poset.elements)
    dims = space.dims
    out = []
    for perm in poset.automorphisms():
        if all(values[perm[i]] == values[i] and dims[perm[i]] == dims[i] for i in range(len(dims))):
            out.append(perm)
    return tuple(out)


# -- structured isometries -----------------------------------------------------


@dataclass(frozen=True)
class Isometry:
    """lam plus block maps; block (i -> j) may be nonzero only for j below lam(i)."""

    space: AlphabetSpec
    poset: Poset
    lam: Perm
    diag: tuple[Matrix, ...]  # diag[i] : block i -> block lam(i), invertible
    strict: tuple[tuple[int, int, Matrix], ...]  # (i, j, M) with j strictly below lam(i)

    @classmethod
    def identity(cls, space: AlphabetSpec, poset: Poset) -> "Isometry":
        n = len(poset.elements)
        return cls(
            space,
            poset,
            tuple(range(n)),
            tuple(fields.identity_matrix(space.dims[i]) for i in range(n)),
            (),
        )

    @property
    def matrix(self) -> Matrix:
        return _isometry_matrix(self)

    def apply(self, vec: Sequence[int]) -> Vector:
        return fields.mat_vec(self.space.q, self.matrix, vec)

    def serialize(self) -> dict:
        labels = self.poset.elements
        blocks = [
            [labels[i], labels[self.lam[i]], [list(row) for row in self.diag[i]]]
            for i in range(len(labels))
        ]
        blocks += [
            [labels[i], labels[j], [list(row) for row in m]] for i, j, m in self.strict
        ]
        return {"lambda": list(self.lam), "blocks": blocks}


def build_isometry(
    space: AlphabetSpec,
    poset: Poset,
    lam: Perm,
    diag: Sequence[Matrix],
    strict: Sequence[tuple[int, int, Matrix]] = (),
) -> Isometry:
    """Validate shapes, invertibility, and the zero-block constraint."""
    q = space.q
    n = len(poset.elements)
    if sorted(lam) != list(range(n)):
        raise ValidationError("lam is not a permutation")
    for i in range(n):
        if space.dims[lam[i]] != space.dims[i]:
            raise ValidationError("lam must preserve block dimensions")
        m = diag[i]
        if len(m) != space.dims[lam[i]] or any(len(row) != space.dims[i] for row in m):
            raise ValidationError(f"diagonal block {i} has the wrong shape")
        if not fields.is_invertible(q, m):
            raise ValidationError(f"diagonal block {i} is not invertible")
    seen = set()
    for i, j, m in strict:
        if not (poset.leq[j][lam[i]] and j != lam[i]):
            raise ValidationError(f"strict block ({i}->{j}) is not below lam({i})")
        if (i, j) in seen:
            raise ValidationError(f"duplicate strict block ({i}->{j})")
        seen.add((i, j))
        if len(m) != space.dims[j] or any(len(row) != space.dims[i] for row in m):
            raise ValidationError(f"strict block ({i}->{j}) has the wrong shape")
    ordered = tuple(sorted(((i, j, m) for i, j, m in strict), key=lambda t: (t[0], t[1])))
    return Isometry(space, poset, tuple(lam), tuple(diag), ordered)


@lru_cache(maxsize=1 << 17)
def _isometry_matrix(iso: Isometry) -> Matrix:
    space = iso.space
    n_total = space.total_dim
    labels = iso.poset.elements
    rows = [[0] * n_total for _ in range(n_total)]

    def paste(block: Matrix, out_label: str, in_label: str) -> None:
        r0 = space.block_range(out_label).start
        c0 = space.block_range(in_label).start
        for r, row in enumerate(block):
            for c, x in enumerate(row):
                rows[r0 + r][c0 + c] = x

    for i in range(len(labels)):
        paste(iso.diag[i], labels[iso.lam[i]], labels[i])
    for i, j, m in iso.strict:
        paste(m, labels[j], labels[i])
    return tuple(tuple(row) for row in rows)


def _strict_pairs(poset: Poset, lam: Perm) -> list[tuple[int, int]]:
    n = len(poset.elements)
    return [(i, j) for i in range(n) for j in range(n) if poset.leq[j][lam[i]] and j != lam[i]]


def group_order(space: AlphabetSpec, poset: Poset, lam_count: int) -> int:
    """Closed-form order: lam choices x invertible diagonals x strict entries."""
    q = space.q
    order = lam_count
    for k in space.dims:
        gl = 1
        for i in range(k):
            gl *= q**k - q**i
        order *= gl
    identity = tuple(range(len(poset.elements)))
    exponent = sum(space.dims[i] * space.dims[j] for i, j in _strict_pairs(poset, identity))
    return order * q**exponent


def enumerate_group(
    space: AlphabetSpec,
    poset: Poset,
    sf: SupportFunctional,
    bound: int = 1 << 20,
) -> Iterator[Isometry]:
    """All isometries for the functional, in (lam, diag, strict) lexicographic order."""
    lams = admissible_automorphisms(poset, space, sf)
    if group_order(space, poset, len(lams)) > bound:
        raise BoundExceeded(f"isometry group larger than bound {bound}")
    q = space.q
    invertibles = [fields.invertible_matrices(q, k) for k in space.dims]
    for lam in lams:
        pairs = _strict_pairs(poset, lam)
        block_shapes = [(space.dims[j], space.dims[i]) for i, j in pairs]
        for diag in itertools.product(*invertibles):
            for strict_choice in itertools.product(
                *(_all_blocks(q, shape) for shape in block_shapes)
            ):
                strict = tuple(
                    (i, j, m) for (i, j), m in zip(pairs, strict_choice)
                )
                yield Isometry(space, poset, lam, diag, strict)


@lru_cache(maxsize=None)
def _all_blocks(q: int, shape: tuple[int, int]) -> tuple[Matrix, ...]:
    rows, cols = shape
    return tuple(
        tuple(entries[r * cols : (r + 1) * cols] for r in range(rows))
        for entries in itertools.product(range(q), repeat=rows * cols)
    )


def weight_isometry_group(
    space: AlphabetSpec, poset: Poset, omega: WeightFunction, bound: int = 1 << 20
) -> list[Isometry]:
    return list(enumerate_group(space, poset, weight_sum_functional(poset, omega), bound))


def support_isometry_group(
    space: AlphabetSpec, poset: Poset, bound: int = 1 << 20
) -> list[Isometry]:
    return list(enumerate_group(space, poset, p_support_functional(poset), bound))


# -- brute force & decomposition ------------------------------------------------


@lru_cache(maxsize=8)
def _invertible_index_perms(q: int, n: int, bound: int) -> tuple[tuple[Matrix, ...], tuple[tuple[int, ...], ...]]:
    """Invertible matrices with their action on lexicographically indexed vectors."""
    matrices = fields.invertible_matrices(q, n, bound)
    vectors = list(itertools.product(range(q), repeat=n))
    index = {v: t for t, v in enumerate(vectors)}
    perms = tuple(
        tuple(index[fields.mat_vec(q, m, v)] for v in vectors) for m in matrices
    )
    return matrices, perms


def brute_force_isometries(
    space: AlphabetSpec,
    poset: Poset,
    sf: SupportFunctional,
    bound: int = 1 << 18,
) -> list[Matrix]:
    """All invertible matrices preserving the functional of the support.

    Scans every invertible N x N matrix, so this is an oracle for small N
    only; the matrix actions on indexed vectors are cached across calls.
    """
    q = space.q
    n = space.total_dim
    matrices, perms = _invertible_index_perms(q, n, bound)
    values = [sf.evaluate(space.support(vec)) for vec in space.vectors()]
    count = len(values)
    out = []
    for m, perm in zip(matrices, perms):
        if all(values[perm[t]] == values[t] for t in range(count)):
            out.append(m)
    return out


def decompose(
    space: AlphabetSpec,
    poset: Poset,
    matrix: Matrix,
    sf: SupportFunctional,
    verify: bool = True,
) -> Isometry:
    """Recover (lam, blocks) from a matrix known to preserve the functional.

    Raises PropertyViolation with a witness vector if the matrix is not an
    isometry for the functional.
    """
    q = space.q
    n = space.total_dim
    if len(matrix) != n or not fields.is_invertible(q, matrix):
        raise PropertyViolation("matrix is not an automorphism of the space")
    if verify:
        for vec in space.vectors():
            image = fields.mat_vec(q, matrix, vec)
            if sf.evaluate(space.support(image)) != sf.evaluate(space.support(vec)):
                raise PropertyViolation(f"functional not preserved at {vec}")
    principal = {poset.ideal_closure({e}): idx for idx, e in enumerate(poset.elements)}
    lam = []
    for idx, label in enumerate(poset.elements):
        targets = set()
        for a in _nonzero_block_vectors(space, label):
            image = fields.mat_vec(q, matrix, a)
            closure = poset.ideal_closure(space.support(image))
            if closure not in principal:
                raise PropertyViolation(
                    f"image support closure of a single-block vector at {label!r} "
                    "is not a principal ideal"
                )
            targets.add(principal[closure])
        if len(targets) != 1:
            raise PropertyViolation(f"block {label!r} maps to several principal ideals")
        lam.append(targets.pop())
    lam = tuple(lam)
    if sorted(lam) != list(range(len(poset.elements))):
        raise PropertyViolation("recovered label map is not a permutation")
    labels = poset.elements
    diag = []
    strict = []
    for i in range(len(labels)):
        for j in range(len(labels)):
            block = _extract_block(space, matrix, labels[j], labels[i])
            if j == lam[i]:
                if not fields.is_invertible(q, block):
                    raise PropertyViolation(f"diagonal block {labels[i]!r} not invertible")
                diag.append(block)
            elif any(any(row) for row in block):
                if not (poset.leq[j][lam[i]] and j != lam[i]):
                    raise PropertyViolation(
                        f"nonzero block ({labels[i]!r} -> {labels[j]!r}) outside the "
                        "allowed triangular pattern"
                    )
                strict.append((i, j, block))
    return build_isometry(space, poset, lam, tuple(diag), tuple(strict))


def _nonzero_block_vectors(space: AlphabetSpec, label: str) -> Iterator[Vector]:
    n = space.total_dim
    rng = space.block_range(label)
    for entries in itertools.product(range(space.q), repeat=len(rng)):
        if any(entries):
            vec = [0] * n
            for t, x in zip(rng, entries):
                vec[t] = x
            yield tuple(vec)


def _extract_block(space: AlphabetSpec, matrix: Matrix, out_label: str, in_label: str) -> Matrix:
    rows = space.block_range(out_label)
    cols = space.block_range(in_label)
    return tuple(tuple(matrix[r][c] for c in cols) for r in rows)

"""Finite semigroup machinery: pattern closures, common zeros, rank floors.

For semigroups of nonnegative matrices, decomposability is a property of
zero patterns alone, and products of nonnegative matrices have the boolean
product of the factors' patterns.  Closures are therefore computed over
boolean pattern matrices, which are finite (at most 2^(n^2) of them), with a
member cap and an explicit truncation flag; a truncated closure refuses
every verdict rather than reporting one from an incomplete set.

For a closed semigroup the union pattern U of all members is transitively
closed (U_{ik} and U_{kj} nonzero in some members forces U_{ij} nonzero via
their product), which ties three facts together: the union has a zero entry
iff it has a zero entry off the diagonal iff its digraph is not strongly
connected.  The routines here compute each side independently so the
equivalence can be tested rather than assumed.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass
from math import lcm

from .decomposition import (
    DecompositionPrediction,
    Digraph,
    InvariantSubsetWitness,
    _sink_first_order,
    block_triangularize,
    main_decomposability_test,
)
from .matrix import PatternMatrix, Permutation, RMatrix
from .potency import is_r_potent, minimal_potency

DEFAULT_CLOSURE_CAP = 10_000


class ClosureTruncated(RuntimeError):
    """A closure hit its member cap; verdicts on it are withheld."""


@dataclass(frozen=True)
class PatternSemigroup:
    """Multiplicatively closed set of patterns (unless ``truncated``)."""

    n: int
    members: tuple[PatternMatrix, ...]
    generator_count: int
    truncated: bool

    def __len__(self) -> int:
        return len(self.members)

    def require_complete(self) -> None:
        if self.truncated:
            raise ClosureTruncated("closure was truncated at the member cap")

    def union_pattern(self) -> PatternMatrix:
        rows = [0] * self.n
        for m in self.members:
            for i, mask in enumerate(m.rows):
                rows[i] |= mask
        return PatternMatrix(self.n, tuple(rows))


@dataclass(frozen=True)
class RationalSemigroup:
    """Multiplicatively closed set of exact matrices (unless ``truncated``)."""

    members: tuple[RMatrix, ...]
    truncated: bool

    def __len__(self) -> int:
        return len(self.members)

    def require_complete(self) -> None:
        if self.truncated:
            raise ClosureTruncated("closure was truncated at the member cap")

    def union_pattern(self) -> PatternMatrix:
        n = self.members[0].n
        rows = [0] * n
        for m in self.members:
            for i, mask in enumerate(m.pattern().rows):
                rows[i] |= mask
        return PatternMatrix(n, tuple(rows))


def pattern_closure(
    generators: list[PatternMatrix], cap: int = DEFAULT_CLOSURE_CAP
) -> PatternSemigroup:
    """Breadth-first closure under boolean product, deduplicated, cap-bounded."""
    if not generators:
        raise ValueError("need at least one generator")
    if cap < 1:
        raise ValueError("cap must be positive")
    n = generators[0].n
    if any(g.n != n for g in generators):
        raise ValueError("generators must share a dimension")
    members: list[PatternMatrix] = []
    seen: set[PatternMatrix] = set()
    queue: deque[PatternMatrix] = deque()
    truncated = False
    gen_count = len(set(generators))

    def admit(p: PatternMatrix) -> bool:
        nonlocal truncated
        if p in seen:
            return True
        if len(members) >= cap:
            truncated = True
            return False
        seen.add(p)
        members.append(p)
        queue.append(p)
        return True

    for g in generators:
        if not admit(g):
            break
    while queue and not truncated:
        z = queue.popleft()
        for m in list(members):
            if not admit(z * m) or not admit(m * z):
                break
    return PatternSemigroup(
        n=n, members=tuple(members), generator_count=gen_count, truncated=truncated
    )


def rational_closure(
    generators: list[RMatrix], cap: int = DEFAULT_CLOSURE_CAP
) -> RationalSemigroup:
    """Exact-arithmetic closure under matrix product, deduplicated, cap-bounded."""
    if not generators:
        raise ValueError("need at least one generator")
    n = generators[0].n
    if any(g.n != n for g in generators):
        raise ValueError("generators must share a dimension")
    members: list[RMatrix] = []
    seen: set[RMatrix] = set()
    queue: deque[RMatrix] = deque()
    truncated = False

    def admit(m: RMatrix) -> bool:
        nonlocal truncated
        if m in seen:
            return True
        if len(members) >= cap:
            truncated = True
            return False
        seen.add(m)
        members.append(m)
        queue.append(m)
        return True

    for g in generators:
        if not admit(g):
            break
    while queue and not truncated:
        z = queue.popleft()
        for m in list(members):
            if not admit(z @ m) or not admit(m @ z):
                break
    return RationalSemigroup(members=tuple(members), truncated=truncated)


def common_zero_entry(s: PatternSemigroup) -> tuple[int, int] | None:
    """A position at which every member vanishes (first in row-major order)."""
    s.require_complete()
    return s.union_pattern().first_zero()


def sum_has_zero(s: PatternSemigroup) -> bool:
    """Whether the entrywise sum of all members has a zero entry.

    For nonnegative members the sum vanishes exactly where all members do,
    so this is a zero of the union pattern.
    """
    s.require_complete()
    return s.union_pattern().first_zero() is not None


def semigroup_decomposable(s: PatternSemigroup) -> InvariantSubsetWitness | None:
    """Witness index set invariant under every member, or None.

    Works on the union pattern: each member's support is contained in the
    union's, so a closed set for the union is invariant for every member
    simultaneously.  The returned witness is the sink-most strongly
    connected component, re-verified against the union before returning.
    """
    s.require_complete()
    u = s.union_pattern()
    graph = Digraph.from_pattern(u)
    comps = graph.strongly_connected_components()
    if len(comps) == 1:
        return None
    order = _sink_first_order(comps, graph)
    witness = InvariantSubsetWitness(frozenset(comps[order[0]]), u.n)
    if not witness.verify_pattern(u):
        raise RuntimeError("sink component failed to verify as invariant")
    return witness


@dataclass(frozen=True)
class EquivalenceReport:
    """The decomposability facets of one closed semigroup, each computed separately.

    When a common zero exists at (i, j), the nonzero functional M -> M_{ij}
    vanishes on the semigroup and the selector pair (E_ii, E_jj) multiplies
    every member to zero; ``selector_pair`` records those indices.  A witness
    subset W yields off-diagonal common zeros at every (i, j) with i outside
    W and j inside.
    """

    decomposable: bool
    witness: InvariantSubsetWitness | None
    zero_entry: tuple[int, int] | None
    offdiagonal_zero_entry: tuple[int, int] | None
    selector_pair: tuple[int, int] | None
    sum_has_zero: bool

    @property
    def consistent(self) -> bool:
        facets = (self.witness is not None, self.zero_entry is not None, self.sum_has_zero)
        return all(facets) or not any(facets)

    def to_dict(self) -> dict:
        return {
            "decomposable": self.decomposable,
            "witness": None if self.witness is None else self.witness.sorted_indices(),
            "zero_entry": self.zero_entry,
            "offdiagonal_zero_entry": self.offdiagonal_zero_entry,
            "selector_pair": self.selector_pair,
            "sum_has_zero": self.sum_has_zero,
            "consistent": self.consistent,
        }


def equivalence_report(s: PatternSemigroup) -> EquivalenceReport:
    witness = semigroup_decomposable(s)
    zero = common_zero_entry(s)
    offdiag = None
    if witness is not None:
        inside = min(witness.subset)
        outside = min(i for i in range(s.n) if i not in witness.subset)
        offdiag = (outside, inside)
        u = s.union_pattern()
        if u.get(*offdiag):
            raise RuntimeError("witness-derived zero position is not zero")
    return EquivalenceReport(
        decomposable=witness is not None,
        witness=witness,
        zero_entry=zero,
        offdiagonal_zero_entry=offdiag,
        selector_pair=zero,
        sum_has_zero=sum_has_zero(s),
    )


def cyclic_semigroup(a: RMatrix, r: int) -> RationalSemigroup:
    """The distinct powers A, A^2, ..., A^(r-1); closed because A^r = A."""
    if not is_r_potent(a, r):
        raise ValueError(f"matrix is not {r}-potent")
    members: list[RMatrix] = []
    seen: set[RMatrix] = set()
    p = a
    for _ in range(1, r):
        if p not in seen:
            seen.add(p)
            members.append(p)
        p = p @ a
    return RationalSemigroup(members=tuple(members), truncated=False)


@dataclass(frozen=True)
class CyclicSemigroupReport:
    """Single-generator semigroup check: one permutation triangularizes every power."""

    prediction: DecompositionPrediction
    applicable: bool
    powers_triangular: tuple[bool, ...]

    @property
    def all_triangular(self) -> bool:
        return all(self.powers_triangular)

    def to_dict(self) -> dict:
        return {
            "prediction": self.prediction.to_dict(),
            "applicable": self.applicable,
            "powers_triangular": list(self.powers_triangular),
            "all_triangular": self.all_triangular,
        }


def cyclic_semigroup_decomposable_check(a: RMatrix, r: int) -> CyclicSemigroupReport:
    """When A decomposes, its triangularizing permutation must fit every power."""
    pred = main_decomposability_test(a, r)
    if not pred.actual_decomposable:
        return CyclicSemigroupReport(prediction=pred, applicable=False, powers_triangular=())
    t = block_triangularize(a)
    flags = []
    p = a
    for _ in range(1, r):
        flags.append(t.is_respected_by(p))
        p = p @ a
    return CyclicSemigroupReport(
        prediction=pred, applicable=True, powers_triangular=tuple(flags)
    )


@dataclass(frozen=True)
class BlockFloorRecord:
    indices: tuple[int, ...]
    is_nonzero: bool
    min_rank: int | None
    all_compressions_r_potent: bool
    floor_ok: bool

    def to_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "is_nonzero": self.is_nonzero,
            "min_rank": self.min_rank,
            "all_compressions_r_potent": self.all_compressions_r_potent,
            "floor_ok": self.floor_ok,
        }


@dataclass(frozen=True)
class RankFloorReport:
    closure_size: int
    truncated: bool
    decomposable: bool
    blocks: tuple[BlockFloorRecord, ...]

    @property
    def all_ok(self) -> bool:
        return all(b.floor_ok and b.all_compressions_r_potent for b in self.blocks)

    def to_dict(self) -> dict:
        return {
            "closure_size": self.closure_size,
            "truncated": self.truncated,
            "decomposable": self.decomposable,
            "blocks": [b.to_dict() for b in self.blocks],
            "all_ok": self.all_ok,
        }


def semigroup_rank_floor_check(
    generators: list[RMatrix], r: int, cap: int = DEFAULT_CLOSURE_CAP
) -> RankFloorReport:
    """Close the semigroup, triangularize it jointly, check each block's rank floor.

    Every nonzero diagonal block of the common triangularization is itself a
    closed set of r-potent compressions and must contain an element of rank
    at most r-1.  Raises ``ClosureTruncated`` when the closure hits the cap.
    """
    if not generators:
        raise ValueError("need at least one generator")
    for g in generators:
        if not is_r_potent(g, r):
            raise ValueError(f"every generator must be {r}-potent")
    closure = rational_closure(generators, cap)
    closure.require_complete()
    union = closure.union_pattern()
    union_matrix = RMatrix.from_rows(
        [[1 if union.get(i, j) else 0 for j in range(union.n)] for i in range(union.n)]
    )
    t = block_triangularize(union_matrix)
    records = []
    for comp in t.components:
        compressions = {m.submatrix(comp) for m in closure.members}
        nonzero = any(not c.is_zero() for c in compressions)
        if not nonzero:
            records.append(
                BlockFloorRecord(
                    indices=comp,
                    is_nonzero=False,
                    min_rank=None,
                    all_compressions_r_potent=True,
                    floor_ok=True,
                )
            )
            continue
        ranks = sorted(c.rank() for c in compressions)
        records.append(
            BlockFloorRecord(
                indices=comp,
                is_nonzero=True,
                min_rank=ranks[0],
                all_compressions_r_potent=all(is_r_potent(c, r) for c in compressions),
                floor_ok=ranks[0] <= r - 1,
            )
        )
    return RankFloorReport(
        closure_size=len(closure),
        truncated=closure.truncated,
        decomposable=len(t.components) > 1,
        blocks=tuple(records),
    )


@dataclass(frozen=True)
class SymmetricGroupReport:
    """Potency classification of all n x n permutation matrices.

    ``potency_counts`` maps the minimal potency exponent to the number of
    group elements attaining it; the minimal potency of a permutation matrix
    is the lcm of its cycle lengths plus one.  The union of the supports of
    all elements covers every position, so the group as a semigroup has no
    common zero entry and is indecomposable.
    """

    n: int
    order: int
    potency_counts: tuple[tuple[int, int], ...]
    formula_mismatches: int
    max_potency: int
    full_cycle_potency: int
    sum_positive: bool

    @property
    def indecomposable(self) -> bool:
        return self.sum_positive

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "order": self.order,
            "potency_counts": [list(pair) for pair in self.potency_counts],
            "formula_mismatches": self.formula_mismatches,
            "max_potency": self.max_potency,
            "full_cycle_potency": self.full_cycle_potency,
            "sum_positive": self.sum_positive,
            "indecomposable": self.indecomposable,
        }


def symmetric_group_analysis(n: int) -> SymmetricGroupReport:
    """Enumerate all n! permutation matrices and classify their potencies."""
    if not 1 <= n <= 8:
        raise ValueError("enumeration supported for 1 <= n <= 8")
    counts: Counter[int] = Counter()
    mismatches = 0
    union_rows = [0] * n
    for images in itertools.permutations(range(n)):
        perm = Permutation(tuple(images))
        matrix = perm.to_matrix()
        expected = lcm(*perm.cycle_lengths()) + 1
        got = minimal_potency(matrix, cap=max(2, expected))
        if got != expected:
            mismatches += 1
        counts[got if got is not None else expected] += 1
        for i, mask in enumerate(matrix.pattern().rows):
            union_rows[i] |= mask
    full = (1 << n) - 1
    return SymmetricGroupReport(
        n=n,
        order=sum(counts.values()),
        potency_counts=tuple(sorted(counts.items())),
        formula_mismatches=mismatches,
        max_potency=max(counts),
        full_cycle_potency=n + 1,
        sum_positive=all(mask == full for mask in union_rows),
    )

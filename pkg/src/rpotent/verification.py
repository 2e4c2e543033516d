"""Named property suites over seeded families of generated matrices.

Each check id maps to a runner that generates its family deterministically
from a seed, evaluates the property on every instance, and reports pass/fail
counts with the first counterexample serialized for reproduction.  The same
runners back the command-line ``verify`` command and the acceptance tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from .decomposition import (
    is_decomposable,
    main_decomposability_test,
    rank_one_idempotent_diag_test,
)
from .generators import (
    cycle_matrix,
    random_r_potent,
    random_rank_one_idempotent,
    random_singular_zero_diag,
    rank_dominant_semigroup_generators,
)
from .matrix import PatternMatrix, Permutation, RMatrix
from .potency import is_r_potent, rank_trace_check, zero_diagonal_powers
from .semigroup import (
    common_zero_entry,
    cyclic_semigroup,
    cyclic_semigroup_decomposable_check,
    equivalence_report,
    pattern_closure,
    semigroup_decomposable,
    semigroup_rank_floor_check,
    sum_has_zero,
    symmetric_group_analysis,
)
from .spectral import is_primitive, perron_value, trace_zero_check, wielandt_check
from .structure import analyze_structure, count_adjacent_zero_pairs, reorder_to_avoid_consecutive_zeros

DEFAULT_SEED = 12345


@dataclass(frozen=True)
class Failure:
    trial: int
    seed: int | None
    detail: str
    matrix: dict | None = None

    def to_dict(self) -> dict:
        return {"trial": self.trial, "seed": self.seed, "detail": self.detail, "matrix": self.matrix}


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    description: str
    total: int
    passed: int
    failures: tuple[Failure, ...] = ()

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total

    def to_dict(self) -> dict:
        return {
            "check": self.check_id,
            "description": self.description,
            "total": self.total,
            "passed": self.passed,
            "ok": self.ok,
            "failures": [f.to_dict() for f in self.failures[:3]],
        }


class _Recorder:
    """Tallies trials and keeps the first few counterexamples."""

    def __init__(self, check_id: str, description: str, keep: int = 3):
        self.check_id = check_id
        self.description = description
        self.total = 0
        self.passed = 0
        self.failures: list[Failure] = []
        self.keep = keep

    def record(
        self,
        ok: bool,
        trial: int,
        seed: int | None = None,
        detail: str = "",
        matrix: RMatrix | None = None,
    ) -> None:
        self.total += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < self.keep:
            self.failures.append(
                Failure(
                    trial=trial,
                    seed=seed,
                    detail=detail,
                    matrix=None if matrix is None else matrix.to_json_dict(),
                )
            )

    def result(self) -> CheckResult:
        return CheckResult(
            check_id=self.check_id,
            description=self.description,
            total=self.total,
            passed=self.passed,
            failures=tuple(self.failures),
        )


def _case_seed(seed: int, i: int) -> int:
    return seed + 7919 * i


# ---------------------------------------------------------------------------
# seeded families


def high_rank_cases(count: int, seed: int) -> Iterator[tuple[int, int, int, RMatrix]]:
    """r-potent matrices of verified rank strictly above r-1."""
    for i in range(count):
        r = (2, 3, 4, 5)[i % 4]
        target = r + (i % 3)
        case_seed = _case_seed(seed, i)
        max_dim = (14, 22, 30)[i % 3]
        yield i, case_seed, r, random_r_potent(r, target, case_seed, max_dim=max_dim)


def singular_zero_diag_cases(count: int, seed: int) -> Iterator[tuple[int, int, int, RMatrix]]:
    """Singular r-potents of rank <= r-1 whose powers all carry a zero diagonal entry."""
    for i in range(count):
        r = (3, 4, 5)[i % 3]
        case_seed = _case_seed(seed, i)
        yield i, case_seed, r, random_singular_zero_diag(r, case_seed)


def rank_one_cases(count: int, seed: int) -> Iterator[tuple[int, int, RMatrix]]:
    """Rank-one nonnegative idempotents, a mix of positive and zero-padded."""
    for i in range(count):
        dim = 2 + (i % 5)
        case_seed = _case_seed(seed, i)
        padded = (True, False, None)[i % 3]
        yield i, case_seed, random_rank_one_idempotent(dim, case_seed, padded)


def rank_trace_cases(count: int, seed: int) -> Iterator[tuple[int, int, int, RMatrix]]:
    """General r-potent mix across r in {2,3,4,5}, ranks 1..8, dimensions <= 30."""
    for i in range(count):
        r = (2, 3, 4, 5)[i % 4]
        target = 1 + (i % 8)
        case_seed = _case_seed(seed, i)
        yield i, case_seed, r, random_r_potent(r, target, case_seed, max_dim=(14, 22, 30)[i % 3])


def kron_cases(
    count: int, seed: int, idempotent_b: bool
) -> Iterator[tuple[int, int, int, RMatrix, RMatrix]]:
    """Pairs (A, B): rank(A) > r-1 and B a nonzero r-potent (or idempotent)."""
    for i in range(count):
        r = (2, 3, 4)[i % 3]
        case_seed = _case_seed(seed, i)
        a = random_r_potent(r, r + (i % 2), case_seed, max_dim=9)
        if idempotent_b:
            b = random_r_potent(2, 1 + (i % 2), case_seed + 1, max_dim=4)
        else:
            b = random_r_potent(r, 1 + (i % 2), case_seed + 1, max_dim=4)
        yield i, case_seed, r, a, b


def semigroup_family_cases(
    count: int, seed: int
) -> Iterator[tuple[int, int, int, list[RMatrix]]]:
    """Generator families whose full closures stay r-potent of rank > r-1."""
    for i in range(count):
        r = (2, 3, 4)[i % 3]
        case_seed = _case_seed(seed, i)
        gens = rank_dominant_semigroup_generators(r, 1 + (i % 3), case_seed)
        yield i, case_seed, r, gens


def random_pattern(rng: random.Random, n: int, density: float) -> PatternMatrix:
    rows = []
    for _ in range(n):
        mask = 0
        for j in range(n):
            if rng.random() < density:
                mask |= 1 << j
        rows.append(mask)
    return PatternMatrix(n, tuple(rows))


# ---------------------------------------------------------------------------
# runners


def run_wielandt(trials: int = 100, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """Primitive patterns raised to the n^2 - 2n + 2 power are strictly positive."""
    rec = _Recorder("2.4", "primitive patterns have a positive squared-index power")
    dims = [n] if n else [2, 3, 4, 5, 6]
    for dim in dims:
        rng = random.Random(seed + dim)
        collected = 0
        attempts = 0
        while collected < trials and attempts < trials * 500:
            attempts += 1
            p = random_pattern(rng, dim, rng.uniform(0.2, 0.7))
            m = RMatrix.from_rows([[1 if p.get(i, j) else 0 for j in range(dim)] for i in range(dim)])
            if not is_primitive(m):
                continue
            collected += 1
            rec.record(wielandt_check(m), collected, seed=seed + dim, matrix=m, detail=f"n={dim}")
        if collected < trials:
            rec.record(False, -1, seed=seed + dim, detail=f"could not sample {trials} primitive patterns at n={dim}")
    return rec.result()


def run_zero_diagonal_chain(trials: int = 100, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """A potent matrix whose every power has a zero diagonal entry is reducible and singular."""
    rec = _Recorder("2.5", "all-powers-zero-diagonal forces decomposability and a zero eigenvalue")
    for i, case_seed, r, m in singular_zero_diag_cases(trials, seed):
        hypothesis = zero_diagonal_powers(m, r) == set(range(1, r))
        ok = hypothesis and is_decomposable(m) and m.rank() < m.n
        rec.record(ok, i, seed=case_seed, matrix=m, detail=f"r={r}")
    return rec.result()


def run_rank_trace(trials: int = 500, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """rank(A) equals trace(A^(r-1)) exactly, for every generated r-potent."""
    rec = _Recorder("2.6", "rank equals projection trace")
    for i, case_seed, r, m in rank_trace_cases(trials, seed):
        rec.record(rank_trace_check(m, r), i, seed=case_seed, matrix=m, detail=f"r={r}")
    return rec.result()


def run_rank_one_diagonal(trials: int = 100, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """Rank-one idempotents decompose exactly when a diagonal entry is zero."""
    rec = _Recorder("3.1", "rank-one idempotent zero-diagonal criterion")
    for i, case_seed, m in rank_one_cases(trials, seed):
        rec.record(
            rank_one_idempotent_diag_test(m) == is_decomposable(m),
            i,
            seed=case_seed,
            matrix=m,
        )
    return rec.result()


def run_decomposability_criteria(trials: int = 300, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """Both prediction branches (high rank; singular with zero-diagonal powers) decompose."""
    rec = _Recorder("3.2", "rank and diagonal criteria force decomposability")
    high = (2 * trials) // 3
    for i, case_seed, r, m in high_rank_cases(high, seed):
        pred = main_decomposability_test(m, r)
        ok = pred.case == "rank_above_threshold" and pred.actual_decomposable
        rec.record(ok, i, seed=case_seed, matrix=m, detail=f"r={r} case={pred.case}")
    for i, case_seed, r, m in singular_zero_diag_cases(trials - high, seed + 1):
        pred = main_decomposability_test(m, r)
        ok = pred.case == "singular_zero_diagonal" and pred.actual_decomposable
        rec.record(ok, high + i, seed=case_seed, matrix=m, detail=f"r={r} case={pred.case}")
    return rec.result()


def structure_case_ok(m: RMatrix, r: int) -> tuple[bool, str]:
    """Full block-structure contract for one decomposable r-potent matrix."""
    report = analyze_structure(m, r)
    if not report.applicable:
        return True, "indecomposable, nothing to check"
    k = report.k
    if not report.blocks_ok:
        return False, "a diagonal block is neither zero nor an indecomposable potent block"
    if not report.rank_sum_ok:
        return False, "block ranks do not sum to the rank"
    lower = -(-k // (r - 1))
    if not (lower <= report.nonzero_count <= k):
        return False, f"nonzero block count {report.nonzero_count} outside [{lower}, {k}]"
    reordered = reorder_to_avoid_consecutive_zeros(report.triangularization)
    if not reordered.is_valid():
        return False, "reordered triangularization is not block upper triangular"
    pairs = count_adjacent_zero_pairs(reordered)
    if pairs != 0:
        return False, f"no zero-separating order found (best has {pairs} adjacent pairs)"
    if report.total_count > 2 * k + 1:
        return False, f"{report.total_count} blocks exceeds {2 * k + 1}"
    return True, ""


def run_structure(trials: int = 300, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """Block dichotomy, rank sums, and count bounds on the decomposable families."""
    rec = _Recorder("4.1", "maximal triangularization structure bounds")
    high = (2 * trials) // 3
    for i, case_seed, r, m in high_rank_cases(high, seed):
        ok, detail = structure_case_ok(m, r)
        rec.record(ok, i, seed=case_seed, matrix=m, detail=detail)
    for i, case_seed, r, m in singular_zero_diag_cases(trials - high, seed + 1):
        ok, detail = structure_case_ok(m, r)
        rec.record(ok, high + i, seed=case_seed, matrix=m, detail=detail)
    return rec.result()


def run_kron(trials: int = 100, seed: int = DEFAULT_SEED, n: int | None = None, idempotent_b: bool = False) -> CheckResult:
    """Kronecker products with a high-rank factor are decomposable r-potents of high rank."""
    check_id = "5.2" if idempotent_b else "5.1"
    rec = _Recorder(check_id, "Kronecker products inherit potency and decompose")
    for i, case_seed, r, a, b in kron_cases(trials, seed, idempotent_b):
        k = a.kron(b)
        ok = (
            is_r_potent(k, r)
            and k.rank() == a.rank() * b.rank()
            and k.rank() > r - 1
            and is_decomposable(k)
        )
        rec.record(ok, i, seed=case_seed, matrix=k, detail=f"r={r}")
    return rec.result()


def run_cyclic_semigroup(trials: int = 100, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """One permutation triangularizes every power of a decomposable r-potent."""
    rec = _Recorder("6.1", "power semigroup shares one triangularizing permutation")
    half = trials // 2
    cases = list(high_rank_cases(half, seed)) + list(singular_zero_diag_cases(trials - half, seed + 1))
    for i, (trial, case_seed, r, m) in enumerate(cases):
        s = cyclic_semigroup(m, r)
        closed = all(x @ y in set(s.members) for x in s.members for y in s.members)
        rep = cyclic_semigroup_decomposable_check(m, r)
        ok = closed and rep.prediction.agrees and (not rep.applicable or rep.all_triangular)
        rec.record(ok, i, seed=case_seed, matrix=m, detail=f"r={r}")
    return rec.result()


def _random_closure_trials(
    rec: _Recorder,
    trials: int,
    seed: int,
    judge: Callable[[object], tuple[bool, str]],
) -> None:
    rng = random.Random(seed)
    collected = 0
    attempts = 0
    while collected < trials and attempts < trials * 50:
        attempts += 1
        dim = rng.randint(2, 4)
        gens = [random_pattern(rng, dim, rng.uniform(0.2, 0.8)) for _ in range(rng.randint(1, 2))]
        s = pattern_closure(gens, cap=4000)
        if s.truncated:
            continue
        collected += 1
        ok, detail = judge(s)
        rec.record(ok, collected, seed=seed, detail=detail)
    if collected < trials:
        rec.record(False, -1, seed=seed, detail="could not collect enough complete closures")


def run_equivalences(trials: int = 300, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """Witness, common zero entry, and sum-with-zero agree on random closures."""
    rec = _Recorder("6.2", "decomposability facets agree on closed semigroups")

    def judge(s) -> tuple[bool, str]:
        rep = equivalence_report(s)
        return rep.consistent, "" if rep.consistent else "facets disagree"

    _random_closure_trials(rec, trials, seed, judge)
    return rec.result()


def run_semigroup_common_zero(trials: int = 100, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """Closures of rank-dominant families decompose with a common zero entry."""
    rec = _Recorder("6.3", "rank-dominant semigroups have a common zero entry")
    for i, case_seed, r, gens in semigroup_family_cases(trials, seed):
        s = pattern_closure([g.pattern() for g in gens])
        if s.truncated:
            rec.record(False, i, seed=case_seed, detail="closure truncated")
            continue
        rep = equivalence_report(s)
        ok = (
            rep.consistent
            and rep.witness is not None
            and common_zero_entry(s) is not None
            and sum_has_zero(s)
        )
        rec.record(ok, i, seed=case_seed, matrix=gens[0], detail=f"r={r} gens={len(gens)}")
    return rec.result()


def run_rank_floor(trials: int = 50, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """Every nonzero diagonal block of a closed rank-dominant semigroup hits rank <= r-1."""
    rec = _Recorder("6.4", "triangularized semigroup blocks contain a low-rank element")
    for i, case_seed, r, gens in semigroup_family_cases(trials, seed):
        report = semigroup_rank_floor_check(gens, r)
        rec.record(report.all_ok, i, seed=case_seed, matrix=gens[0], detail=f"r={r}")
    return rec.result()


def run_sum_zero(trials: int = 200, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """Decomposability of a closed semigroup matches its sum having a zero entry."""
    rec = _Recorder("7.1", "sum-with-zero matches decomposability on closures")

    def judge(s) -> tuple[bool, str]:
        ok = (semigroup_decomposable(s) is not None) == sum_has_zero(s)
        return ok, "" if ok else "sum facet disagrees with witness facet"

    _random_closure_trials(rec, trials, seed, judge)
    return rec.result()


def run_symmetric_group(trials: int = 0, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """Permutation-matrix potency classification and group indecomposability."""
    rec = _Recorder("7.2", "permutation group classification and positivity of the sum")
    dims = [n] if n else [2, 3, 4, 5, 6]
    for dim in dims:
        report = symmetric_group_analysis(dim)
        counts = dict(report.potency_counts)
        ok = (
            report.sum_positive
            and report.formula_mismatches == 0
            and counts.get(dim + 1, 0) > 0
        )
        rec.record(ok, dim, seed=None, detail=f"n={dim} counts={report.potency_counts}")
    return rec.result()


def run_perron_trace(trials: int = 100, seed: int = DEFAULT_SEED, n: int | None = None) -> CheckResult:
    """Spectral radius 1 for every nonzero potent matrix; zero trace at rank r-1."""
    rec = _Recorder("perron", "unit spectral radius and zero trace where applicable")
    for i, case_seed, r, m in high_rank_cases(trials // 2, seed):
        value = perron_value(m)
        rec.record(abs(value - 1.0) <= 1e-9, i, seed=case_seed, matrix=m, detail=f"perron={value}")
    for i in range(trials - trials // 2):
        r = (3, 4, 5, 6)[i % 4]
        case_seed = _case_seed(seed, i)
        rng = random.Random(case_seed)
        m = cycle_matrix(r - 1).conjugate(Permutation.random(r - 1, rng))
        ok = abs(perron_value(m) - 1.0) <= 1e-9 and trace_zero_check(m, r)
        rec.record(ok, trials // 2 + i, seed=case_seed, matrix=m, detail=f"r={r}")
    return rec.result()


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    description: str
    runner: Callable[..., CheckResult]
    default_trials: int
    accepts_n: bool = False


CHECKS: dict[str, CheckSpec] = {
    spec.check_id: spec
    for spec in [
        CheckSpec("2.4", "primitive patterns have a positive power at exponent n^2-2n+2", run_wielandt, 100, accepts_n=True),
        CheckSpec("2.5", "all-powers-zero-diagonal implies decomposable with zero eigenvalue", run_zero_diagonal_chain, 100),
        CheckSpec("2.6", "rank equals trace of the idempotent projection", run_rank_trace, 500),
        CheckSpec("3.1", "rank-one idempotents: decomposable iff zero diagonal entry", run_rank_one_diagonal, 100),
        CheckSpec("3.2", "rank/diagonal criteria force decomposability", run_decomposability_criteria, 300),
        CheckSpec("4.1", "block structure of maximal triangularizations", run_structure, 300),
        CheckSpec("5.1", "Kronecker product with a potent factor decomposes", run_kron, 100),
        CheckSpec("5.2", "Kronecker product with an idempotent factor decomposes",
                  lambda trials=100, seed=DEFAULT_SEED, n=None: run_kron(trials, seed, n, idempotent_b=True), 100),
        CheckSpec("6.1", "powers share one triangularizing permutation", run_cyclic_semigroup, 100),
        CheckSpec("6.2", "decomposability facets agree on closed semigroups", run_equivalences, 300),
        CheckSpec("6.3", "rank-dominant semigroups have a common zero entry", run_semigroup_common_zero, 100),
        CheckSpec("6.4", "semigroup blocks contain an element of rank at most r-1", run_rank_floor, 50),
        CheckSpec("7.1", "sum-with-zero matches decomposability", run_sum_zero, 200),
        CheckSpec("7.2", "permutation group potency classes and indecomposability", run_symmetric_group, 0, accepts_n=True),
        CheckSpec("perron", "unit spectral radius and exact zero trace", run_perron_trace, 100),
    ]
}


def run_check(
    check_id: str,
    trials: int | None = None,
    seed: int | None = None,
    n: int | None = None,
) -> CheckResult:
    if check_id not in CHECKS:
        raise KeyError(f"unknown check id {check_id!r}")
    spec = CHECKS[check_id]
    kwargs: dict = {
        "trials": spec.default_trials if trials is None else trials,
        "seed": DEFAULT_SEED if seed is None else seed,
    }
    kwargs["n"] = n
    return spec.runner(**kwargs)

"""Detection of the A^r = A property and its exact arithmetic consequences.

A matrix with A^r = A for some r >= 2 is called r-potent (idempotent is the
r = 2 case).  For such matrices A^(r-1) is an idempotent projection and the
rank of A equals the trace of that projection, an identity this module checks
with exact arithmetic only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .matrix import RMatrix, format_entry

DEFAULT_POTENCY_CAP = 64


def is_r_potent(a: RMatrix, r: int) -> bool:
    """True iff the exact r-th power of ``a`` equals ``a``."""
    if r < 2:
        raise ValueError("potency exponent must be at least 2")
    return a.pow(r) == a


def minimal_potency(a: RMatrix, cap: int = DEFAULT_POTENCY_CAP) -> int | None:
    """Smallest r in [2, cap] with A^r = A, or None if there is none.

    For a permutation matrix this is the lcm of the cycle lengths plus one.
    Absence is a value, not an error: matrices that are not potent within the
    cap simply report None.
    """
    if cap < 2:
        raise ValueError("cap must be at least 2")
    p = a
    for r in range(2, cap + 1):
        p = p @ a
        if p == a:
            return r
    return None


def idempotent_projection(a: RMatrix, r: int) -> RMatrix:
    """A^(r-1), which squares to itself whenever A^r = A."""
    if not is_r_potent(a, r):
        raise ValueError(f"matrix is not {r}-potent")
    return a.pow(r - 1)


def rank_trace_check(a: RMatrix, r: int) -> bool:
    """Exact test of rank(A) == trace(A^(r-1)) for an r-potent A."""
    if not is_r_potent(a, r):
        raise ValueError(f"matrix is not {r}-potent")
    t = a.pow(r - 1).trace()
    return t.denominator == 1 and a.rank() == t


def zero_diagonal_powers(a: RMatrix, r: int) -> set[int]:
    """Exponents j in {1, ..., r-1} for which A^j has a zero diagonal entry."""
    if r < 2:
        raise ValueError("potency exponent must be at least 2")
    out = set()
    p = a
    for j in range(1, r):
        if p.has_zero_diagonal_entry():
            out.add(j)
        if j < r - 1:
            p = p @ a
    return out


@dataclass(frozen=True)
class PotencyReport:
    """Summary of the potency facts for one matrix at one exponent."""

    is_r_potent: bool
    r: int
    minimal_r: int | None
    rank: int
    trace_of_projection: Fraction

    @property
    def rank_trace_ok(self) -> bool:
        return not self.is_r_potent or self.trace_of_projection == self.rank

    def to_dict(self) -> dict:
        return {
            "is_r_potent": self.is_r_potent,
            "r": self.r,
            "minimal_r": self.minimal_r,
            "rank": self.rank,
            "trace_of_projection": format_entry(self.trace_of_projection),
            "rank_trace_ok": self.rank_trace_ok,
        }


def potency_report(a: RMatrix, r: int, cap: int = DEFAULT_POTENCY_CAP) -> PotencyReport:
    if r < 2:
        raise ValueError("potency exponent must be at least 2")
    return PotencyReport(
        is_r_potent=is_r_potent(a, r),
        r=r,
        minimal_r=minimal_potency(a, cap),
        rank=a.rank(),
        trace_of_projection=a.pow(r - 1).trace(),
    )

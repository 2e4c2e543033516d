"""Period, primitivity, and Perron value estimates for nonnegative matrices.

Everything structural (period, primitivity, positivity of the power at the
n^2 - 2n + 2 exponent) is exact.  The only floating point in the package is
the power iteration that estimates the spectral radius; its tolerance and
iteration cap are explicit arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decomposition import block_triangularize, is_decomposable
from .matrix import RMatrix
from .potency import is_r_potent

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 10_000
WIELANDT_REPORT_DIM_LIMIT = 16


class PowerIterationError(RuntimeError):
    """Raised when power iteration fails to converge; carries the last estimate."""

    def __init__(self, message: str, last_estimate: float | None):
        super().__init__(message)
        self.last_estimate = last_estimate


def period(a: RMatrix) -> int:
    """Gcd of all cycle lengths of an indecomposable nonzero matrix.

    Computed from a BFS level assignment on the strongly connected support
    digraph: the gcd over all edges v -> w of level(v) + 1 - level(w) equals
    the gcd of all cycle lengths.
    """
    if a.is_zero():
        raise ValueError("period is undefined for the zero matrix")
    if is_decomposable(a):
        raise ValueError("period is defined only for indecomposable matrices")
    graph_out = a.pattern().column_masks()
    n = a.n
    level = [-1] * n
    level[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            m = graph_out[v]
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                if level[w] < 0:
                    level[w] = level[v] + 1
                    nxt.append(w)
        frontier = nxt
    g = 0
    for v in range(n):
        m = graph_out[v]
        while m:
            w = (m & -m).bit_length() - 1
            m &= m - 1
            g = math.gcd(g, abs(level[v] + 1 - level[w]))
    return g


def is_primitive(a: RMatrix) -> bool:
    """Indecomposable with period one; False (not an error) otherwise."""
    if a.is_zero() or is_decomposable(a):
        return False
    return period(a) == 1


def wielandt_exponent(n: int) -> int:
    return n * n - 2 * n + 2


def wielandt_check(a: RMatrix) -> bool:
    """Exact positivity of A^(n^2 - 2n + 2), the guaranteed-positive power.

    Rejects non-primitive input: the exponent only promises positivity for
    primitive matrices.
    """
    if not is_primitive(a):
        raise ValueError("positivity of the squared-index power needs a primitive matrix")
    return a.pow(wielandt_exponent(a.n)).is_positive()


def _composite_period(a: RMatrix) -> int:
    """Lcm of the periods of the nonzero diagonal blocks of the triangularization.

    Raising the matrix to this exponent turns every peripheral eigenvalue
    into the spectral radius itself, which is what lets power iteration
    converge on input whose plain iterates would oscillate.
    """
    h = 1
    for blk in block_triangularize(a).diagonal_blocks:
        if not blk.is_zero():
            h = math.lcm(h, period(blk))
    return h


def perron_value(
    a: RMatrix, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> float:
    """Spectral radius estimate by power iteration on a floating-point copy.

    Iterates on B = A^h, where h is the lcm of the diagonal-block periods,
    and reports the h-th root of B's estimate: every peripheral eigenvalue of
    B equals rho(A)^h, so the quotient sequence converges even when plain
    iteration on A would cycle.  Non-convergence within ``max_iter`` raises
    ``PowerIterationError`` carrying the last estimate.
    """
    if a.is_zero():
        raise ValueError("spectral radius estimation needs a nonzero matrix")
    h = _composite_period(a)
    af = np.array([[float(x) for x in row] for row in a.entries], dtype=float)
    bf = np.linalg.matrix_power(af, h)
    x = np.ones(a.n) / math.sqrt(a.n)
    prev: float | None = None
    for _ in range(max_iter):
        y = bf @ x
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            # B^k annihilated a positive start vector, so B is nilpotent.
            return 0.0
        est = float(x @ y)
        x = y / norm
        if prev is not None and abs(est - prev) <= tol:
            return est ** (1.0 / h)
        prev = est
    last = None if prev is None else (prev ** (1.0 / h) if prev > 0 else prev)
    raise PowerIterationError(
        f"power iteration did not converge within {max_iter} iterations", last
    )


def trace_zero_check(a: RMatrix, r: int) -> bool:
    """Exact zero-trace test for indecomposable r-potent matrices of rank r-1.

    The nonzero eigenvalues of such a matrix are all the (r-1)-th roots of
    unity, each simple, and those sum to zero whenever r >= 3.  For r = 2 the
    sum degenerates to 1, so that case is rejected rather than tested.
    """
    if r < 3:
        raise ValueError("the zero-trace identity needs r >= 3 (the r = 2 sum is 1)")
    if not is_r_potent(a, r):
        raise ValueError(f"matrix is not {r}-potent")
    if is_decomposable(a):
        raise ValueError("zero-trace identity applies to indecomposable matrices only")
    if a.rank() != r - 1:
        raise ValueError("zero-trace identity needs rank exactly r - 1")
    return a.trace() == 0


@dataclass(frozen=True)
class SpectralReport:
    """Spectral facts for one matrix; fields are None where undefined.

    Period, primitivity, and the peripheral eigenvalue count are defined for
    nonzero indecomposable input only.  ``wielandt_positive`` is evaluated
    for primitive matrices up to ``WIELANDT_REPORT_DIM_LIMIT`` (the exponent
    grows quadratically with the dimension).
    """

    period: int | None
    is_primitive: bool | None
    perron_value: float
    wielandt_positive: bool | None
    expected_peripheral_count: int | None
    trace_zero_applicable: bool
    trace_is_zero: bool | None

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "is_primitive": self.is_primitive,
            "perron_value": self.perron_value,
            "wielandt_positive": self.wielandt_positive,
            "expected_peripheral_count": self.expected_peripheral_count,
            "trace_zero_applicable": self.trace_zero_applicable,
            "trace_is_zero": self.trace_is_zero,
        }


def spectral_report(
    a: RMatrix,
    r: int | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SpectralReport:
    nonzero = not a.is_zero()
    decomposable = is_decomposable(a)
    h: int | None = None
    primitive: bool | None = None
    wielandt: bool | None = None
    if nonzero and not decomposable:
        h = period(a)
        primitive = h == 1
        if primitive and a.n <= WIELANDT_REPORT_DIM_LIMIT:
            wielandt = wielandt_check(a)
    perron = perron_value(a, tol=tol, max_iter=max_iter) if nonzero else 0.0
    applicable = (
        r is not None
        and r >= 3
        and nonzero
        and not decomposable
        and is_r_potent(a, r)
        and a.rank() == r - 1
    )
    return SpectralReport(
        period=h,
        is_primitive=primitive,
        perron_value=perron,
        wielandt_positive=wielandt,
        expected_peripheral_count=h,
        trace_zero_applicable=applicable,
        trace_is_zero=(a.trace() == 0) if applicable else None,
    )

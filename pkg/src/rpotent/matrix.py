"""Exact dense matrices over the rationals, their zero patterns, and permutations.

Everything downstream (potency detection, reducibility, semigroup closures)
is built from three immutable value types:

* ``RMatrix``       square nonnegative matrix with ``Fraction`` entries
* ``PatternMatrix`` boolean support of such a matrix, stored as row bitmasks
* ``Permutation``   bijection of ``{0, ..., n-1}`` for simultaneous relabeling

Arithmetic in this module is exact; no floating point enters.  Storage is
dense: the target dimensions are at most a few dozen, where dense layout is
the simplest thing that works.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

Entry = Fraction | int | str

_ZERO = Fraction(0)
_ONE = Fraction(1)


def coerce_entry(value: Entry) -> Fraction:
    """Turn an int, ``"p/q"`` string, or Fraction into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse matrix entry {value!r}") from exc
    raise TypeError(f"unsupported matrix entry type {type(value).__name__}")


def format_entry(x: Fraction) -> int | str:
    """Render an entry for JSON: a plain int when integral, else ``"p/q"``."""
    if x.denominator == 1:
        return int(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PatternMatrix:
    """Zero/nonzero support of a nonnegative matrix.

    Bit ``j`` of ``rows[i]`` is set iff entry ``(i, j)`` is nonzero.  Because
    nonnegative products cannot cancel, supports compose multiplicatively:
    the support of ``A @ B`` equals the boolean product of the supports.
    That makes patterns a faithful carrier for closure computations.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("pattern dimension must be positive")
        if len(self.rows) != self.n:
            raise ValueError("row count does not match dimension")
        full = (1 << self.n) - 1
        for mask in self.rows:
            if mask & ~full:
                raise ValueError("row bitmask wider than dimension")

    @classmethod
    def from_bools(cls, grid: Sequence[Sequence[bool]]) -> PatternMatrix:
        n = len(grid)
        rows = []
        for row in grid:
            if len(row) != n:
                raise ValueError("pattern must be square")
            mask = 0
            for j, v in enumerate(row):
                if v:
                    mask |= 1 << j
            rows.append(mask)
        return cls(n, tuple(rows))

    @classmethod
    def from_packed(cls, n: int, packed: int) -> PatternMatrix:
        """Unpack row-major bits: bit ``i*n + j`` of ``packed`` is entry (i, j)."""
        full = (1 << n) - 1
        return cls(n, tuple((packed >> (i * n)) & full for i in range(n)))

    @classmethod
    def identity(cls, n: int) -> PatternMatrix:
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def full(cls, n: int) -> PatternMatrix:
        return cls(n, ((1 << n) - 1,) * n)

    def get(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def __mul__(self, other: PatternMatrix) -> PatternMatrix:
        if not isinstance(other, PatternMatrix):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        out = []
        for mask in self.rows:
            acc = 0
            m = mask
            while m:
                k = (m & -m).bit_length() - 1
                acc |= other.rows[k]
                m &= m - 1
            out.append(acc)
        return PatternMatrix(self.n, tuple(out))

    def __or__(self, other: PatternMatrix) -> PatternMatrix:
        if not isinstance(other, PatternMatrix):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        return PatternMatrix(self.n, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def column_masks(self) -> tuple[int, ...]:
        """Bitmask per column: bit ``i`` of result[j] iff entry (i, j) is set."""
        cols = [0] * self.n
        for i, mask in enumerate(self.rows):
            m = mask
            while m:
                j = (m & -m).bit_length() - 1
                cols[j] |= 1 << i
                m &= m - 1
        return tuple(cols)

    def is_full(self) -> bool:
        full = (1 << self.n) - 1
        return all(mask == full for mask in self.rows)

    def count_nonzero(self) -> int:
        return sum(mask.bit_count() for mask in self.rows)

    def first_zero(self) -> tuple[int, int] | None:
        """First position (row-major) at which the pattern is zero, if any."""
        full = (1 << self.n) - 1
        for i, mask in enumerate(self.rows):
            missing = full & ~mask
            if missing:
                return i, (missing & -missing).bit_length() - 1
        return None

    def zero_positions(self) -> Iterator[tuple[int, int]]:
        for i in range(self.n):
            for j in range(self.n):
                if not self.get(i, j):
                    yield i, j

    def to_bools(self) -> list[list[bool]]:
        return [[self.get(i, j) for j in range(self.n)] for i in range(self.n)]


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{0, ..., n-1}``, stored as the image tuple.

    ``to_matrix`` produces the matrix P with P e_j = e_{images[j]}, so
    conjugating by P relabels coordinate i of the original as position
    ``images^{-1}(i)``.
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if n < 1:
            raise ValueError("permutation size must be positive")
        if sorted(self.images) != list(range(n)):
            raise ValueError("images do not form a bijection")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        images = list(range(n))
        images[i], images[j] = images[j], images[i]
        return cls(tuple(images))

    @classmethod
    def random(cls, n: int, rng) -> Permutation:
        """Fisher-Yates shuffle driven by ``rng.randrange`` (reproducible)."""
        images = list(range(n))
        for i in range(n - 1, 0, -1):
            j = rng.randrange(i + 1)
            images[i], images[j] = images[j], images[i]
        return cls(tuple(images))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: Permutation) -> Permutation:
        """(self . other)(i) = self(other(i))."""
        if other.n != self.n:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.images[other.images[i]] for i in range(self.n)))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, img in enumerate(self.images):
            inv[img] = i
        return Permutation(tuple(inv))

    def cycle_lengths(self) -> tuple[int, ...]:
        seen = [False] * self.n
        lengths = []
        for start in range(self.n):
            if seen[start]:
                continue
            length = 0
            i = start
            while not seen[i]:
                seen[i] = True
                i = self.images[i]
                length += 1
            lengths.append(length)
        return tuple(sorted(lengths))

    def to_matrix(self) -> RMatrix:
        rows = [[_ZERO] * self.n for _ in range(self.n)]
        for j, img in enumerate(self.images):
            rows[img][j] = _ONE
        return RMatrix(tuple(tuple(row) for row in rows))


@dataclass(frozen=True)
class RMatrix:
    """Square nonnegative matrix with exact rational entries.

    Instances are immutable and hashable; every operation returns a new
    matrix.  Nonnegativity is checked once at construction, so all
    operations may assume it.
    """

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n < 1:
            raise ValueError("matrix dimension must be positive")
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise ValueError("matrix must be square")
            for j, x in enumerate(row):
                if not isinstance(x, Fraction):
                    raise TypeError(f"entry ({i}, {j}) is not a Fraction")
                if x < 0:
                    raise ValueError(f"negative entry {x} at ({i}, {j})")

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Entry]]) -> RMatrix:
        return cls(tuple(tuple(coerce_entry(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> RMatrix:
        return cls(tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> RMatrix:
        return cls(((_ZERO,) * n,) * n)

    @classmethod
    def diagonal(cls, values: Sequence[Entry]) -> RMatrix:
        vals = [coerce_entry(v) for v in values]
        n = len(vals)
        return cls(tuple(tuple(vals[i] if i == j else _ZERO for j in range(n)) for i in range(n)))

    def get(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def __matmul__(self, other: RMatrix) -> RMatrix:
        if not isinstance(other, RMatrix):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        n = self.n
        rows = []
        for i in range(n):
            acc = [_ZERO] * n
            for k, f in enumerate(self.entries[i]):
                if not f:
                    continue
                for j, g in enumerate(other.entries[k]):
                    if g:
                        acc[j] += f * g
            rows.append(tuple(acc))
        return RMatrix(tuple(rows))

    def pow(self, k: int) -> RMatrix:
        """Exact k-th power by repeated squaring; ``pow(0)`` is the identity."""
        if k < 0:
            raise ValueError("exponent must be nonnegative")
        result = RMatrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def kron(self, other: RMatrix) -> RMatrix:
        """Kronecker product: block (i, j) of the result is entry (i,j) times ``other``."""
        na, nb = self.n, other.n
        rows = []
        for i in range(na):
            for r in range(nb):
                row: list[Fraction] = []
                for j in range(na):
                    f = self.entries[i][j]
                    if f:
                        row.extend(f * x for x in other.entries[r])
                    else:
                        row.extend([_ZERO] * nb)
                rows.append(tuple(row))
        return RMatrix(tuple(rows))

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(self.n)), _ZERO)

    def diagonal_entries(self) -> tuple[Fraction, ...]:
        return tuple(self.entries[i][i] for i in range(self.n))

    def has_zero_diagonal_entry(self) -> bool:
        return any(self.entries[i][i] == 0 for i in range(self.n))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def is_positive(self) -> bool:
        return all(x > 0 for row in self.entries for x in row)

    def rank(self) -> int:
        """Exact rank over the rationals.

        Each row is first scaled by the lcm of its denominators (row scaling
        does not change rank), then fraction-free Bareiss elimination runs on
        the integer matrix.  Every division in the Bareiss update is exact;
        this is asserted rather than assumed so that a bug cannot silently
        floor-divide its way to a wrong rank.
        """
        import math

        m: list[list[int]] = []
        for row in self.entries:
            den = 1
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
            m.append([int(x * den) for x in row])
        n = self.n
        r = 0
        prev = 1
        for c in range(n):
            piv = next((i for i in range(r, n) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            for i in range(r + 1, n):
                row_i = m[i]
                row_r = m[r]
                lead = row_i[c]
                for j in range(c + 1, n):
                    q, rem = divmod(row_r[c] * row_i[j] - lead * row_r[j], prev)
                    assert rem == 0, "Bareiss division not exact"
                    row_i[j] = q
                row_i[c] = 0
            prev = m[r][c]
            r += 1
            if r == n:
                break
        return r

    def pattern(self) -> PatternMatrix:
        rows = []
        for row in self.entries:
            mask = 0
            for j, x in enumerate(row):
                if x:
                    mask |= 1 << j
            rows.append(mask)
        return PatternMatrix(self.n, tuple(rows))

    def conjugate(self, p: Permutation) -> RMatrix:
        """Simultaneous row/column relabeling: entry (i, j) becomes entry (p(i), p(j)).

        Equals P^{-1} A P for the permutation matrix P = ``p.to_matrix()``.
        """
        if p.n != self.n:
            raise ValueError(f"size mismatch: matrix {self.n}, permutation {p.n}")
        return RMatrix(
            tuple(
                tuple(self.entries[p.images[i]][p.images[j]] for j in range(self.n))
                for i in range(self.n)
            )
        )

    def submatrix(self, indices: Sequence[int]) -> RMatrix:
        """Principal submatrix on the given (distinct) index set, in the given order."""
        idx = tuple(indices)
        if not idx:
            raise ValueError("submatrix needs at least one index")
        return RMatrix(tuple(tuple(self.entries[i][j] for j in idx) for i in idx))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "entries": [[format_entry(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> RMatrix:
        if not isinstance(data, dict) or "n" not in data or "entries" not in data:
            raise ValueError("matrix JSON must contain 'n' and 'entries'")
        n = data["n"]
        entries = data["entries"]
        if not isinstance(n, int) or n < 1:
            raise ValueError("'n' must be a positive integer")
        if not isinstance(entries, list) or len(entries) != n:
            raise ValueError(f"'entries' must be a list of {n} rows")
        for row in entries:
            if not isinstance(row, list) or len(row) != n:
                raise ValueError(f"every row must have length {n}")
        return cls.from_rows(entries)

    def __str__(self) -> str:
        cells = [[str(format_entry(x)) for x in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)

    def __repr__(self) -> str:
        return f"RMatrix(n={self.n})"


def matrix_to_json(a: RMatrix, provenance: dict | None = None, indent: int = 2) -> str:
    """Serialize a matrix (optionally with a provenance header) to stable JSON."""
    doc: dict = {}
    if provenance is not None:
        doc["provenance"] = provenance
    doc.update(a.to_json_dict())
    return json.dumps(doc, indent=indent, sort_keys=True) + "\n"


def matrix_from_json(text: str) -> RMatrix:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid matrix JSON: {exc}") from exc
    return RMatrix.from_json_dict(data)


def matrix_from_csv(text: str) -> RMatrix:
    """Parse a CSV matrix: one row per line, integer or ``p/q`` cells."""
    rows = [row for row in csv.reader(io.StringIO(text)) if row and any(c.strip() for c in row)]
    if not rows:
        raise ValueError("empty CSV matrix")
    return RMatrix.from_rows([[cell for cell in row] for row in rows])


def load_matrix(path: str) -> RMatrix:
    """Load a matrix from a JSON or CSV file (sniffed by suffix, then content)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".csv"):
        return matrix_from_csv(text)
    if text.lstrip().startswith("{"):
        return matrix_from_json(text)
    return matrix_from_csv(text)

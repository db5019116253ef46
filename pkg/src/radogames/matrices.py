"""Exact rational classification of integer linear systems Ax = b.

Everything here is computed exactly: ranks via fraction-free integer
elimination, ratios as `fractions.Fraction`, witnesses verified by direct
substitution.  No floating point enters any predicate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import NamedTuple, Optional, Sequence

MAX_DENSITY_COLUMNS = 12


class MatrixParseError(ValueError):
    """Malformed matrix input; carries the 1-based offending line when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class DegeneratePartitionError(ValueError):
    """A column subset produced a non-positive density denominator."""

    def __init__(self, subset: Sequence[int]):
        self.subset = tuple(sorted(subset))
        super().__init__(
            f"degenerate column subset W={list(self.subset)}: non-positive denominator"
        )


class SizeCapError(RuntimeError):
    """An exact computation was requested beyond its size guard."""


class ConstructionError(RuntimeError):
    """No reduced system passing all validation predicates was found."""


@dataclass(frozen=True)
class RadoSystem:
    """An integer matrix together with an integer right-hand side vector."""

    entries: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("matrix must have at least one row and one column")
        k = len(self.entries[0])
        if any(len(row) != k for row in self.entries):
            raise ValueError("all rows must have the same length")
        if len(self.rhs) != len(self.entries):
            raise ValueError("rhs length must equal the number of rows")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> "RadoSystem":
        return cls(tuple(tuple(int(x) for x in r) for r in rows), tuple(int(b) for b in rhs))

    def homogeneous(self) -> "RadoSystem":
        """The same matrix with a zero right-hand side."""
        return RadoSystem(self.entries, (0,) * self.rows)

    def columns(self, subset: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        """Rows restricted to the given column indices (order preserved)."""
        cols = tuple(subset)
        return tuple(tuple(row[c] for c in cols) for row in self.entries)

    def evaluate(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * v for a, v in zip(row, x)) for row in self.entries)

    def is_solution(self, x: Sequence[int]) -> bool:
        return len(x) == self.cols and self.evaluate(x) == self.rhs

    def to_json(self) -> str:
        flat = [a for row in self.entries for a in row]
        return json.dumps(
            {"rows": self.rows, "cols": self.cols, "entries": flat, "rhs": list(self.rhs)}
        )

    def __str__(self) -> str:
        body = "; ".join(" ".join(str(a) for a in row) for row in self.entries)
        return f"[{body}] = {list(self.rhs)}"


def schur_system(k: int = 3) -> RadoSystem:
    """x1 + ... + x_{k-1} = x_k; k=3 is the classic sum equation."""
    return RadoSystem.from_rows([[1] * (k - 1) + [-1]], [0])


def progression_system(k: int = 3) -> RadoSystem:
    """(k-2) x k banded matrix whose distinct solutions are k-term APs."""
    rows = []
    for i in range(k - 2):
        row = [0] * k
        row[i], row[i + 1], row[i + 2] = 1, -2, 1
        rows.append(row)
    return RadoSystem.from_rows(rows, [0] * (k - 2))


def sidon_system() -> RadoSystem:
    """x1 + x2 = x3 + x4."""
    return RadoSystem.from_rows([[1, 1, -1, -1]], [0])


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse_system_text(text: str) -> RadoSystem:
    """Plain-text format: 'l k' header, l matrix rows, then one rhs line."""
    lines = [ln for ln in text.splitlines()]
    stripped = [(i + 1, ln.strip()) for i, ln in enumerate(lines) if ln.strip()]
    if not stripped:
        raise MatrixParseError("empty matrix file")
    lineno, header = stripped[0]
    parts = header.split()
    if len(parts) != 2:
        raise MatrixParseError("expected header 'rows cols'", lineno)
    try:
        n_rows, n_cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise MatrixParseError("header must contain two integers", lineno) from None
    if n_rows < 1 or n_cols < 1:
        raise MatrixParseError("dimensions must be positive", lineno)
    if len(stripped) != n_rows + 2:
        raise MatrixParseError(
            f"expected {n_rows} matrix rows plus one rhs line after the header"
        )
    rows = []
    for idx in range(n_rows):
        lineno, ln = stripped[1 + idx]
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError:
            raise MatrixParseError("matrix rows must contain integers", lineno) from None
        if len(row) != n_cols:
            raise MatrixParseError(f"expected {n_cols} entries", lineno)
        rows.append(row)
    lineno, ln = stripped[1 + n_rows]
    try:
        rhs = [int(tok) for tok in ln.split()]
    except ValueError:
        raise MatrixParseError("rhs line must contain integers", lineno) from None
    if len(rhs) != n_rows:
        raise MatrixParseError(f"expected {n_rows} rhs entries", lineno)
    return RadoSystem.from_rows(rows, rhs)


def parse_system_json(text: str) -> RadoSystem:
    """JSON format: {rows, cols, entries (row-major), rhs}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    try:
        n_rows, n_cols = int(doc["rows"]), int(doc["cols"])
        flat = [int(x) for x in doc["entries"]]
        rhs = [int(x) for x in doc["rhs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixParseError(f"bad JSON matrix document: {exc}") from None
    if len(flat) != n_rows * n_cols:
        raise MatrixParseError("entries length must be rows*cols")
    if len(rhs) != n_rows:
        raise MatrixParseError("rhs length must equal rows")
    rows = [flat[i * n_cols : (i + 1) * n_cols] for i in range(n_rows)]
    return RadoSystem.from_rows(rows, rhs)


def parse_system(text: str) -> RadoSystem:
    """Sniff JSON vs plain text and parse accordingly."""
    if text.lstrip().startswith("{"):
        return parse_system_json(text)
    return parse_system_text(text)


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    if not rows or not rows[0]:
        return 0
    m = [list(map(int, r)) for r in rows]
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        piv = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, n_rows):
            f = m[r][col]
            for c in range(col, n_cols):
                m[r][c] = (m[r][c] * p - f * m[rank][c]) // prev
        prev = p
        rank += 1
        if rank == n_rows:
            break
    return rank


def rref(rows: Sequence[Sequence[int | Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (rows, pivot cols)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    n_cols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank_rational(system: RadoSystem, columns: Sequence[int] | None = None) -> int:
    """Exact rank of the matrix, optionally restricted to a column subset.

    An empty column subset has rank 0 by convention.
    """
    if columns is None:
        return integer_rank(system.entries)
    cols = tuple(columns)
    if not cols:
        return 0
    return integer_rank(system.columns(cols))


def is_abundant(system: RadoSystem) -> bool:
    """True iff no row of the rational echelon form has exactly two non-zero
    entries.  Zero rows and single-entry rows do not count against it."""
    reduced, _ = rref(system.entries)
    for row in reduced:
        nonzero = sum(1 for x in row if x != 0)
        if nonzero == 2:
            return False
    return True


# ---------------------------------------------------------------------------
# Irredundance: bounded search for solutions with pairwise-distinct coordinates
# ---------------------------------------------------------------------------


class IrredundanceResult(NamedTuple):
    found: bool
    witness: Optional[tuple[int, ...]]
    bound: int


def default_search_bound(system: RadoSystem) -> int:
    max_entry = max(abs(a) for row in system.entries for a in row)
    max_rhs = max((abs(b) for b in system.rhs), default=0)
    return max(1000, system.cols * (1 + max_entry) * (1 + max_rhs))


def is_irredundant(system: RadoSystem, bound: int | None = None) -> IrredundanceResult:
    """Search [1, bound]^k for the lexicographically least solution with all
    coordinates pairwise distinct.  A negative answer is relative to the bound.
    """
    if bound is None:
        bound = default_search_bound(system)
    if bound < 1:
        raise ValueError("bound must be >= 1")
    witness = _distinct_solution_search(system, bound)
    return IrredundanceResult(witness is not None, witness, bound)


def _distinct_solution_search(system: RadoSystem, bound: int) -> Optional[tuple[int, ...]]:
    entries, rhs = system.entries, system.rhs
    n_rows, k = system.rows, system.cols
    augmented = [row + (rhs[i],) for i, row in enumerate(entries)]
    if integer_rank(augmented) > integer_rank(entries):
        return None  # inconsistent over the rationals
    # Rows whose support ends at column j force the value there.
    last_col = [max((j for j in range(k) if entries[i][j] != 0), default=-1) for i in range(n_rows)]
    for i in range(n_rows):
        if last_col[i] == -1 and rhs[i] != 0:
            return None
    # suffix_pos/neg[i][j]: sum of positive/negative coefficients in columns >= j
    suffix_pos = [[0] * (k + 1) for _ in range(n_rows)]
    suffix_neg = [[0] * (k + 1) for _ in range(n_rows)]
    for i in range(n_rows):
        for j in range(k - 1, -1, -1):
            a = entries[i][j]
            suffix_pos[i][j] = suffix_pos[i][j + 1] + (a if a > 0 else 0)
            suffix_neg[i][j] = suffix_neg[i][j + 1] + (a if a < 0 else 0)

    rem = list(rhs)
    x = [0] * k
    used: set[int] = set()

    def feasible(j: int) -> bool:
        for i in range(n_rows):
            lo = suffix_pos[i][j] + suffix_neg[i][j] * bound
            hi = suffix_pos[i][j] * bound + suffix_neg[i][j]
            if not lo <= rem[i] <= hi:
                return False
        return True

    def dfs(j: int) -> Optional[tuple[int, ...]]:
        if j == k:
            return tuple(x) if all(r == 0 for r in rem) else None
        forced: Optional[int] = None
        for i in range(n_rows):
            if last_col[i] == j:
                a = entries[i][j]
                if rem[i] % a != 0:
                    return None
                v = rem[i] // a
                if forced is not None and forced != v:
                    return None
                forced = v
        values = (forced,) if forced is not None else range(1, bound + 1)
        for v in values:
            if v is None or not 1 <= v <= bound or v in used:
                continue
            x[j] = v
            used.add(v)
            for i in range(n_rows):
                rem[i] -= entries[i][j] * v
            if feasible(j + 1):
                hit = dfs(j + 1)
                if hit is not None:
                    return hit
            for i in range(n_rows):
                rem[i] += entries[i][j] * v
            used.discard(v)
        return None

    if not feasible(0):
        return None
    return dfs(0)


# ---------------------------------------------------------------------------
# Density and balance
# ---------------------------------------------------------------------------


def _subsets_by_size(k: int, sizes: range):
    for size in sizes:
        yield from combinations(range(k), size)


def max_density(system: RadoSystem) -> tuple[Fraction, tuple[int, ...]]:
    """Maximum over column subsets W (|W| >= 2) of
    (|W|-1) / (|W|-1 + rank(columns outside W) - rank(A)), exactly.

    Ties resolve to the smallest subset, then lexicographically.  The inverse
    of this value is the exponent scale of the random-board threshold.
    """
    k = system.cols
    if k > MAX_DENSITY_COLUMNS:
        raise SizeCapError(f"density enumeration capped at {MAX_DENSITY_COLUMNS} columns")
    full_rank = rank_rational(system)
    best: Optional[Fraction] = None
    best_subset: Optional[tuple[int, ...]] = None
    all_cols = set(range(k))
    for subset in _subsets_by_size(k, range(2, k + 1)):
        outside = tuple(sorted(all_cols - set(subset)))
        denom = len(subset) - 1 + rank_rational(system, outside) - full_rank
        if denom <= 0:
            raise DegeneratePartitionError(subset)
        ratio = Fraction(len(subset) - 1, denom)
        if best is None or ratio > best:
            best, best_subset = ratio, subset
    assert best is not None and best_subset is not None
    return best, best_subset


def is_strictly_balanced(system: RadoSystem) -> tuple[bool, Optional[tuple[int, ...]]]:
    """For a full-row-rank matrix: every proper column subset of size >= 2 must
    have a strictly smaller density ratio than the whole column set.

    Returns (True, None) or (False, first violating subset); subsets whose
    denominator degenerates to <= 0 are reported as violations.
    """
    n_rows, k = system.rows, system.cols
    if rank_rational(system) != n_rows:
        raise ValueError("strict balance is defined only for full-row-rank matrices")
    if k - 1 - n_rows <= 0:
        raise DegeneratePartitionError(tuple(range(k)))
    full_ratio = Fraction(k - 1, k - 1 - n_rows)
    all_cols = set(range(k))
    for subset in _subsets_by_size(k, range(2, k)):
        outside = tuple(sorted(all_cols - set(subset)))
        denom = len(subset) - 1 + rank_rational(system, outside) - n_rows
        if denom <= 0:
            return False, subset
        if Fraction(len(subset) - 1, denom) >= full_ratio:
            return False, subset
    return True, None


# ---------------------------------------------------------------------------
# Reduction to a full-rank strictly balanced system on a column subset
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionValidation:
    full_rank: bool
    irredundant_matrix: bool
    irredundant_pair: bool
    abundant: bool
    strictly_balanced: bool
    density_matches: bool

    def all_ok(self) -> bool:
        return all(
            (
                self.full_rank,
                self.irredundant_matrix,
                self.irredundant_pair,
                self.abundant,
                self.strictly_balanced,
                self.density_matches,
            )
        )


@dataclass(frozen=True)
class AssociatedPair:
    """A reduced system (B, b') on a column subset of the original system.

    Every solution x of the original system satisfies B @ x[column_map] = b'.
    """

    system: RadoSystem
    column_map: tuple[int, ...]
    validation: ReductionValidation


def _normalize_integer_row(row: Sequence[Fraction]) -> Optional[tuple[int, ...]]:
    """Scale a rational row to coprime integers with positive leading entry."""
    denoms = [x.denominator for x in row]
    scale = lcm(*denoms) if denoms else 1
    ints = [int(x * scale) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        return None
    ints = [v // g for v in ints]
    lead = next((v for v in ints if v != 0), 0)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def _left_null_basis(rows: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Basis of {y : y^T M = 0} via the echelon form of the transpose."""
    n_rows = len(rows)
    transpose = [[rows[i][j] for i in range(n_rows)] for j in range(len(rows[0]))]
    reduced, pivots = rref(transpose)
    free = [c for c in range(n_rows) if c not in pivots]
    basis = []
    for f in free:
        y = [Fraction(0)] * n_rows
        y[f] = Fraction(1)
        for r, p in enumerate(pivots):
            y[p] = -reduced[r][f]
        basis.append(y)
    return basis


def _candidate_reduction(system: RadoSystem, subset: tuple[int, ...]) -> Optional[RadoSystem]:
    """All row-space combinations of (A|b) supported on the columns of subset,
    scaled to integers and trimmed to an independent generating set."""
    outside = tuple(sorted(set(range(system.cols)) - set(subset)))
    if outside:
        null_basis = _left_null_basis(system.columns(outside))
    else:
        null_basis = [
            [Fraction(1 if i == r else 0) for i in range(system.rows)]
            for r in range(system.rows)
        ]
    cols = system.columns(subset)
    rows_out: list[tuple[int, ...]] = []
    rhs_out: list[int] = []
    for y in null_basis:
        combo = [sum(y[i] * cols[i][j] for i in range(system.rows)) for j in range(len(subset))]
        combo_rhs = sum(y[i] * system.rhs[i] for i in range(system.rows))
        normalized = _normalize_integer_row(list(combo) + [combo_rhs])
        if normalized is None:
            continue
        row, b = normalized[:-1], normalized[-1]
        if all(a == 0 for a in row):
            continue
        if integer_rank(rows_out + [row]) > len(rows_out):
            rows_out.append(row)
            rhs_out.append(b)
    if not rows_out:
        return None
    return RadoSystem.from_rows(rows_out, rhs_out)


def _validate_reduction(
    candidate: RadoSystem, target_density: Fraction, bound: int | None
) -> ReductionValidation:
    full_rank = rank_rational(candidate) == candidate.rows
    abundant = is_abundant(candidate)
    balanced = False
    if full_rank:
        try:
            balanced, _ = is_strictly_balanced(candidate)
        except DegeneratePartitionError:
            balanced = False
    density_ok = False
    if abundant and candidate.cols <= MAX_DENSITY_COLUMNS:
        try:
            density, _ = max_density(candidate)
            density_ok = density == target_density
        except DegeneratePartitionError:
            density_ok = False
    irr_matrix = is_irredundant(candidate.homogeneous(), bound).found
    irr_pair = is_irredundant(candidate, bound).found
    return ReductionValidation(full_rank, irr_matrix, irr_pair, abundant, balanced, density_ok)


def associated_pair(system: RadoSystem, bound: int | None = None) -> AssociatedPair:
    """Reduce (A, b) to a full-rank, irredundant, abundant, strictly balanced
    system (B, b') on a column subset with the same density.

    If the system already qualifies it is returned unchanged.  Otherwise
    column subsets are searched deterministically: density maximizers first,
    larger subsets first, then lexicographic order.
    """
    if bound is None:
        bound = default_search_bound(system)
    if not is_abundant(system):
        raise ValueError("reduction requires an abundant system")
    if not is_irredundant(system, bound).found or not is_irredundant(system.homogeneous(), bound).found:
        raise ValueError("reduction requires an irredundant system")

    density, _ = max_density(system)
    if rank_rational(system) == system.rows:
        try:
            balanced, _ = is_strictly_balanced(system)
        except DegeneratePartitionError:
            balanced = False
        if balanced:
            validation = _validate_reduction(system, density, bound)
            return AssociatedPair(system, tuple(range(system.cols)), validation)

    k = system.cols
    full_rank = rank_rational(system)
    all_cols = set(range(k))
    scored: list[tuple[int, int, tuple[int, ...]]] = []
    for subset in _subsets_by_size(k, range(2, k + 1)):
        outside = tuple(sorted(all_cols - set(subset)))
        denom = len(subset) - 1 + rank_rational(system, outside) - full_rank
        if denom <= 0:
            continue
        is_max = Fraction(len(subset) - 1, denom) == density
        scored.append((0 if is_max else 1, -len(subset), subset))
    scored.sort()
    for _, _, subset in scored:
        candidate = _candidate_reduction(system, subset)
        if candidate is None:
            continue
        validation = _validate_reduction(candidate, density, bound)
        if validation.all_ok():
            return AssociatedPair(candidate, subset, validation)
    raise ConstructionError("no validated reduced system found for any column subset")


# ---------------------------------------------------------------------------
# Profile
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixProfile:
    """Full classification record for one system."""

    rank: int
    irredundant_pair: bool
    pair_witness: Optional[tuple[int, ...]]
    irredundant_matrix: bool
    matrix_witness: Optional[tuple[int, ...]]
    abundant: bool
    density: Optional[Fraction]
    maximizing_subset: Optional[tuple[int, ...]]
    strictly_balanced: Optional[bool]
    violating_subset: Optional[tuple[int, ...]]
    search_bound: int

    @property
    def threshold_exponent(self) -> Optional[Fraction]:
        """-1/density: the exponent of the predicted threshold probability."""
        if self.density is None:
            return None
        return -1 / self.density


def analyze_system(system: RadoSystem, bound: int | None = None) -> MatrixProfile:
    if bound is None:
        bound = default_search_bound(system)
    rank = rank_rational(system)
    pair = is_irredundant(system, bound)
    matrix = is_irredundant(system.homogeneous(), bound)
    abundant = is_abundant(system)
    density = None
    subset = None
    if abundant and matrix.found and system.cols <= MAX_DENSITY_COLUMNS:
        density, subset = max_density(system)
    balanced = None
    violating = None
    if rank == system.rows:
        try:
            balanced, violating = is_strictly_balanced(system)
        except DegeneratePartitionError as exc:
            balanced, violating = False, exc.subset
    return MatrixProfile(
        rank=rank,
        irredundant_pair=pair.found,
        pair_witness=pair.witness,
        irredundant_matrix=matrix.found,
        matrix_witness=matrix.witness,
        abundant=abundant,
        density=density,
        maximizing_subset=subset,
        strictly_balanced=balanced,
        violating_subset=violating,
        search_bound=bound,
    )

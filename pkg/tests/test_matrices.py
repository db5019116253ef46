import random
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radogames.matrices import (
    ConstructionError,
    DegeneratePartitionError,
    MatrixParseError,
    RadoSystem,
    SizeCapError,
    analyze_system,
    associated_pair,
    default_search_bound,
    is_abundant,
    is_irredundant,
    is_strictly_balanced,
    max_density,
    parse_system,
    parse_system_text,
    progression_system,
    rank_rational,
    schur_system,
    sidon_system,
)

STACKED = RadoSystem.from_rows([[1, 1, -1, 0, 0], [0, 0, 1, 1, -1]], [0, 0])


def naive_rank(rows):
    """Oracle: plain Gaussian elimination over Fraction."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m or not m[0]:
        return 0
    rank = 0
    n_cols = len(m[0])
    for c in range(n_cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def naive_density(system):
    """Oracle: enumerate every column subset with the naive rank."""
    k = system.cols
    full = naive_rank(system.entries)
    ratios = {}
    for size in range(2, k + 1):
        for subset in combinations(range(k), size):
            outside = [c for c in range(k) if c not in subset]
            sub = [[row[c] for c in outside] for row in system.entries] if outside else []
            denom = size - 1 + naive_rank(sub) - full
            ratios[subset] = Fraction(size - 1, denom)
    best = max(ratios.values())
    return best, {w for w, r in ratios.items() if r == best}


class TestRank:
    def test_single_row(self):
        assert rank_rational(schur_system()) == 1

    def test_empty_column_subset_is_zero(self):
        assert rank_rational(schur_system(), ()) == 0

    def test_two_independent_rows(self):
        assert rank_rational(STACKED) == 2

    def test_dependent_rows(self):
        sys2 = RadoSystem.from_rows([[1, 1, -1], [2, 2, -2]], [0, 0])
        assert rank_rational(sys2) == 1

    @settings(max_examples=300, deadline=None)
    @given(
        st.integers(1, 4),
        st.integers(1, 6),
        st.data(),
    )
    def test_matches_naive_gaussian_oracle(self, n_rows, n_cols, data):
        rows = [
            [data.draw(st.integers(-9, 9)) for _ in range(n_cols)] for _ in range(n_rows)
        ]
        assert rank_rational(RadoSystem.from_rows(rows, [0] * n_rows)) == naive_rank(rows)

    def test_thousand_random_matrices_match_oracle(self):
        rng = random.Random(7)
        for _ in range(1000):
            n_rows = rng.randint(1, 4)
            n_cols = rng.randint(1, 6)
            rows = [[rng.randint(-9, 9) for _ in range(n_cols)] for _ in range(n_rows)]
            assert integer_rank_equals_oracle(rows)


def integer_rank_equals_oracle(rows):
    return rank_rational(RadoSystem.from_rows(rows, [0] * len(rows))) == naive_rank(rows)


class TestAbundance:
    def test_three_term_row(self):
        assert is_abundant(schur_system())

    def test_two_term_row_fails(self):
        assert not is_abundant(RadoSystem.from_rows([[2, -3]], [0]))

    def test_stacked_two_term_rows_fail(self):
        sys2 = RadoSystem.from_rows([[2, -3, 0], [0, 2, -3]], [0, 0])
        assert not is_abundant(sys2)

    def test_hidden_two_term_row_is_found_by_elimination(self):
        # rows (1,1,-1) and (0,1,-1) eliminate to a two-entry row
        sys2 = RadoSystem.from_rows([[1, 1, -1], [0, 1, -1]], [0, 0])
        assert not is_abundant(sys2)

    def test_single_entry_row_does_not_violate(self):
        sys2 = RadoSystem.from_rows([[0, 0, 5]], [0])
        assert is_abundant(sys2)


class TestIrredundance:
    def test_schur_witness(self):
        result = is_irredundant(schur_system(), bound=10)
        assert result.found and result.witness == (1, 2, 3)

    def test_equality_equation_never_distinct(self):
        result = is_irredundant(RadoSystem.from_rows([[1, -1]], [0]), bound=100)
        assert not result.found

    def test_positive_coefficients_zero_rhs(self):
        result = is_irredundant(RadoSystem.from_rows([[1, 1]], [0]), bound=100)
        assert not result.found

    def test_witness_is_lexicographically_least(self):
        # oracle: full enumeration over a small cube
        sys2 = RadoSystem.from_rows([[1, -2, 1]], [0])
        best = None
        for x in permutations(range(1, 7), 3):
            if sys2.is_solution(x):
                best = min(best, x) if best else x
        result = is_irredundant(sys2, bound=6)
        assert result.witness == best == (1, 2, 3)

    def test_witness_verifies_and_is_distinct(self):
        rng = random.Random(3)
        for _ in range(50):
            k = rng.randint(2, 4)
            row = [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(k)]
            sys2 = RadoSystem.from_rows([row], [rng.randint(-4, 4)])
            result = is_irredundant(sys2, bound=60)
            if result.found:
                w = result.witness
                assert sys2.is_solution(w)
                assert len(set(w)) == len(w)
                assert all(1 <= v <= 60 for v in w)

    def test_default_bound_formula(self):
        assert default_search_bound(schur_system()) == 1000
        big = RadoSystem.from_rows([[500, -499]], [100])
        assert default_search_bound(big) == 2 * 501 * 101


class TestDensity:
    def test_schur(self):
        value, subset = max_density(schur_system())
        assert value == Fraction(2)
        assert subset == (0, 1, 2)

    def test_three_term_progression(self):
        value, _ = max_density(progression_system(3))
        assert value == Fraction(2)

    def test_stacked_matches_exhaustive_oracle(self):
        value, subset = max_density(STACKED)
        oracle_value, maximizers = naive_density(STACKED)
        assert value == oracle_value == Fraction(2)
        assert tuple(range(5)) in maximizers
        assert subset in maximizers

    def test_single_row_formula(self):
        rng = random.Random(11)
        for _ in range(40):
            k = rng.randint(3, 6)
            row = [rng.choice([x for x in range(-9, 10) if x]) for _ in range(k)]
            value, subset = max_density(RadoSystem.from_rows([row], [0]))
            assert value == Fraction(k - 1, k - 2)
            assert subset == tuple(range(k))

    def test_row_scaling_and_permutation_invariance(self):
        rng = random.Random(13)
        for _ in range(30):
            rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(2)]
            if naive_rank(rows) == 0:
                continue
            try:
                base, _ = max_density(RadoSystem.from_rows(rows, [0, 0]))
            except DegeneratePartitionError:
                continue
            scaled = [[3 * a for a in rows[0]], rows[1]]
            permuted = [rows[1], rows[0]]
            assert max_density(RadoSystem.from_rows(scaled, [0, 0]))[0] == base
            assert max_density(RadoSystem.from_rows(permuted, [0, 0]))[0] == base

    def test_degenerate_subset_reported(self):
        with pytest.raises(DegeneratePartitionError) as err:
            max_density(RadoSystem.from_rows([[1, -1, 0]], [0]))
        assert err.value.subset == (0, 1)

    def test_column_cap(self):
        wide = RadoSystem.from_rows([[1] * 13], [0])
        with pytest.raises(SizeCapError):
            max_density(wide)


class TestStrictBalance:
    def test_single_row_nonzero_is_balanced(self):
        for k in range(3, 7):
            row = [1] * (k - 1) + [-1]
            ok, violating = is_strictly_balanced(RadoSystem.from_rows([row], [0]))
            assert ok and violating is None

    def test_random_single_rows_balanced(self):
        rng = random.Random(5)
        for _ in range(40):
            k = rng.randint(3, 6)
            row = [rng.choice([x for x in range(-9, 10) if x]) for _ in range(k)]
            ok, _ = is_strictly_balanced(RadoSystem.from_rows([row], [0]))
            assert ok

    def test_stacked_violation(self):
        ok, violating = is_strictly_balanced(STACKED)
        assert not ok
        assert violating == (0, 1, 2)

    def test_zero_entry_single_row_reports_subset(self):
        ok, violating = is_strictly_balanced(RadoSystem.from_rows([[1, -1, 0]], [0]))
        assert not ok
        assert violating is not None

    def test_rank_precondition(self):
        deficient = RadoSystem.from_rows([[1, 1, -1], [2, 2, -2]], [0, 0])
        with pytest.raises(ValueError):
            is_strictly_balanced(deficient)


class TestAssociatedPair:
    def test_schur_is_its_own_reduction(self):
        pair = associated_pair(schur_system())
        assert pair.system == schur_system()
        assert pair.column_map == (0, 1, 2)
        assert pair.validation.all_ok()

    def test_progression_is_its_own_reduction(self):
        pair = associated_pair(progression_system(3))
        assert pair.system == progression_system(3)

    def test_stacked_reduces_to_single_row(self):
        pair = associated_pair(STACKED)
        assert pair.system.rows == 1
        assert pair.system.cols < 5
        assert pair.validation.all_ok()
        # same density as the original
        assert max_density(pair.system)[0] == max_density(STACKED)[0]

    def test_reduction_maps_solutions(self):
        pair = associated_pair(STACKED)
        result = is_irredundant(STACKED, bound=12)
        assert result.found
        projected = tuple(result.witness[c] for c in pair.column_map)
        assert pair.system.evaluate(projected) == pair.system.rhs

    def test_validation_recheckable(self):
        pair = associated_pair(STACKED)
        b = pair.system
        assert rank_rational(b) == b.rows
        assert is_abundant(b)
        assert is_strictly_balanced(b)[0]
        assert is_irredundant(b).found

    def test_rejects_non_abundant(self):
        with pytest.raises(ValueError):
            associated_pair(RadoSystem.from_rows([[2, -3]], [0]))


class TestProfile:
    def test_schur_profile(self):
        profile = analyze_system(schur_system())
        assert profile.rank == 1
        assert profile.irredundant_pair and profile.irredundant_matrix
        assert profile.abundant
        assert profile.density == Fraction(2)
        assert profile.strictly_balanced
        assert profile.threshold_exponent == Fraction(-1, 2)

    def test_non_abundant_profile(self):
        profile = analyze_system(RadoSystem.from_rows([[2, -3]], [0]))
        assert not profile.abundant
        assert profile.density is None

    def test_density_positive_requires_more_than_one(self):
        rng = random.Random(17)
        for _ in range(30):
            k = rng.randint(3, 5)
            row = [rng.choice([x for x in range(-9, 10) if x]) for _ in range(k)]
            profile = analyze_system(RadoSystem.from_rows([row], [0]))
            if profile.abundant and profile.irredundant_matrix and profile.density:
                assert profile.density > 1


class TestParsing:
    def test_text_roundtrip(self):
        text = "2 5\n1 1 -1 0 0\n0 0 1 1 -1\n0 0\n"
        assert parse_system_text(text) == STACKED

    def test_json(self):
        assert parse_system(schur_system().to_json()) == schur_system()

    def test_error_carries_line(self):
        with pytest.raises(MatrixParseError) as err:
            parse_system_text("2 3\n1 2 x\n0 0 1\n0 0\n")
        assert err.value.line == 2

    def test_header_error(self):
        with pytest.raises(MatrixParseError):
            parse_system_text("banana\n")

    def test_sidon(self):
        assert sidon_system().cols == 4

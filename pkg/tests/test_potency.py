"""Potency detection, minimal exponents, projections, rank/trace identity."""

import random

import pytest

from rpotent.generators import (
    block_diagonal,
    cycle_matrix,
    random_r_potent,
    uniform_idempotent,
)
from rpotent.matrix import Permutation, RMatrix
from rpotent.potency import (
    idempotent_projection,
    is_r_potent,
    minimal_potency,
    potency_report,
    rank_trace_check,
    zero_diagonal_powers,
)

from oracles import naive_power

QUAD = RMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])


class TestIsRPotent:
    def test_quadripotent_but_not_idempotent(self):
        assert is_r_potent(QUAD, 4)
        assert not is_r_potent(QUAD, 2)

    def test_identity_is_r_potent_for_every_r(self):
        for r in range(2, 10):
            assert is_r_potent(RMatrix.identity(4), r)

    def test_matches_naive_powers(self):
        for r in (2, 3, 4, 5):
            assert is_r_potent(QUAD, r) == (naive_power(QUAD, r) == QUAD)

    def test_rejects_r_below_two(self):
        with pytest.raises(ValueError):
            is_r_potent(QUAD, 1)


class TestMinimalPotency:
    def test_identity(self):
        assert minimal_potency(RMatrix.identity(3), 10) == 2

    def test_row_swap_of_identity_four(self):
        swap = Permutation.transposition(4, 0, 1).to_matrix()
        assert minimal_potency(swap, 10) == 3

    def test_full_cycle_on_four(self):
        assert minimal_potency(cycle_matrix(4), 10) == 5

    def test_absent_within_cap(self):
        nilpotent = RMatrix.from_rows([[0, 1], [0, 0]])
        assert minimal_potency(nilpotent, 20) is None

    def test_permutation_matrices_follow_cycle_lcm(self):
        rng = random.Random(99)
        from math import lcm

        for _ in range(30):
            p = Permutation.random(rng.randint(1, 6), rng)
            expected = lcm(*p.cycle_lengths()) + 1
            assert minimal_potency(p.to_matrix(), 64) == expected

    def test_divisibility_characterizes_potency(self):
        rng = random.Random(17)
        for seed in range(15):
            r = (3, 4, 5)[seed % 3]
            a = random_r_potent(r, 1 + seed % 4, seed, max_dim=12)
            m = minimal_potency(a, 64)
            assert m is not None and m <= r
            for r2 in range(2, 20):
                assert is_r_potent(a, r2) == ((r2 - 1) % (m - 1) == 0)


class TestIdempotentProjection:
    def test_idempotent_is_its_own_projection(self):
        e = uniform_idempotent(3)
        assert idempotent_projection(e, 2) == e

    def test_cycle_three_projects_to_identity(self):
        assert idempotent_projection(QUAD, 4) == RMatrix.identity(3)

    def test_rejects_non_potent_input(self):
        with pytest.raises(ValueError):
            idempotent_projection(RMatrix.from_rows([[0, 1], [0, 0]]), 3)

    def test_projection_squares_to_itself_and_keeps_rank(self):
        for seed in range(100):
            r = (2, 3, 4, 5)[seed % 4]
            a = random_r_potent(r, 1 + seed % 5, seed, max_dim=14)
            e = idempotent_projection(a, r)
            assert e @ e == e
            assert e.rank() == a.rank()


class TestRankTraceIdentity:
    def test_zero_matrix(self):
        assert rank_trace_check(RMatrix.zeros(3), 4)

    def test_cycle_of_length_r_minus_one(self):
        for r in (3, 4, 5, 6):
            assert rank_trace_check(cycle_matrix(r - 1), r)

    def test_kron_of_swap_and_idempotent(self):
        m = cycle_matrix(2).kron(uniform_idempotent(2))
        assert m.rank() == 2
        assert m.pow(2).trace() == 2
        assert rank_trace_check(m, 3)

    def test_rejects_non_potent(self):
        with pytest.raises(ValueError):
            rank_trace_check(RMatrix.from_rows([[2]]), 3)


class TestZeroDiagonalPowers:
    def test_positive_matrix_has_none(self):
        assert zero_diagonal_powers(uniform_idempotent(2), 4) == set()

    def test_cycle_three_at_r_four(self):
        assert zero_diagonal_powers(QUAD, 4) == {1, 2}

    def test_block_tower_has_none(self):
        tower = block_diagonal([uniform_idempotent(k) for k in (1, 2, 3)])
        assert zero_diagonal_powers(tower, 4) == set()


class TestPotencyReport:
    def test_report_fields_for_quadripotent(self):
        rep = potency_report(QUAD, 4)
        assert rep.is_r_potent
        assert rep.minimal_r == 4
        assert rep.rank == 3
        assert rep.trace_of_projection == 3
        assert rep.rank_trace_ok

    def test_minimal_r_divides(self):
        for seed in range(20):
            r = (3, 4, 5)[seed % 3]
            a = random_r_potent(r, 1 + seed % 3, seed)
            rep = potency_report(a, r)
            assert rep.is_r_potent
            assert rep.minimal_r is not None
            assert rep.minimal_r <= rep.r
            assert (rep.r - 1) % (rep.minimal_r - 1) == 0

    def test_power_cycles_with_step_r_minus_one(self):
        for seed in range(12):
            r = (2, 3, 4, 5)[seed % 4]
            a = random_r_potent(r, 1 + seed % 3, seed)
            for k in(1, 2, 3):
                assert a.pow(k * (r - 1) + 1) == a

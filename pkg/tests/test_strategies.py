import random
from fractions import Fraction

import pytest

from radogames.engine import GameState, apply_move, play_match, winner_check
from radogames.hypergraphs import Board, Hypergraph, enumerate_solutions, sample_board
from radogames.matrices import schur_system, progression_system
from radogames.strategies import (
    DecompositionBreaker,
    DivisibilityError,
    EsPotentialBreaker,
    GreedyMaker,
    PairingBreaker,
    PairingStructureError,
    RandomMaker,
    TripleMaker,
    breaker_chain_pairing,
    breaker_power_pairing,
    chain_triple,
    erdos_selfridge_sum,
    solve_residue,
)

from helpers import build


def state_with(h, maker=(), breaker=(), to_move="breaker", last=None):
    return GameState(
        h,
        frozenset(maker),
        frozenset(breaker),
        to_move,
        last_move=last,
    )


class TestErdosSelfridgeSum:
    def test_two_disjoint_triples(self):
        h = build([(1, 2, 3), (4, 5, 6)])
        total, holds = erdos_selfridge_sum(h)
        assert total == Fraction(1, 4) and holds

    def test_empty(self):
        h = Hypergraph([1, 2], [], 3)
        total, holds = erdos_selfridge_sum(h)
        assert total == 0 and holds

    def test_four_two_sets(self):
        h = Hypergraph(range(1, 9), [(1, 2), (3, 4), (5, 6), (7, 8)], 2)
        total, holds = erdos_selfridge_sum(h)
        assert total == 1 and not holds


class TestEsPotentialBreaker:
    def test_kills_the_only_live_set(self):
        h = build([(1, 2, 3)])
        state = state_with(h, maker={1}, last=("maker", 1))
        assert EsPotentialBreaker().next_move(state) == 2

    def test_no_live_sets_plays_smallest(self):
        h = build([(1, 2, 3)], extra_vertices=[9])
        state = state_with(h, maker={1}, breaker={2}, last=("maker", 1))
        assert EsPotentialBreaker().next_move(state) == 3

    def test_shared_vertex_dominates(self):
        h = build([(1, 2, 5), (3, 4, 5)])
        state = state_with(h)
        assert EsPotentialBreaker().next_move(state) == 5

    def test_argmax_property_random_boards(self):
        rng = random.Random(8)
        for _ in range(40):
            board = sample_board(20, 0.7, rng.randint(0, 9999))
            h = enumerate_solutions(schur_system(), board)
            if not h.edges:
                continue
            vertices = list(h.vertices)
            maker = set(rng.sample(vertices, min(3, len(vertices))))
            state = state_with(h, maker=maker, last=None)
            move = EsPotentialBreaker().next_move(state)
            live = [e for e in h.edge_sets]
            def drop(v):
                return sum(
                    Fraction(1, 2 ** len(e - state.maker))
                    for e in h.edge_sets
                    if not e & state.breaker and v in e
                )
            best = max(drop(v) for v in state.unclaimed())
            assert drop(move) == best


class TestDecompositionBreaker:
    def test_cycle_mirror(self):
        h = build([(1, 2, 3), (3, 4, 5), (1, 5, 6)])
        state = state_with(h, maker={2}, last=("maker", 2))
        move = DecompositionBreaker().next_move(state)
        assert move == 3  # the other open vertex of the section {2, 3}

    def test_pair_core_mirror(self):
        h = build([(1, 2, 3), (2, 3, 4)])
        state = state_with(h, maker={2}, last=("maker", 2))
        move = DecompositionBreaker().next_move(state)
        assert move == 3

    def test_good_edge_mirror(self):
        h = build([(1, 2, 3), (3, 8, 9)])
        state = state_with(h, maker={8}, last=("maker", 8))
        move = DecompositionBreaker().next_move(state)
        assert move == 9


class TestSolveResidue:
    def test_two_three_one(self):
        sol = solve_residue(2, 3, 1)
        assert sol.z == 5 and sol.modulus == 6
        assert chain_triple(5, 2, 3, 1) == (3, 5, 8)

    def test_one_two_zero(self):
        sol = solve_residue(1, 2, 0)
        assert sol.z == 0 and sol.modulus == 2

    def test_gcd_failure(self):
        with pytest.raises(DivisibilityError):
            solve_residue(2, 4, 1)

    def test_scan_agreement_small(self):
        from math import gcd
        for alpha in range(1, 8):
            for beta in range(1, 8):
                if alpha == beta or gcd(alpha, beta) != 1:
                    continue
                for c in range(-6, 7):
                    sol = solve_residue(alpha, beta, c)
                    hits = [
                        x
                        for x in range(sol.modulus)
                        if (alpha * x - c) % beta == 0 and (beta * x + c) % alpha == 0
                    ]
                    assert hits == [sol.z]


class TestTripleMaker:
    def test_opens_on_middle(self):
        h = Hypergraph(range(1, 11), [(3, 5), (5, 8)], 2)
        maker = TripleMaker(2, 3, 1)
        state = GameState.initial(h)
        assert maker.next_move(state) == 5

    def test_completes_an_end(self):
        h = Hypergraph(range(1, 11), [(3, 5), (5, 8)], 2)
        maker = TripleMaker(2, 3, 1)
        state = GameState.initial(h)
        state = apply_move(state, maker.next_move(state))  # 5
        state = apply_move(state, 3)  # blocker kills one end
        assert maker.next_move(state) == 8

    def test_no_triple_plays_smallest(self):
        h = Hypergraph([5, 8], [(5, 8)], 2)
        maker = TripleMaker(2, 3, 1)
        state = GameState.initial(h)
        assert maker.next_move(state) == 5


class TestChainPairing:
    def test_no_pairs_needed(self):
        table = breaker_chain_pairing(Board.from_iterable(10, [3, 8]), 2, 3, 1)
        assert table.pairs == ()

    def test_pairs_consecutive(self):
        table = breaker_chain_pairing(Board.from_iterable(10, [5, 8]), 2, 3, 1)
        assert table.pairs == ((5, 8),)

    def test_full_triple_rejected(self):
        with pytest.raises(PairingStructureError):
            breaker_chain_pairing(Board.from_iterable(10, [3, 5, 8]), 2, 3, 1)


class TestPowerPairing:
    def test_example_board(self):
        table = breaker_power_pairing(Board.from_iterable(10, [4, 6, 9]), 2, 3)
        assert set(map(frozenset, table.pairs)) == {frozenset({9, 6})}

    def test_power_free_board(self):
        table = breaker_power_pairing(Board.from_iterable(10, [1, 5, 7]), 2, 3)
        assert table.pairs == ()

    def test_missing_partner(self):
        table = breaker_power_pairing(Board.from_iterable(10, [6]), 2, 3)
        assert table.pairs == ()

    @pytest.mark.parametrize("alpha,beta", [(2, 3), (1, 2), (3, 4)])
    def test_blocks_every_triple(self, alpha, beta):
        board = Board.full(500)
        table = breaker_power_pairing(board, alpha, beta)
        members = set(board.members)
        partner = {a: b for a, b in table.pairs} | {b: a for a, b in table.pairs}
        x = 1
        while beta * beta * x <= 500:
            triple = (alpha * alpha * x, alpha * beta * x, beta * beta * x)
            if set(triple) <= members and len(set(triple)) == 3:
                middle = alpha * beta * x
                assert partner.get(middle) in (triple[0], triple[2]), (x, triple)
            x += 1

    def test_disjointness_random_boards(self):
        rng = random.Random(31)
        for _ in range(200):
            members = rng.sample(range(1, 400), rng.randint(0, 60))
            board = Board.from_iterable(400, members)
            for alpha, beta in ((2, 3), (1, 2), (3, 4), (3, 5)):
                table = breaker_power_pairing(board, alpha, beta)
                flat = [v for p in table.pairs for v in p]
                assert len(flat) == len(set(flat))
                assert all(v in set(board.members) for v in flat)


class TestPairingBreaker:
    def test_answers_with_partner(self):
        h = Hypergraph([3, 5, 8], [(3, 5), (5, 8)], 2)
        table = breaker_chain_pairing(Board.from_iterable(10, [5, 8]), 2, 3, 1)
        breaker = PairingBreaker(table)
        state = state_with(h, maker={5}, last=("maker", 5))
        assert breaker.next_move(state) == 8

    def test_wins_when_no_triple(self):
        # board {3,5,8} has the full triple: pairing must block middle<->end
        h = Hypergraph([5, 8, 9], [(5, 8)], 2)
        table = breaker_chain_pairing(Board.from_iterable(10, [5, 8, 9]), 2, 3, 1)
        result = play_match(h, GreedyMaker(), PairingBreaker(table))
        assert result.winner == "breaker"
        assert result.certificate == "pairing"


class TestRandomMaker:
    def test_deterministic_given_seed(self):
        h = build([(1, 2, 3), (3, 4, 5)])
        moves1 = [RandomMaker(7).next_move(state_with(h, to_move="maker")) for _ in range(5)]
        moves2 = [RandomMaker(7).next_move(state_with(h, to_move="maker")) for _ in range(5)]
        assert moves1 == moves2

"""Game state, rules, match runner, exact solver, and winner certification.

The first player claims one vertex per turn and wins by owning a full edge;
the second player claims `bias` vertices per turn and wins at exhaustion.
There is no draw.  The solver is a memoized win/loss minimax; with unit bias
it decomposes the board into components, since the blocking player never
benefits from answering outside the component just played in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from radogames.hypergraphs import Hypergraph
from radogames.matrices import SizeCapError
from radogames.structures import StructureWitness, detect_bicycle

MAKER = "maker"
BREAKER = "breaker"

DEFAULT_COMPONENT_CAP = 24
DEFAULT_PROBE_CAP = 16


class IllegalMoveError(ValueError):
    pass


@dataclass(frozen=True)
class GameState:
    hypergraph: Hypergraph
    maker: frozenset[int]
    breaker: frozenset[int]
    to_move: str
    bias: int = 1
    first_player: str = MAKER
    picks_left: int = 1
    last_move: Optional[tuple[str, int]] = None

    @classmethod
    def initial(cls, h: Hypergraph, bias: int = 1, first_player: str = MAKER) -> "GameState":
        if bias < 1:
            raise ValueError("bias must be >= 1")
        picks = 1 if first_player == MAKER else bias
        return cls(h, frozenset(), frozenset(), first_player, bias, first_player, picks)

    def unclaimed(self) -> tuple[int, ...]:
        claimed = self.maker | self.breaker
        return tuple(v for v in self.hypergraph.vertices if v not in claimed)


def apply_move(state: GameState, vertex: int) -> GameState:
    """Claim a vertex for the side to move; the turn passes after the single
    first-player pick or the last of the second player's `bias` picks."""
    if vertex in state.maker or vertex in state.breaker:
        raise IllegalMoveError(f"vertex {vertex} is already claimed")
    if vertex not in state.hypergraph.component_of:
        raise IllegalMoveError(f"vertex {vertex} is not on the board")
    mover = state.to_move
    if mover == MAKER:
        return replace(
            state,
            maker=state.maker | {vertex},
            to_move=BREAKER,
            picks_left=state.bias,
            last_move=(MAKER, vertex),
        )
    if state.picks_left > 1:
        return replace(
            state,
            breaker=state.breaker | {vertex},
            picks_left=state.picks_left - 1,
            last_move=(BREAKER, vertex),
        )
    return replace(
        state,
        breaker=state.breaker | {vertex},
        to_move=MAKER,
        picks_left=1,
        last_move=(BREAKER, vertex),
    )


def winner_check(state: GameState) -> Optional[str]:
    """First player once a full edge is claimed; second player at exhaustion."""
    maker = state.maker
    for e in state.hypergraph.edge_sets:
        if e <= maker:
            return MAKER
    if len(maker) + len(state.breaker) == len(state.hypergraph.vertices):
        return BREAKER
    return None


@dataclass(frozen=True)
class Move:
    player: str
    vertex: int
    round: int


@dataclass(frozen=True)
class GameResult:
    winner: str
    certificate: str
    witness_edge: Optional[tuple[int, ...]]
    transcript: tuple[Move, ...]

    def transcript_json(self) -> str:
        return json.dumps(
            [{"player": m.player, "vertex": m.vertex, "round": m.round} for m in self.transcript]
        )


def play_match(
    h: Hypergraph,
    maker_strategy,
    breaker_strategy,
    bias: int = 1,
    first_player: str = MAKER,
) -> GameResult:
    """Run the game to the end of the board and report the result."""
    state = GameState.initial(h, bias, first_player)
    transcript: list[Move] = []
    round_no = 1
    while True:
        winner = winner_check(state)
        if winner == MAKER:
            edge = next(tuple(sorted(e)) for e in h.edge_sets if e <= state.maker)
            return GameResult(MAKER, "maker_edge", edge, tuple(transcript))
        if winner == BREAKER:
            certificate = getattr(breaker_strategy, "certificate_kind", "exhaustion")
            return GameResult(BREAKER, certificate, None, tuple(transcript))
        mover = state.to_move
        strategy = maker_strategy if mover == MAKER else breaker_strategy
        vertex = strategy.next_move(state)
        next_state = apply_move(state, vertex)
        transcript.append(Move(mover, vertex, round_no))
        if mover == BREAKER and next_state.to_move == MAKER:
            round_no += 1
        state = next_state


def replay(h: Hypergraph, transcript: Sequence[Move], bias: int = 1, first_player: str = MAKER) -> GameState:
    state = GameState.initial(h, bias, first_player)
    for move in transcript:
        if state.to_move != move.player:
            raise IllegalMoveError(f"transcript is out of turn at {move}")
        state = apply_move(state, move.vertex)
    return state


# ---------------------------------------------------------------------------
# Exact solving
# ---------------------------------------------------------------------------


def _minimax_wins(vertices: Sequence[int], edges: Iterable[frozenset[int]], bias: int,
                  maker_start: frozenset[int] = frozenset(),
                  breaker_start: frozenset[int] = frozenset(),
                  maker_to_move: bool = True,
                  picks: int = 1,
                  node_budget: Optional[int] = None) -> bool:
    """True iff the claiming player wins with optimal play.

    Moves are restricted to vertices of still-claimable edges: a move outside
    every claimable edge changes neither side's prospects, so it is dominated
    for both players.  Once no claimable edge remains the blocker wins.

    A node budget caps the explored positions deterministically; exceeding it
    raises SizeCapError so callers can degrade to an unknown verdict.
    """
    index = {v: i for i, v in enumerate(vertices)}
    masks = sorted(sum(1 << index[v] for v in e) for e in edges if set(e) <= set(vertices))
    maker0 = sum(1 << index[v] for v in maker_start if v in index)
    breaker0 = sum(1 << index[v] for v in breaker_start if v in index)
    memo: dict = {}
    nodes = [0]

    def wins(maker: int, breaker: int, live: tuple[int, ...], maker_move: bool, picks_left: int) -> bool:
        for e in live:
            if e & ~maker == 0:
                return True
        if not live:
            return False
        key = (maker, breaker, maker_move, picks_left)
        hit = memo.get(key)
        if hit is not None:
            return hit
        nodes[0] += 1
        if node_budget is not None and nodes[0] > node_budget:
            raise SizeCapError(f"solve exceeded the {node_budget}-node budget")
        claimed = maker | breaker
        playable = 0
        for e in live:
            playable |= e
        playable &= ~claimed
        options = _ordered_bits(playable, live, maker)
        if maker_move:
            result = any(wins(maker | b, breaker, live, False, bias) for b in options)
        else:
            nxt = picks_left == 1
            result = True
            for b in options:
                new_live = tuple(e for e in live if not e & b)
                if not wins(maker, breaker | b, new_live, nxt, 1 if nxt else picks_left - 1):
                    result = False
                    break
        memo[key] = result
        return result

    live0 = tuple(m for m in masks if not m & breaker0)
    return wins(maker0, breaker0, live0, maker_to_move, picks)


def _ordered_bits(playable: int, live: tuple[int, ...], maker: int) -> list[int]:
    """Candidate moves sorted by how close their hottest edge is to completion."""
    bits = []
    b = playable
    while b:
        low = b & -b
        bits.append(low)
        b ^= low
    def heat(bit: int) -> int:
        best = -1
        for e in live:
            if e & bit:
                c = (e & maker).bit_count()
                if c > best:
                    best = c
        return best
    bits.sort(key=heat, reverse=True)
    return bits


def solve_exact(
    h: Hypergraph,
    bias: int = 1,
    component_cap: int = DEFAULT_COMPONENT_CAP,
    use_components: Optional[bool] = None,
    node_budget: Optional[int] = None,
) -> str:
    """Winner under optimal play, first player moving first.

    With unit bias the board splits into components: the claiming player wins
    iff she wins some component moving first there.  With bias above one the
    blocker's picks could not be split across components, so the whole board
    is solved at once under the same cap.
    """
    if use_components is None:
        use_components = bias == 1
    active = sorted({v for e in h.edges for v in e})
    if not active:
        return BREAKER
    if not use_components:
        if len(active) > component_cap:
            raise SizeCapError(
                f"whole-board solve needs {len(active)} active vertices, cap is {component_cap}"
            )
        won = _minimax_wins(active, [frozenset(e) for e in h.edges], bias, node_budget=node_budget)
        return MAKER if won else BREAKER
    for cid in h.component_ids():
        comp_edges = h.component_edges(cid)
        if not comp_edges:
            continue
        comp_vertices = sorted({v for e in comp_edges for v in e})
        if len(comp_vertices) > component_cap:
            raise SizeCapError(
                f"component {cid} has {len(comp_vertices)} active vertices, cap is {component_cap}"
            )
        if _minimax_wins(comp_vertices, [frozenset(e) for e in comp_edges], bias, node_budget=node_budget):
            return MAKER
    return BREAKER


def solve_state(state: GameState) -> bool:
    """True iff the claiming player wins from this position."""
    active = sorted({v for e in state.hypergraph.edges for v in e})
    return _minimax_wins(
        active,
        state.hypergraph.edge_sets,
        state.bias,
        state.maker,
        state.breaker,
        state.to_move == MAKER,
        state.picks_left,
    )


class MinimaxStrategy:
    """Plays perfectly by solving the position after each candidate move."""

    name = "minimax"
    certificate_kind = "minimax"

    def __init__(self, role: str, cap: int = DEFAULT_COMPONENT_CAP):
        self.role = role
        self.cap = cap

    def next_move(self, state: GameState) -> int:
        active = {v for e in state.hypergraph.edges for v in e}
        if len(active) > self.cap:
            raise SizeCapError(f"minimax strategy capped at {self.cap} active vertices")
        unclaimed = state.unclaimed()
        candidates = [v for v in unclaimed if v in active] or list(unclaimed)
        best = candidates[0]
        for v in candidates:
            nxt = apply_move(state, v)
            maker_wins = winner_check(nxt) == MAKER or (
                winner_check(nxt) is None and solve_state(nxt)
            )
            if self.role == MAKER and maker_wins:
                return v
            if self.role == BREAKER and not maker_wins:
                return v
        return best


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Certification:
    winner: Optional[str]
    certificate: str  # bicycle_free | minimax | unknown
    witness_vertices: Optional[tuple[int, ...]]
    bicycles: dict[int, Optional[StructureWitness]] = field(compare=False, default_factory=dict)

    @property
    def bicycle_found(self) -> bool:
        return any(w is not None for w in self.bicycles.values())


def certify_winner(
    h: Hypergraph,
    solver_cap: int = DEFAULT_COMPONENT_CAP,
    probe_cap: int = DEFAULT_PROBE_CAP,
    known_win: Optional[Hypergraph] = None,
    node_budget: Optional[int] = None,
) -> Certification:
    """Certify the winner without playing the game out.

    Every component free of bicycles is a win for the blocker, so a fully
    clean board certifies 'breaker'.  Otherwise a win for the claiming player
    on any sub-board is a win on the whole board, so components (or probes
    grown around a bicycle) within the solver cap are solved exactly; a solve
    that exhausts its node budget is skipped.  `known_win` is a sub-hypergraph
    the caller has already certified as a first-player win: when its vertices
    and edges are contained in this board, monotonicity lifts the win without
    a new solve.  Anything else stays 'unknown'.
    """
    bicycles: dict[int, Optional[StructureWitness]] = {}
    comp_sizes: dict[int, int] = {}
    for cid in h.component_ids():
        edges = h.component_edges(cid)
        if len(edges) < 3:
            bicycles[cid] = None
        else:
            bicycles[cid] = detect_bicycle(h, cid)
        comp_sizes[cid] = len({v for e in edges for v in e})
    if all(w is None for w in bicycles.values()):
        return Certification(BREAKER, "bicycle_free", None, bicycles)

    if known_win is not None and known_win.edges:
        if set(known_win.vertices) <= set(h.vertices) and set(known_win.edges) <= set(h.edges):
            return Certification(MAKER, "minimax", known_win.vertices, bicycles)

    dirty = sorted(
        (cid for cid, w in bicycles.items() if w is not None),
        key=lambda cid: comp_sizes[cid],
    )
    for cid in dirty:
        if comp_sizes[cid] > solver_cap:
            continue
        comp_vertices = tuple(sorted({v for e in h.component_edges(cid) for v in e}))
        sub = h.induced(comp_vertices)
        try:
            if solve_exact(sub, component_cap=solver_cap, node_budget=node_budget) == MAKER:
                return Certification(MAKER, "minimax", comp_vertices, bicycles)
        except SizeCapError:
            continue
    for cid in dirty:
        if comp_sizes[cid] <= solver_cap:
            continue
        probe = _grow_probe(h, cid, bicycles[cid], probe_cap)
        if probe is None:
            continue
        sub = h.induced(probe)
        try:
            if sub.edges and solve_exact(sub, component_cap=probe_cap, node_budget=node_budget) == MAKER:
                return Certification(MAKER, "minimax", probe, bicycles)
        except SizeCapError:
            continue
    return Certification(None, "unknown", None, bicycles)


def _grow_probe(h: Hypergraph, cid: int, witness: StructureWitness, cap: int) -> Optional[tuple[int, ...]]:
    """A small vertex set around the bicycle witness, grown edge by edge."""
    chosen = {v for e in witness.edges for v in e}
    if len(chosen) > cap:
        return None
    for e in h.component_edges(cid):
        extra = set(e) - chosen
        if extra and len(chosen) + len(extra) <= cap and len(set(e) & chosen) >= 1:
            chosen |= extra
    return tuple(sorted(chosen))

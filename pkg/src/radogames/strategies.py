"""Move policies for both players.

Breaker side: a potential-greedy blocker, a structured blocker driven by the
component decomposition, and two pairing strategies for systems reducible to
two-term rows.  Maker side: a residue-triple opener for single two-term
equations plus greedy/random baselines.  All policies are deterministic given
their construction arguments; each instance serves one game.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Optional

from radogames.hypergraphs import Board, Hypergraph
from radogames.structures import (
    Decomposition,
    StructureWitness,
    classify_order,
    decompose_component,
)


class PairingStructureError(ValueError):
    """The board carries a full chain triple; a pairing cannot block it."""


class DivisibilityError(ValueError):
    """gcd(alpha, beta) does not divide the constant term."""


class StrategyPreconditionError(RuntimeError):
    """A strategy was asked to play on a position outside its guarantees."""


# ---------------------------------------------------------------------------
# Potential sums and the potential-greedy blocker
# ---------------------------------------------------------------------------


def erdos_selfridge_sum(h: Hypergraph) -> tuple[Fraction, bool]:
    """Sum of 2^-|F| over the winning sets, exactly, and whether it is < 1.

    Winning sets are deduplicated vertex sets, each counted once.
    """
    total = sum((Fraction(1, 2 ** len(e)) for e in h.edges), Fraction(0))
    return total, total < 1


def _live_sets(state):
    breaker = state.breaker
    return [e for e in state.hypergraph.edge_sets if not e & breaker]


class EsPotentialBreaker:
    """Claims the vertex causing the largest drop of the live potential
    sum of 2^-(unclaimed remainder); ties go to the smallest vertex."""

    name = "es-breaker"
    certificate_kind = "exhaustion"

    def next_move(self, state) -> int:
        unclaimed = state.unclaimed()
        if not unclaimed:
            raise StrategyPreconditionError("no unclaimed vertex")
        live = _live_sets(state)
        maker = state.maker
        if not live:
            return unclaimed[0]
        weights = [(e, Fraction(1, 2 ** len(e - maker))) for e in live]
        best_v, best_drop = unclaimed[0], Fraction(-1)
        for v in unclaimed:
            drop = sum((w for e, w in weights if v in e), Fraction(0))
            if drop > best_drop:
                best_v, best_drop = v, drop
        return best_v


class GreedyMaker:
    """Claims the vertex with the largest potential gain over sets still
    claimable by the first player."""

    name = "greedy-maker"

    def next_move(self, state) -> int:
        unclaimed = state.unclaimed()
        if not unclaimed:
            raise StrategyPreconditionError("no unclaimed vertex")
        live = _live_sets(state)
        maker = state.maker
        if not live:
            return unclaimed[0]
        best_v, best_gain = unclaimed[0], Fraction(-1)
        for v in unclaimed:
            gain = sum(
                (Fraction(1, 2 ** len(e - maker)) for e in live if v in e), Fraction(0)
            )
            if gain > best_gain:
                best_v, best_gain = v, gain
        return best_v


class RandomMaker:
    name = "random-maker"

    def __init__(self, seed: int = 0):
        self._rng = random.Random(seed)

    def next_move(self, state) -> int:
        unclaimed = state.unclaimed()
        if not unclaimed:
            raise StrategyPreconditionError("no unclaimed vertex")
        return self._rng.choice(unclaimed)


# ---------------------------------------------------------------------------
# Structured blocker from the component decomposition
# ---------------------------------------------------------------------------


class DecompositionBreaker:
    """Blocks per the component decomposition: mirror inside the shared pair
    of a star, grab link vertices, complete-the-edge on a Pasch prefix,
    mirror inside cycle sections or the pair core, and answer a fresh vertex
    of a later edge with another fresh vertex of the same edge.

    Requires every component Maker plays in to be free of bicycles.
    """

    name = "dl2-breaker"
    certificate_kind = "exhaustion"

    def __init__(self):
        self._plans: dict[int, "_ComponentPlan"] = {}
        self._graph_id: Optional[int] = None

    def next_move(self, state) -> int:
        h = state.hypergraph
        if self._graph_id != id(h):
            self._plans.clear()
            self._graph_id = id(h)
        last = state.last_move
        if last is None or last[0] != "maker":
            return self._fallback(state, None)
        vertex = last[1]
        cid = h.component_of[vertex]
        plan = self._plan(h, cid)
        move = plan.respond(state, vertex)
        if move is not None:
            return move
        return self._fallback(state, cid)

    def _plan(self, h: Hypergraph, cid: int) -> "_ComponentPlan":
        if cid not in self._plans:
            result = decompose_component(h, cid)
            if isinstance(result, StructureWitness):
                raise StrategyPreconditionError(
                    f"component {cid} contains a {result.kind}; no blocking plan exists"
                )
            self._plans[cid] = _ComponentPlan.from_decomposition(h, cid, result)
        return self._plans[cid]

    def _fallback(self, state, cid: Optional[int]) -> int:
        unclaimed = state.unclaimed()
        if not unclaimed:
            raise StrategyPreconditionError("no unclaimed vertex")
        if cid is not None:
            h = state.hypergraph
            same = [v for v in unclaimed if h.component_of[v] == cid]
            if same:
                return same[0]
        return unclaimed[0]


@dataclass
class _ComponentPlan:
    case: str
    prefix_edges: tuple
    prefix_vertices: frozenset
    # vertex -> the mirror set it belongs to (None means answer arbitrarily)
    mirror_of: dict

    @classmethod
    def from_decomposition(cls, h: Hypergraph, cid: int, deco: Decomposition) -> "_ComponentPlan":
        order = deco.order
        prefix = order[: deco.prefix_length]
        prefix_vertices = frozenset(v for e in prefix for v in e)
        mirror: dict[int, Optional[frozenset]] = {}
        if deco.case == "simple":
            # lone initial edge: all of its vertices are fresh
            for e in prefix:
                for v in e:
                    mirror[v] = frozenset(e)
        elif deco.case == "overlapping_pair":
            core = frozenset(prefix[0]) & frozenset(prefix[1])
            for v in prefix_vertices:
                mirror[v] = core if v in core else None
        elif deco.case == "loose_cycle":
            s = len(prefix)
            for i, e in enumerate(prefix):
                section = frozenset(e) - frozenset(prefix[(i - 1) % s])
                for v in section:
                    mirror[v] = section
        elif deco.case == "star":
            params = deco.prefix_witness.parameters
            c1, c2 = params["centers"]
            shared: dict[frozenset, list] = {}
            for e in prefix:
                body = frozenset(e) - {c1, c2}
                shared.setdefault(body, []).append(e)
            for body in shared:
                for v in body:
                    mirror[v] = body
            mirror[c1] = None
            mirror[c2] = None
        elif deco.case in ("link", "pasch"):
            for v in prefix_vertices:
                mirror[v] = None  # handled by case-specific logic
        if deco.case != "simple":
            classified = classify_order(h, order)
            for i in range(deco.prefix_length, len(order)):
                fresh = classified.new_vertices[i]
                for v in fresh:
                    mirror[v] = fresh
        else:
            classified = classify_order(h, order)
            for i in range(1, len(order)):
                fresh = classified.new_vertices[i]
                for v in fresh:
                    mirror[v] = fresh
        return cls(deco.case, prefix, prefix_vertices, mirror)

    def respond(self, state, vertex: int) -> Optional[int]:
        claimed = state.maker | state.breaker
        if self.case == "pasch" and vertex in self.prefix_vertices:
            for e in self.prefix_edges:
                missing = [v for v in e if v not in claimed]
                if len(missing) == 1 and sum(1 for v in e if v in state.maker) == 2:
                    return missing[0]
            open_prefix = sorted(v for v in self.prefix_vertices if v not in claimed)
            return open_prefix[0] if open_prefix else None
        if self.case == "link" and vertex in self.prefix_vertices:
            open_prefix = sorted(v for v in self.prefix_vertices if v not in claimed)
            return open_prefix[0] if open_prefix else None
        section = self.mirror_of.get(vertex)
        if section is None:
            return None
        options = sorted(v for v in section if v not in claimed)
        return options[0] if options else None


# ---------------------------------------------------------------------------
# Residue triples for a single two-term equation a*x1 - b*x2 = c
# ---------------------------------------------------------------------------


class ResidueSolution(NamedTuple):
    z: int
    modulus: int
    alpha: int
    beta: int
    constant: int


def solve_residue(alpha: int, beta: int, constant: int) -> ResidueSolution:
    """The unique residue z modulo alpha*beta (after removing the common
    factor) such that x = z (mod alpha*beta) makes both chain neighbours
    (alpha*x - c)/beta and (beta*x + c)/alpha integers.

    Computed by the Chinese remainder theorem and verified by scanning every
    residue of the modulus.
    """
    if alpha < 1 or beta < 1 or alpha == beta:
        raise ValueError("alpha and beta must be distinct positive integers")
    t = gcd(alpha, beta)
    if constant % t != 0:
        raise DivisibilityError(f"gcd({alpha},{beta})={t} does not divide {constant}")
    a, b, c = alpha // t, beta // t, constant // t
    modulus = a * b
    # beta*x = -c (mod alpha) and alpha*x = c (mod beta)
    z_mod_a = (-c * pow(b, -1, a)) % a if a > 1 else 0
    z_mod_b = (c * pow(a, -1, b)) % b if b > 1 else 0
    z = z_mod_a
    if b > 1:
        # lift with CRT
        step = a
        while z % b != z_mod_b:
            z += step
        z %= modulus
    scan = [
        x
        for x in range(modulus)
        if (a * x - c) % b == 0 and (b * x + c) % a == 0
    ]
    if scan != [z]:
        raise AssertionError(f"residue scan {scan} disagrees with CRT value {z}")
    return ResidueSolution(z, modulus, a, b, c)


def chain_triple(x: int, alpha: int, beta: int, constant: int) -> Optional[tuple[int, int, int]]:
    """The triple ((alpha*x - c)/beta, x, (beta*x + c)/alpha) when it consists
    of three distinct positive integers, else None."""
    if (alpha * x - constant) % beta or (beta * x + constant) % alpha:
        return None
    lo = (alpha * x - constant) // beta
    hi = (beta * x + constant) // alpha
    values = (lo, x, hi)
    if len(set(values)) != 3 or any(v < 1 for v in values):
        return None
    return values


class TripleMaker:
    """Opens on the middle of a full chain triple present on the board, then
    completes whichever end survives.  Falls back to the smallest vertex."""

    name = "triple-maker"

    def __init__(self, alpha: int, beta: int, constant: int):
        t = gcd(alpha, beta)
        if constant % t != 0:
            raise DivisibilityError(f"gcd({alpha},{beta})={t} does not divide {constant}")
        self.alpha, self.beta, self.constant = alpha // t, beta // t, constant // t
        self._target: Optional[tuple[int, int, int]] = None

    def next_move(self, state) -> int:
        unclaimed = state.unclaimed()
        if not unclaimed:
            raise StrategyPreconditionError("no unclaimed vertex")
        if not state.maker and self._target is None:
            open_set = set(unclaimed)
            for x in unclaimed:
                triple = chain_triple(x, self.alpha, self.beta, self.constant)
                if triple and set(triple) <= open_set:
                    self._target = triple
                    return x
            return unclaimed[0]
        if self._target is not None:
            lo, _, hi = self._target
            for v in (min(lo, hi), max(lo, hi)):
                if v in unclaimed:
                    return v
        return unclaimed[0]


# ---------------------------------------------------------------------------
# Pairing strategies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairingTable:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        flat = [v for p in self.pairs for v in p]
        if len(flat) != len(set(flat)):
            raise ValueError("pairs must be disjoint")

    def partner(self, v: int) -> Optional[int]:
        for a, b in self.pairs:
            if v == a:
                return b
            if v == b:
                return a
        return None


def breaker_chain_pairing(board: Board, alpha: int, beta: int, constant: int) -> PairingTable:
    """Pair consecutive members of the chains y -> (beta*y + c)/alpha present
    on the board, greedily from the chain minima.

    Fails when three consecutive chain members all lie on the board: then no
    pairing blocks the middle equation pair.
    """
    t = gcd(alpha, beta)
    if constant % t != 0:
        raise DivisibilityError(f"gcd({alpha},{beta})={t} does not divide {constant}")
    a, b, c = alpha // t, beta // t, constant // t

    members = set(board.members)

    def successor(y: int) -> Optional[int]:
        if (b * y + c) % a != 0:
            return None
        nxt = (b * y + c) // a
        return nxt if nxt in members and nxt != y else None

    for y in board.members:
        nxt = successor(y)
        if nxt is not None:
            nxt2 = successor(nxt)
            if nxt2 is not None and len({y, nxt, nxt2}) == 3:
                raise PairingStructureError(
                    f"full chain triple {(y, nxt, nxt2)} on the board"
                )
    paired: set[int] = set()
    pairs: list[tuple[int, int]] = []
    for y in board.members:
        if y in paired:
            continue
        nxt = successor(y)
        if nxt is not None and nxt not in paired:
            pairs.append((y, nxt))
            paired.update((y, nxt))
    return PairingTable(tuple(pairs))


def _power_split(n: int, base: int) -> tuple[int, int]:
    """(exponent, cofactor) with n = base^exponent * cofactor, base-free cofactor."""
    e = 0
    while n % base == 0:
        n //= base
        e += 1
    return e, n


def breaker_power_pairing(board: Board, alpha: int, beta: int) -> PairingTable:
    """Pairing that blocks every geometric triple (alpha^2*x, alpha*beta*x,
    beta^2*x) on the board: writing n = alpha^i * beta^j * y with y divisible
    by neither, pair n with n*alpha/beta whenever i is even and j >= 1.

    When one of alpha, beta is 1 the exponent of that side is ill-defined, so
    the same invariant is kept by pairing consecutive members of each
    geometric chain at alternating positions.
    """
    if alpha < 1 or beta < 1 or alpha == beta:
        raise ValueError("alpha and beta must be distinct positive integers")
    if gcd(alpha, beta) != 1:
        raise ValueError("alpha and beta must be coprime")
    members = set(board.members)
    pairs = []
    if alpha == 1 or beta == 1:
        base = beta if alpha == 1 else alpha
        for n in board.members:
            e, _ = _power_split(n, base)
            if alpha == 1:
                # pair n with n/beta on even beta-exponents >= 2
                if e >= 2 and e % 2 == 0 and n // base in members:
                    pairs.append((n, n // base))
            else:
                # beta == 1: pair n with n*alpha on odd alpha-exponents
                if e % 2 == 1 and n * base in members:
                    pairs.append((n, n * base))
        return PairingTable(tuple(pairs))
    for n in board.members:
        i, rest = _power_split(n, alpha)
        j, y = _power_split(rest, beta)
        if i % 2 == 0 and j >= 1:
            partner = n // beta * alpha
            if partner in members:
                pairs.append((n, partner))
    return PairingTable(tuple(pairs))


class PairingBreaker:
    """Answers any move inside a pair with its partner; otherwise plays the
    smallest unclaimed vertex."""

    name = "pairing-breaker"
    certificate_kind = "pairing"

    def __init__(self, table: PairingTable, name: str | None = None):
        self.table = table
        if name:
            self.name = name

    def next_move(self, state) -> int:
        unclaimed = state.unclaimed()
        if not unclaimed:
            raise StrategyPreconditionError("no unclaimed vertex")
        last = state.last_move
        if last is not None and last[0] == "maker":
            partner = self.table.partner(last[1])
            if partner is not None and partner in unclaimed:
                return partner
        return unclaimed[0]

"""Edge-order calculus on uniform hypergraphs.

An edge order enumerates the edges of a hypergraph; a vertex is *new* in the
first edge containing it and *old* afterwards.  Edges are classified by their
old-vertex count, and a small zoo of intersection patterns (overlapping
pairs, loose paths/cycles, spoiled cycles, doubles, handles, connectors,
Pasch configurations, stars, links) drives both a production "bicycle"
detector and a constructive component decomposition.  A component is safe
for the blocking player exactly when it contains no bicycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from radogames.hypergraphs import Edge, Hypergraph
from radogames.matrices import SizeCapError

INITIAL = "initial"
GOOD = "good"
BAD = "bad"
K_BAD = "k_bad"
DISCONNECTED = "disconnected"

OVERLAPPING_PAIR = "overlapping_pair"
LOOSE_PATH = "loose_path"
LOOSE_CYCLE = "loose_cycle"
SPOILED_CYCLE = "spoiled_cycle"
DOUBLE_LOOSE_CYCLE = "double_loose_cycle"
DOUBLE_OVERLAPPING_PAIR = "double_overlapping_pair"
PAIR_OR_CYCLE_WITH_HANDLE = "pair_or_cycle_with_handle"
PAIR_OR_CYCLE_TO_PAIR_OR_CYCLE = "pair_or_cycle_to_pair_or_cycle"
PASCH = "pasch"
STAR_K_U_2 = "star_k_u_2"
LINK_K_U_A = "link_k_u_a"

STRUCTURE_KINDS = (
    OVERLAPPING_PAIR,
    LOOSE_PATH,
    LOOSE_CYCLE,
    SPOILED_CYCLE,
    DOUBLE_LOOSE_CYCLE,
    DOUBLE_OVERLAPPING_PAIR,
    PAIR_OR_CYCLE_WITH_HANDLE,
    PAIR_OR_CYCLE_TO_PAIR_OR_CYCLE,
    PASCH,
    STAR_K_U_2,
    LINK_K_U_A,
)

BICYCLE_KINDS = (
    SPOILED_CYCLE,
    DOUBLE_LOOSE_CYCLE,
    DOUBLE_OVERLAPPING_PAIR,
    PAIR_OR_CYCLE_WITH_HANDLE,
    PAIR_OR_CYCLE_TO_PAIR_OR_CYCLE,
)

DEFAULT_ORDER_SEARCH_CAP = 10


class InternalInconsistencyError(RuntimeError):
    """A bicycle-free component admitted no decomposition: implementation bug."""


@dataclass(frozen=True)
class EdgeOrder:
    order: tuple[Edge, ...]
    classes: tuple[str, ...]
    new_vertices: tuple[frozenset[int], ...]
    is_allowed: bool
    is_valid: bool
    is_simple: bool


@dataclass
class StructureWitness:
    kind: str
    edges: tuple[Edge, ...]
    parameters: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        params = {
            key: (list(v) if isinstance(v, (tuple, frozenset, set)) else v)
            for key, v in self.parameters.items()
        }
        return {"kind": self.kind, "edges": [list(e) for e in self.edges], "parameters": params}


@dataclass(frozen=True)
class Decomposition:
    """An edge order whose prefix is one closed structure (or a single edge)
    and whose remaining edges each introduce exactly one old vertex."""

    order: tuple[Edge, ...]
    case: str  # simple | loose_cycle | overlapping_pair | pasch | star | link
    prefix_length: int
    prefix_witness: Optional[StructureWitness]


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def classify_order(h: Hypergraph, order: Sequence[Sequence[int]]) -> EdgeOrder:
    """Tag every edge of the order by its old-vertex count."""
    k = h.uniformity
    edge_set = set(h.edges)
    canon = tuple(tuple(sorted(e)) for e in order)
    if len(set(canon)) != len(canon):
        raise ValueError("order lists an edge twice")
    for e in canon:
        if e not in edge_set:
            raise ValueError(f"{e} is not an edge of the hypergraph")
    classes: list[str] = []
    news: list[frozenset[int]] = []
    seen: set[int] = set()
    for pos, e in enumerate(canon):
        old = len(seen.intersection(e))
        if pos == 0:
            classes.append(INITIAL)
        elif old == 0:
            classes.append(DISCONNECTED)
        elif old == 1:
            classes.append(GOOD)
        elif old == k:
            classes.append(K_BAD)
        else:
            classes.append(BAD)
        news.append(frozenset(e) - seen)
        seen.update(e)
    allowed = DISCONNECTED not in classes
    valid = allowed and K_BAD not in classes
    simple = valid and BAD not in classes
    return EdgeOrder(canon, tuple(classes), tuple(news), allowed, valid, simple)


# ---------------------------------------------------------------------------
# Minimal paths
# ---------------------------------------------------------------------------


def find_minimal_path(
    h: Hypergraph,
    candidate_edges: Iterable[Sequence[int]],
    x1: Iterable[int],
    x2: Iterable[int],
) -> Optional[list[Edge]]:
    """Shortest edge sequence from x1 to x2 within the candidates: only the
    first edge meets x1, only the last meets x2, consecutive edges intersect,
    non-consecutive edges are disjoint.  Ties resolve lexicographically.
    """
    set1, set2 = frozenset(x1), frozenset(x2)
    if set1 & set2:
        raise ValueError("x1 and x2 must be disjoint")
    pool = sorted(tuple(sorted(e)) for e in candidate_edges)
    pool_sets = [frozenset(e) for e in pool]

    for length in range(1, len(pool) + 1):
        hit = _minimal_path_dfs(pool, pool_sets, set1, set2, length, [], [])
        if hit is not None:
            return hit
    return None


def _minimal_path_dfs(pool, pool_sets, set1, set2, length, seq, seq_sets):
    pos = len(seq)
    if pos == length:
        return list(seq)
    last = pos == length - 1
    for idx, e in enumerate(pool):
        es = pool_sets[idx]
        if e in seq:
            continue
        if pos == 0:
            if not es & set1:
                continue
        else:
            if es & set1:
                continue
            if not es & seq_sets[-1]:
                continue
            if any(es & s for s in seq_sets[:-1]):
                continue
        if last:
            if not es & set2:
                continue
        else:
            if es & set2:
                continue
        seq.append(e)
        seq_sets.append(es)
        hit = _minimal_path_dfs(pool, pool_sets, set1, set2, length, seq, seq_sets)
        if hit is not None:
            return hit
        seq.pop()
        seq_sets.pop()
    return None


# ---------------------------------------------------------------------------
# Structure validators
# ---------------------------------------------------------------------------


def recognize_structure(h: Hypergraph, edges: Sequence[Sequence[int]], kind: str) -> bool:
    return structure_parameters(h, edges, kind) is not None


def structure_parameters(
    h: Hypergraph, edges: Sequence[Sequence[int]], kind: str
) -> Optional[dict]:
    """Validate the sequence against the named intersection pattern; returns
    the extracted parameters (u, a, centers, joints...) or None."""
    if kind not in STRUCTURE_KINDS:
        raise ValueError(f"unknown structure kind {kind!r}")
    seq = [tuple(sorted(e)) for e in edges]
    if len(set(seq)) != len(seq) or not seq:
        return None
    k = h.uniformity
    sets = [frozenset(e) for e in seq]
    matcher = _MATCHERS[kind]
    return matcher(k, seq, sets)


def _consecutive_intersecting(sets) -> bool:
    return all(sets[i] & sets[i + 1] for i in range(len(sets) - 1))


def _order_classes(k, sets) -> list[int]:
    """Old-vertex count per edge for the sequence as its own order."""
    seen: set[int] = set()
    counts = []
    for s in sets:
        counts.append(len(seen & s))
        seen |= s
    return counts


def _is_valid_sequence(k, sets) -> bool:
    counts = _order_classes(k, sets)
    return all(1 <= c <= k - 1 for c in counts[1:])


def _is_allowed_sequence(k, sets) -> bool:
    counts = _order_classes(k, sets)
    return all(c >= 1 for c in counts[1:])


def _match_overlapping_pair(k, seq, sets):
    if len(seq) != 2:
        return None
    inter = sets[0] & sets[1]
    if 2 <= len(inter) <= k - 1:
        return {"k": k, "u": 2, "core": tuple(sorted(inter))}
    return None


def _match_loose_path(k, seq, sets):
    u = len(seq)
    for i in range(u):
        for j in range(i + 1, u):
            expected = 1 if j == i + 1 else 0
            if len(sets[i] & sets[j]) != expected:
                return None
    return {"k": k, "u": u}


def _match_loose_cycle(k, seq, sets):
    u = len(seq)
    if u < 3:
        return None
    for i in range(u):
        for j in range(i + 1, u):
            consecutive = j == i + 1 or (i == 0 and j == u - 1)
            expected = 1 if consecutive else 0
            if len(sets[i] & sets[j]) != expected:
                return None
    if u == 3:
        joints = sets[0] & sets[1] | sets[1] & sets[2] | sets[0] & sets[2]
        if len(joints) != 3:  # three edges through one vertex are a star, not a cycle
            return None
    return {"k": k, "u": u}


def _match_spoiled_cycle(k, seq, sets):
    u = len(seq)
    if u < 3:
        return None
    if not _is_valid_sequence(k, sets) or not _consecutive_intersecting(sets):
        return None
    if _match_overlapping_pair(k, seq[:2], sets[:2]) is None:
        return None
    if _match_loose_path(k, seq[2:], sets[2:]) is None:
        return None
    v_pair = sets[0] | sets[1]
    v_path = frozenset().union(*sets[2:])
    z_set = sets[3] if u >= 4 else sets[0]
    x_set = (sets[1] - sets[0]) & (sets[2] - z_set)
    y_set = (sets[0] - sets[1]) & (sets[-1] - sets[-2])
    if len(x_set) != 1 or len(y_set) != 1 or x_set == y_set:
        return None
    if v_pair & v_path != x_set | y_set:
        return None
    return {"k": k, "u": u, "x": min(x_set), "y": min(y_set)}


def _match_double_loose_cycle(k, seq, sets):
    u = len(seq)
    if not _is_valid_sequence(k, sets) or not _consecutive_intersecting(sets):
        return None
    for v in range(3, u - 1):
        if _match_loose_cycle(k, seq[:v], sets[:v]) is None:
            continue
        if _match_loose_path(k, seq[v:], sets[v:]) is None:
            continue
        v_cycle = frozenset().union(*sets[:v])
        v_path = frozenset().union(*sets[v:])
        x_set = (sets[v] - sets[v + 1]) & sets[v - 1]
        if len(x_set) != 1:
            continue
        y_candidates = [
            (sets[-1] - sets[-2]) & sets[a] for a in range(v)
        ]
        y_set = next((ys for ys in y_candidates if len(ys) == 1 and ys != x_set), None)
        if y_set is None:
            continue
        if v_cycle & v_path != x_set | y_set:
            continue
        return {"k": k, "u": u, "cycle_length": v, "x": min(x_set), "y": min(y_set)}
    return None


def _match_double_overlapping_pair(k, seq, sets):
    if len(seq) != 4:
        return None
    if not _is_valid_sequence(k, sets) or not _consecutive_intersecting(sets):
        return None
    if _match_overlapping_pair(k, seq[:2], sets[:2]) is None:
        return None
    if _match_overlapping_pair(k, seq[2:], sets[2:]) is None:
        return None
    if len(sets[2] & sets[3]) > k - 2:
        return None
    x_set = (sets[0] - sets[1]) & (sets[3] - sets[2])
    y_set = (sets[1] - sets[0]) & (sets[2] - sets[3])
    if len(x_set) != 1 or len(y_set) != 1 or x_set == y_set:
        return None
    if (sets[0] | sets[1]) & (sets[2] | sets[3]) != x_set | y_set:
        return None
    return {"k": k, "u": 4, "x": min(x_set), "y": min(y_set)}


def _match_pair_or_cycle(k, seq, sets):
    pair = _match_overlapping_pair(k, seq, sets)
    if pair is not None:
        return {"shape": "pair", **pair}
    cycle = _match_loose_cycle(k, seq, sets)
    if cycle is not None:
        return {"shape": "cycle", **cycle}
    return None


def _match_pair_or_cycle_with_handle(k, seq, sets):
    if len(seq) < 3:
        return None
    seed = _match_pair_or_cycle(k, seq[:-1], sets[:-1])
    if seed is None:
        return None
    body = frozenset().union(*sets[:-1])
    old = len(sets[-1] & body)
    if not 2 <= old <= k - 1:
        return None
    if not _consecutive_intersecting(sets):
        return None
    return {"k": k, "u": len(seq), "seed": seed["shape"], "handle_old": old}


def _match_pair_or_cycle_to_pair_or_cycle(k, seq, sets):
    u = len(seq)
    if u < 4:
        return None
    if not _is_valid_sequence(k, sets) or not _consecutive_intersecting(sets):
        return None
    for w in range(2, u - 1):
        p1 = _match_pair_or_cycle(k, seq[:w], sets[:w])
        if p1 is None:
            continue
        v1 = frozenset().union(*sets[:w])
        for v in range(w, u - 1):
            p3 = _match_pair_or_cycle(k, seq[v:], sets[v:])
            if p3 is None:
                continue
            v3 = frozenset().union(*sets[v:])
            if v == w:
                if len(v1 & v3) == 1:
                    return {"k": k, "u": u, "first": p1["shape"], "second": p3["shape"], "path_length": 0}
                continue
            if _match_loose_path(k, seq[w:v], sets[w:v]) is None:
                continue
            v2 = frozenset().union(*sets[w:v])
            if len(v1 & v2) != 1 or v1 & v3 or len(v2 & v3) != 1:
                continue
            if w <= v - 2 and (sets[w + 1] & v1 or sets[v - 2] & v3):
                continue
            return {
                "k": k,
                "u": u,
                "first": p1["shape"],
                "second": p3["shape"],
                "path_length": v - w,
            }
    return None


def _match_pasch(k, seq, sets):
    if k != 3 or len(seq) != 4:
        return None
    if not _is_allowed_sequence(k, sets):
        return None
    vertices = frozenset().union(*sets)
    if len(vertices) != 6:
        return None
    joints = set()
    for i, j in combinations(range(4), 2):
        inter = sets[i] & sets[j]
        if len(inter) != 1:
            return None
        joints |= inter
    if len(joints) != 6:
        return None
    return {"k": k, "u": 4}


def _match_star(k, seq, sets):
    u2 = len(seq)
    if u2 < 4 or u2 % 2:
        return None
    if not _is_allowed_sequence(k, sets):
        return None
    vertices = sorted(frozenset().union(*sets))
    for c1, c2 in permutations(vertices, 2):
        s1 = [s for s in sets if c1 in s and c2 not in s]
        s2 = [s for s in sets if c2 in s and c1 not in s]
        if len(s1) != u2 // 2 or len(s2) != u2 // 2 or len(s1) + len(s2) != u2:
            continue
        if any(len(a & b) != 1 for a, b in combinations(s1, 2)):
            continue
        if any(len(a & b) != 1 for a, b in combinations(s2, 2)):
            continue
        bodies1 = {s - {c1} for s in s1}
        bodies2 = {s - {c2} for s in s2}
        if bodies1 != bodies2 or len(bodies1) != u2 // 2:
            continue
        return {"k": k, "u": u2 // 2, "centers": (c1, c2)}
    return None


def _match_link(k, seq, sets):
    u = len(seq)
    if u < 2:
        return None
    vertices = frozenset().union(*sets)
    a = len(vertices) - k
    if a < 1:
        return None
    for s1, s2 in combinations(sets, 2):
        if s1 | s2 != vertices:
            return None
    if not _is_allowed_sequence(k, sets):
        return None
    return {"k": k, "u": u, "a": a}


_MATCHERS = {
    OVERLAPPING_PAIR: _match_overlapping_pair,
    LOOSE_PATH: _match_loose_path,
    LOOSE_CYCLE: _match_loose_cycle,
    SPOILED_CYCLE: _match_spoiled_cycle,
    DOUBLE_LOOSE_CYCLE: _match_double_loose_cycle,
    DOUBLE_OVERLAPPING_PAIR: _match_double_overlapping_pair,
    PAIR_OR_CYCLE_WITH_HANDLE: _match_pair_or_cycle_with_handle,
    PAIR_OR_CYCLE_TO_PAIR_OR_CYCLE: _match_pair_or_cycle_to_pair_or_cycle,
    PASCH: _match_pasch,
    STAR_K_U_2: _match_star,
    LINK_K_U_A: _match_link,
}


# ---------------------------------------------------------------------------
# Ground-truth oracle: search for a valid order with two bad edges
# ---------------------------------------------------------------------------


def has_bad_valid_order(
    h: Hypergraph, component: int, cap: int = DEFAULT_ORDER_SEARCH_CAP
) -> tuple[bool, Optional[list[Edge]]]:
    """Exhaustive search over valid edge orders of every connected
    sub-hypergraph of the component for one with at least two bad edges.

    Any valid prefix is a complete valid order of the sub-hypergraph formed
    by its own edges, so prefix search is exhaustive over sub-hypergraphs.
    """
    edges = sorted(h.component_edges(component))
    if len(edges) > cap:
        raise SizeCapError(f"order search capped at {cap} edges, component has {len(edges)}")
    k = h.uniformity
    sets = {e: frozenset(e) for e in edges}
    failed: set[tuple[frozenset[Edge], int]] = set()

    def dfs(used: list[Edge], seen: frozenset[int], bad: int) -> Optional[list[Edge]]:
        if bad >= 2:
            return list(used)
        key = (frozenset(used), bad)
        if key in failed:
            return None
        for e in edges:
            if e in used:
                continue
            old = len(sets[e] & seen)
            if used and (old == 0 or old == k):
                continue
            extra = 1 if used and 2 <= old <= k - 1 else 0
            used.append(e)
            hit = dfs(used, seen | sets[e], bad + extra)
            if hit is not None:
                return hit
            used.pop()
        failed.add(key)
        return None

    witness = dfs([], frozenset(), 0)
    return (witness is not None), witness


# ---------------------------------------------------------------------------
# Seed enumeration
# ---------------------------------------------------------------------------


def _overlapping_pairs(k, edges, sets):
    """Pairs of edges sharing 2..k-1 vertices, via vertex-pair incidence."""
    by_vertex_pair: dict[tuple[int, int], list[Edge]] = {}
    for e in edges:
        for pair in combinations(e, 2):
            by_vertex_pair.setdefault(pair, []).append(e)
    found = set()
    for group in by_vertex_pair.values():
        for e, f in combinations(group, 2):
            if 2 <= len(sets[e] & sets[f]) <= k - 1:
                found.add((e, f) if e < f else (f, e))
    return sorted(found)


def _iter_loose_cycles(k, edges, sets):
    """All loose cycles, canonically: lexicographically least edge first,
    second edge smaller than the closing edge."""
    for start in edges:
        pool = [e for e in edges if e > start]
        start_set = sets[start]

        def extend(path, path_sets):
            last_set = path_sets[-1]
            second = len(path) == 1
            for e in pool:
                if e in path:
                    continue
                es = sets[e]
                if len(es & last_set) != 1:
                    continue
                if any(es & s for s in path_sets[1:-1]):
                    continue
                if second:
                    # the consecutive intersection is with the start edge itself
                    path.append(e)
                    path_sets.append(es)
                    yield from extend(path, path_sets)
                    path.pop()
                    path_sets.pop()
                    continue
                touch_start = es & start_set
                if touch_start:
                    # candidate closing edge; canonical direction: second > last
                    if len(touch_start) == 1 and e < path[1]:
                        cycle = path + [e]
                        if len(cycle) > 3 or _distinct_triangle(sets, cycle):
                            yield list(cycle)
                    continue
                path.append(e)
                path_sets.append(es)
                yield from extend(path, path_sets)
                path.pop()
                path_sets.pop()

        yield from extend([start], [sets[start]])


def _distinct_triangle(sets, cycle) -> bool:
    a, b, c = (sets[e] for e in cycle)
    return len((a & b) | (b & c) | (a & c)) == 3


def _loose_path_dfs(pool, sets, first_ok, interior_ok, last_ok, min_len, max_len, single_ok=None):
    """Loose paths (consecutive intersections of size one, others disjoint)
    whose first/interior/last edges satisfy the given predicates.

    Length-one paths are governed by single_ok, since first/last constraints
    are usually contradictory for a lone edge.
    """
    pool = sorted(pool)
    min_multi = max(min_len, 2)

    def extend(path, path_sets):
        # invariant: path[0] passes first_ok, path[1:] pass interior_ok
        last_set = path_sets[-1]
        for e in pool:
            if e in path:
                continue
            es = sets[e]
            if len(es & last_set) != 1:
                continue
            if any(es & s for s in path_sets[:-1]):
                continue
            if len(path) + 1 >= min_multi and last_ok(e, es):
                yield path + [e]
            if len(path) + 1 < max_len and interior_ok(e, es):
                path.append(e)
                path_sets.append(es)
                yield from extend(path, path_sets)
                path.pop()
                path_sets.pop()

    for e in pool:
        es = sets[e]
        if min_len <= 1 and single_ok is not None and single_ok(e, es):
            yield [e]
        if max_len >= 2 and first_ok(e, es):
            yield from extend([e], [es])


# ---------------------------------------------------------------------------
# Bicycle detection (pattern-directed)
# ---------------------------------------------------------------------------


def detect_bicycle(h: Hypergraph, component: int) -> Optional[StructureWitness]:
    """Search the component for a spoiled cycle, a double pair/cycle, a
    pair/cycle with handle, or a pair/cycle-to-pair/cycle connector.

    Seeds are overlapping pairs and loose cycles; handles and connecting
    paths are grown around them.  Every candidate is validated against its
    pattern before being returned.
    """
    edges = sorted(h.component_edges(component))
    if len(edges) < 3:
        return None
    k = h.uniformity
    sets = {e: frozenset(e) for e in edges}

    pairs = _overlapping_pairs(k, edges, sets)
    incidence: dict[int, list[Edge]] = {}
    for e in edges:
        for v in e:
            incidence.setdefault(v, []).append(e)

    # 1. pair with handle
    for e, f in pairs:
        body = sets[e] | sets[f]
        nearby = sorted({g for v in body for g in incidence[v]} - {e, f})
        for g in nearby:
            if 2 <= len(sets[g] & body) <= k - 1:
                seq = (e, f, g) if sets[g] & sets[f] else (f, e, g)
                w = _witness(h, seq, PAIR_OR_CYCLE_WITH_HANDLE)
                if w:
                    return w

    cycles = list(_iter_loose_cycles(k, edges, sets))

    # 2. cycle with handle
    for cycle in cycles:
        body = frozenset().union(*(sets[e] for e in cycle))
        cycle_set = set(cycle)
        for g in edges:
            if g in cycle_set:
                continue
            if 2 <= len(sets[g] & body) <= k - 1:
                rotated = _rotate_cycle_to_touch(cycle, sets, sets[g])
                w = _witness(h, tuple(rotated) + (g,), PAIR_OR_CYCLE_WITH_HANDLE)
                if w:
                    return w

    # 3. double overlapping pair
    for (e1, e2), (f1, f2) in combinations(pairs, 2):
        if {e1, e2} & {f1, f2}:
            continue
        for p in ((e1, e2), (e2, e1)):
            for q in ((f1, f2), (f2, f1)):
                for seq in (p + q, q + p):
                    w = _witness(h, seq, DOUBLE_OVERLAPPING_PAIR)
                    if w:
                        return w

    # 4. spoiled cycle: ordered pair plus a loose path back between the sides
    for e, f in pairs:
        for p1 in ((e, f), (f, e)):
            a, b = p1
            v_pair = sets[a] | sets[b]
            x_side = sets[b] - sets[a]
            y_side = sets[a] - sets[b]
            pool = [g for g in edges if g not in (a, b)]
            paths = _loose_path_dfs(
                pool,
                sets,
                first_ok=lambda g, gs: len(gs & v_pair) == 1 and gs & x_side,
                interior_ok=lambda g, gs: not gs & v_pair,
                last_ok=lambda g, gs: len(gs & v_pair) == 1 and gs & y_side,
                min_len=2,
                max_len=len(pool),
            )
            for path in paths:
                w = _witness(h, p1 + tuple(path), SPOILED_CYCLE)
                if w:
                    return w

    # 5. double loose cycle: cycle plus a loose path re-attaching to it
    for cycle in cycles:
        v_cycle = frozenset().union(*(sets[e] for e in cycle))
        pool = [g for g in edges if g not in cycle]
        paths = _loose_path_dfs(
            pool,
            sets,
            first_ok=lambda g, gs: len(gs & v_cycle) == 1,
            interior_ok=lambda g, gs: not gs & v_cycle,
            last_ok=lambda g, gs: len(gs & v_cycle) == 1,
            min_len=2,
            max_len=len(pool),
        )
        for path in paths:
            x_set = sets[path[0]] & v_cycle
            rotated = _rotate_cycle_to_touch(cycle, sets, x_set)
            for oriented in (rotated, list(reversed(rotated))):
                fixed = _rotate_cycle_to_touch(oriented, sets, x_set)
                w = _witness(h, tuple(fixed) + tuple(path), DOUBLE_LOOSE_CYCLE)
                if w:
                    return w

    # 6. connectors: two seeds sharing one vertex or joined by a loose path
    seeds = [(("pair",) + p) for p in pairs] + [("cycle",) + tuple(c) for c in cycles]
    for i, s1 in enumerate(seeds):
        edges1 = s1[1:]
        v1 = frozenset().union(*(sets[e] for e in edges1))
        for s2 in seeds[i + 1 :]:
            edges2 = s2[1:]
            if set(edges1) & set(edges2):
                continue
            v2 = frozenset().union(*(sets[e] for e in edges2))
            shared = v1 & v2
            if len(shared) == 1:
                for first, second in ((s1, s2), (s2, s1)):
                    seq = _present_seed_last(first, sets, shared) + _present_seed_first(
                        second, sets, shared
                    )
                    w = _witness(h, tuple(seq), PAIR_OR_CYCLE_TO_PAIR_OR_CYCLE)
                    if w:
                        return w
            elif not shared:
                pool = [g for g in edges if g not in edges1 and g not in edges2]
                paths = _loose_path_dfs(
                    pool,
                    sets,
                    first_ok=lambda g, gs: len(gs & v1) == 1 and not gs & v2,
                    interior_ok=lambda g, gs: not gs & v1 and not gs & v2,
                    last_ok=lambda g, gs: len(gs & v2) == 1 and not gs & v1,
                    min_len=1,
                    max_len=len(pool),
                    single_ok=lambda g, gs: len(gs & v1) == 1 and len(gs & v2) == 1,
                )
                for path in paths:
                    touch1 = sets[path[0]] & v1
                    touch2 = sets[path[-1]] & v2
                    seq = (
                        _present_seed_last(s1, sets, touch1)
                        + list(path)
                        + _present_seed_first(s2, sets, touch2)
                    )
                    w = _witness(h, tuple(seq), PAIR_OR_CYCLE_TO_PAIR_OR_CYCLE)
                    if w:
                        return w
    return None


def _witness(h, seq, kind) -> Optional[StructureWitness]:
    params = structure_parameters(h, seq, kind)
    if params is None:
        return None
    return StructureWitness(kind, tuple(tuple(sorted(e)) for e in seq), params)


def _rotate_cycle_to_touch(cycle, sets, target: frozenset) -> list[Edge]:
    """Rotate so the last edge meets the target vertex set."""
    for shift in range(len(cycle)):
        rotated = cycle[shift:] + cycle[:shift]
        if sets[rotated[-1]] & target:
            return list(rotated)
    return list(cycle)


def _present_seed_last(seed, sets, target: frozenset) -> list[Edge]:
    """Order the seed's edges so the edge meeting the target comes last."""
    kind, *edges = seed
    if kind == "pair":
        a, b = edges
        return [a, b] if sets[b] & target else [b, a]
    return _rotate_cycle_to_touch(list(edges), sets, target)


def _present_seed_first(seed, sets, target: frozenset) -> list[Edge]:
    return list(reversed(_present_seed_last(seed, sets, target)))


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------


def decompose_component(h: Hypergraph, component: int):
    """Order the component's edges as one structured prefix followed by edges
    that each introduce exactly one old vertex.

    Returns a Decomposition, or the blocking StructureWitness when the
    component contains a bicycle.
    """
    bicycle = detect_bicycle(h, component)
    if bicycle is not None:
        return bicycle
    edges = sorted(h.component_edges(component))
    k = h.uniformity
    if not edges:
        return Decomposition((), "simple", 0, None)
    sets = {e: frozenset(e) for e in edges}

    failed: set[frozenset[Edge]] = set()

    def extend_all_good(prefix: list[Edge]) -> Optional[list[Edge]]:
        if len(prefix) == len(edges):
            return list(prefix)
        key = frozenset(prefix)
        if key in failed:
            return None
        seen = frozenset().union(*(sets[e] for e in prefix))
        for e in edges:
            if e in prefix:
                continue
            if len(sets[e] & seen) != 1:
                continue
            prefix.append(e)
            hit = extend_all_good(prefix)
            if hit is not None:
                return hit
            prefix.pop()
        failed.add(key)
        return None

    def finish(prefix: Sequence[Edge], case: str, kind: Optional[str]) -> Optional[Decomposition]:
        order = extend_all_good(list(prefix))
        if order is None:
            return None
        witness = _witness(h, tuple(prefix), kind) if kind else None
        if kind and witness is None:
            return None
        return Decomposition(tuple(order), case, len(prefix), witness)

    # simple: a lone initial edge, everything after introduces one old vertex
    for e in edges:
        result = finish([e], "simple", None)
        if result:
            return result

    pairs = _overlapping_pairs(k, edges, sets)
    for e, f in pairs:
        result = finish([e, f], "overlapping_pair", OVERLAPPING_PAIR)
        if result:
            return result

    for cycle in _iter_loose_cycles(k, edges, sets):
        result = finish(cycle, "loose_cycle", LOOSE_CYCLE)
        if result:
            return result

    if k == 3:
        for quad in combinations(edges, 4):
            if _match_pasch(k, quad, [sets[e] for e in quad]) is not None:
                result = finish(quad, "pasch", PASCH)
                if result:
                    return result

    for star_order in _iter_stars(k, edges, sets):
        result = finish(star_order, "star", STAR_K_U_2)
        if result:
            return result

    for link_order in _iter_links(k, edges, sets):
        result = finish(link_order, "link", LINK_K_U_A)
        if result:
            return result

    raise InternalInconsistencyError(
        f"bicycle-free component {component} admitted no decomposition"
    )


def _iter_stars(k, edges, sets):
    """Maximal two-center stars: edges through c1 and c2 whose bodies match."""
    vertices = sorted(frozenset().union(*(sets[e] for e in edges))) if edges else []
    seen_sets = set()
    for c1, c2 in combinations(vertices, 2):
        group1 = [e for e in edges if c1 in sets[e] and c2 not in sets[e]]
        group2 = [e for e in edges if c2 in sets[e] and c1 not in sets[e]]
        bodies1 = {sets[e] - {c1}: e for e in group1}
        bodies2 = {sets[e] - {c2}: e for e in group2}
        shared_bodies = [
            b for b in bodies1 if b in bodies2 and len(b & frozenset((c1, c2))) == 0
        ]
        if len(shared_bodies) < 2:
            continue
        shared_bodies.sort(key=lambda b: tuple(sorted(b)))
        star = []
        for b in shared_bodies:
            star.extend((bodies1[b], bodies2[b]))
        if any(len(x & y) != 1 for x, y in combinations([sets[bodies1[b]] for b in shared_bodies], 2)):
            continue
        key = frozenset(star)
        if key in seen_sets:
            continue
        seen_sets.add(key)
        yield tuple(star)


def _iter_links(k, edges, sets):
    """Maximal groups of >= 3 edges every two of which cover the same k+a set."""
    seen = set()
    for e, f in combinations(edges, 2):
        union = sets[e] | sets[f]
        a = len(union) - k
        if a < 1:
            continue
        group = [g for g in edges if sets[g] <= union and len(sets[g]) == k]
        group = [
            g
            for g in group
            if all(sets[g] | sets[x] == union for x in (e, f) if x != g)
        ]
        # keep only edges pairwise covering the union
        cluster = []
        for g in sorted(group):
            if all(sets[g] | sets[x] == union for x in cluster):
                cluster.append(g)
        if len(cluster) < 3:
            continue
        key = frozenset(cluster)
        if key in seen:
            continue
        seen.add(key)
        yield tuple(cluster)


def find_structure(h: Hypergraph, component: int, kind: str) -> Optional[StructureWitness]:
    """First witness of the named kind within the component, or None.

    'bicycle' searches all four bicycle families.
    """
    if kind == "bicycle":
        return detect_bicycle(h, component)
    edges = sorted(h.component_edges(component))
    k = h.uniformity
    sets = {e: frozenset(e) for e in edges}
    if kind == OVERLAPPING_PAIR:
        pairs = _overlapping_pairs(k, edges, sets)
        return _witness(h, pairs[0], kind) if pairs else None
    if kind == LOOSE_CYCLE:
        for cycle in _iter_loose_cycles(k, edges, sets):
            return _witness(h, tuple(cycle), kind)
        return None
    if kind == LOOSE_PATH:
        for e, f in combinations(edges, 2):
            if len(sets[e] & sets[f]) == 1:
                return _witness(h, (e, f), kind)
        return None
    if kind == PASCH:
        if k != 3:
            return None
        for quad in combinations(edges, 4):
            w = _witness(h, quad, kind)
            if w:
                return w
        return None
    if kind == STAR_K_U_2:
        for star in _iter_stars(k, edges, sets):
            return _witness(h, star, kind)
        return None
    if kind == LINK_K_U_A:
        for link in _iter_links(k, edges, sets):
            return _witness(h, link, kind)
        return None
    if kind in BICYCLE_KINDS:
        witness = detect_bicycle(h, component)
        if witness is not None and witness.kind == kind:
            return witness
        return _exhaustive_structure_search(h, edges, kind)
    raise ValueError(f"unknown structure kind {kind!r}")


def _exhaustive_structure_search(h, edges, kind) -> Optional[StructureWitness]:
    """Last-resort ordered search for a specific pattern; component-sized."""
    for size in range(3, len(edges) + 1):
        for subset in combinations(edges, size):
            for seq in permutations(subset):
                w = _witness(h, seq, kind)
                if w:
                    return w
    return None

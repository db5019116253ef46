"""Shared generators and oracles for the test suite."""

from itertools import combinations

from radogames.hypergraphs import Hypergraph


def build(edges, k=3, extra_vertices=()):
    vertices = sorted({v for e in edges for v in e} | set(extra_vertices))
    return Hypergraph(vertices, edges, k)


def random_connected_edges(rng, n_edges, k=3):
    """Connected k-uniform hypergraph built edge-by-edge: every new edge uses
    a non-empty subset of existing vertices plus freshly numbered ones."""
    edges = [tuple(range(1, k + 1))]
    n_vertices = k
    while len(edges) < n_edges:
        old_size = rng.randint(1, k)
        old = tuple(sorted(rng.sample(range(1, n_vertices + 1), min(old_size, n_vertices))))
        fresh = tuple(range(n_vertices + 1, n_vertices + 1 + (k - len(old))))
        edge = tuple(sorted(old + fresh))
        if edge in edges:
            continue
        edges.append(edge)
        n_vertices += len(fresh)
    return edges


def exhaustive_connected_edge_sets(max_edges=4, max_vertices=9, k=3):
    """Every connected k-uniform hypergraph with <= max_edges edges, up to
    isomorphism: vertices are numbered in order of first appearance, so each
    isomorphism class appears at least once."""
    seen = set()
    out = []

    def grow(edges, n_vertices):
        key = frozenset(edges)
        if key not in seen:
            seen.add(key)
            out.append(tuple(edges))
        if len(edges) == max_edges:
            return
        for old_size in range(1, k + 1):
            fresh_count = k - old_size
            if n_vertices + fresh_count > max_vertices:
                continue
            fresh = tuple(range(n_vertices + 1, n_vertices + 1 + fresh_count))
            for old in combinations(range(1, n_vertices + 1), old_size):
                edge = tuple(sorted(old + fresh))
                if edge in edges:
                    continue
                grow(edges + [edge], n_vertices + fresh_count)

    grow([tuple(range(1, k + 1))], k)
    return out


def naive_minimax_winner(h, bias=1):
    """Oracle game solver: whole-board memoized minimax, first player tries to
    claim a full edge, exhaustion goes to the second player.  No component
    split, no isolated-vertex pruning, no move restriction.

    The only speedup is the sound terminal 'no claimable edge remains': once
    every edge holds an opposing vertex the claiming player can never win.
    """
    vertices = list(h.vertices)
    index = {v: i for i, v in enumerate(vertices)}
    masks = [sum(1 << index[v] for v in e) for e in h.edges]
    full = (1 << len(vertices)) - 1
    memo = {}

    def maker_wins(maker, breaker, maker_to_move, picks):
        if any(mask & ~maker == 0 for mask in masks):
            return True
        if all(mask & breaker for mask in masks):
            return False
        claimed = maker | breaker
        if claimed == full:
            return False
        key = (maker, breaker, maker_to_move, picks)
        if key in memo:
            return memo[key]
        free = [i for i in range(len(vertices)) if not claimed >> i & 1]
        if maker_to_move:
            result = any(maker_wins(maker | 1 << i, breaker, False, bias) for i in free)
        else:
            nxt_maker = picks == 1
            result = all(
                maker_wins(maker, breaker | 1 << i, nxt_maker, 1 if nxt_maker else picks - 1)
                for i in free
            )
        memo[key] = result
        return result

    if not masks:
        return "breaker"
    return "maker" if maker_wins(0, 0, True, bias) else "breaker"

"""Solution hypergraphs: enumerate distinct-coordinate solutions over a board
and expose them as a uniform hypergraph with component structure.

Edges are value sets (deduplicated); the coordinate assignment certifying a
set is not stored.  Boards are plain subsets of [1, n].
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import lcm
from typing import Iterable, NamedTuple, Optional, Sequence

from radogames.matrices import RadoSystem, SizeCapError, rank_rational, rref

Edge = tuple[int, ...]

MU_EXACT_CAP = 24


@dataclass(frozen=True)
class Board:
    """A sorted duplicate-free subset of [1, n]."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("members must be sorted and duplicate-free")
        if self.members and not (1 <= self.members[0] and self.members[-1] <= self.n):
            raise ValueError("members must lie in [1, n]")

    @classmethod
    def full(cls, n: int) -> "Board":
        return cls(n, tuple(range(1, n + 1)))

    @classmethod
    def from_iterable(cls, n: int, values: Iterable[int]) -> "Board":
        return cls(n, tuple(sorted(set(int(v) for v in values))))

    def __len__(self) -> int:
        return len(self.members)


def sample_board(n: int, p: float, seed: int) -> Board:
    """Include each element of [1, n] independently with probability p.

    One uniform draw per integer, in order.  Boards sampled with the same
    seed are nested across p: larger p can only add elements.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = random.Random(seed)
    members = tuple(i for i in range(1, n + 1) if rng.random() < p)
    return Board(n, members)


class Hypergraph:
    """Immutable uniform hypergraph over integer vertices with a component index."""

    __slots__ = ("vertices", "edges", "uniformity", "component_of", "_edge_sets", "_vertex_set")

    def __init__(self, vertices: Iterable[int], edges: Iterable[Sequence[int]], uniformity: int):
        self.vertices: tuple[int, ...] = tuple(sorted(set(int(v) for v in vertices)))
        self._vertex_set = frozenset(self.vertices)
        canon = {tuple(sorted(int(v) for v in e)) for e in edges}
        for e in canon:
            if len(set(e)) != uniformity:
                raise ValueError(f"edge {e} does not have {uniformity} distinct vertices")
            if not set(e) <= self._vertex_set:
                raise ValueError(f"edge {e} leaves the vertex set")
        self.edges: tuple[Edge, ...] = tuple(sorted(canon))
        self.uniformity = uniformity
        self._edge_sets: tuple[frozenset[int], ...] = tuple(frozenset(e) for e in self.edges)
        self.component_of: dict[int, int] = self._index_components()

    def _index_components(self) -> dict[int, int]:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.edges:
            root = find(e[0])
            for v in e[1:]:
                parent[find(v)] = root
        # stable ids ordered by smallest vertex of each component
        roots: dict[int, list[int]] = {}
        for v in self.vertices:
            roots.setdefault(find(v), []).append(v)
        ordered = sorted(roots.values(), key=lambda vs: vs[0])
        return {v: cid for cid, vs in enumerate(ordered) for v in vs}

    @property
    def edge_sets(self) -> tuple[frozenset[int], ...]:
        return self._edge_sets

    def component_ids(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.component_of.values())))

    def component_vertices(self, cid: int) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if self.component_of[v] == cid)

    def component_edges(self, cid: int) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if self.component_of[e[0]] == cid)

    def induced(self, vertex_subset: Iterable[int]) -> "Hypergraph":
        keep = set(vertex_subset) & self._vertex_set
        edges = [e for e in self.edges if set(e) <= keep]
        return Hypergraph(keep, edges, self.uniformity)

    def to_json(self) -> str:
        return json.dumps(
            {
                "uniformity": self.uniformity,
                "vertices": list(self.vertices),
                "edges": [list(e) for e in self.edges],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        doc = json.loads(text)
        return cls(doc["vertices"], doc["edges"], int(doc["uniformity"]))

    def __repr__(self) -> str:
        return f"Hypergraph(|V|={len(self.vertices)}, |E|={len(self.edges)}, k={self.uniformity})"


class _PivotForm(NamedTuple):
    """x_pivot = (const + sum coef[f] * x_free[f]) / denom, exactly."""

    const: int
    coefs: tuple[int, ...]
    denom: int


def _solution_forms(system: RadoSystem) -> Optional[tuple[list[int], list[int], list[_PivotForm]]]:
    """RREF-derived integer pivot forms; None when Ax=b has no solutions."""
    augmented = [list(row) + [system.rhs[i]] for i, row in enumerate(system.entries)]
    reduced, pivots = rref(augmented)
    if system.cols in pivots:
        return None  # pivot in the rhs column: inconsistent
    free = [c for c in range(system.cols) if c not in pivots]
    forms = []
    for r, p in enumerate(pivots):
        const = reduced[r][system.cols]
        coefs = [-reduced[r][f] for f in free]
        denom = lcm(const.denominator, *(c.denominator for c in coefs)) if coefs else const.denominator
        forms.append(
            _PivotForm(
                int(const * denom),
                tuple(int(c * denom) for c in coefs),
                denom,
            )
        )
    return list(pivots), free, forms


def enumerate_solutions(system: RadoSystem, board: Board) -> Hypergraph:
    """All k-subsets of the board that solve Ax=b under some coordinate
    assignment.  Free coordinates range over the board; pivot coordinates are
    solved exactly and filtered for integrality, membership, and distinctness.
    """
    if rank_rational(system) < 1:
        raise ValueError("system must have rank at least 1")
    k = system.cols
    parametrization = _solution_forms(system)
    if parametrization is None:
        return Hypergraph(board.members, [], k)
    pivots, free, forms = parametrization
    members = board.members
    member_set = set(members)
    edges: set[Edge] = set()
    for assignment in permutations(members, len(free)):
        values = [0] * k
        ok = True
        for f_idx, f_col in enumerate(free):
            values[f_col] = assignment[f_idx]
        for (p_col, form) in zip(pivots, forms):
            num = form.const
            for c, v in zip(form.coefs, assignment):
                num += c * v
            if num % form.denom != 0:
                ok = False
                break
            v = num // form.denom
            if v not in member_set:
                ok = False
                break
            values[p_col] = v
        if ok and len(set(values)) == k:
            edges.add(tuple(sorted(values)))
    return Hypergraph(members, edges, k)


def components(h: Hypergraph) -> dict[int, int]:
    """Vertex -> component id; isolated vertices get singleton components."""
    return dict(h.component_of)


class MuResult(NamedTuple):
    mu: int
    witness: tuple[int, ...]


def compute_mu(system: RadoSystem, n: int, mode: str = "exact") -> MuResult:
    """Size of the largest subset of [1, n] containing no solution set.

    'exact' enumerates all subsets (guarded at n <= 24); 'branch_and_bound'
    runs an exact minimum-hitting-set search whose complement is the witness.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return MuResult(0, ())
    h = enumerate_solutions(system, Board.full(n))
    masks = [sum(1 << (v - 1) for v in e) for e in h.edges]
    if mode == "exact":
        if n > MU_EXACT_CAP:
            raise SizeCapError(f"exact mode enumerates subsets only up to n={MU_EXACT_CAP}")
        return _mu_exact(n, masks)
    if mode == "branch_and_bound":
        return _mu_branch_and_bound(n, masks)
    raise ValueError(f"unknown mode {mode!r}")


def _mu_exact(n: int, masks: list[int]) -> MuResult:
    best_size = -1
    best_mask = 0
    for mask in range(1 << n):
        size = mask.bit_count()
        if size <= best_size:
            continue
        if all(e & mask != e for e in masks):
            best_size = size
            best_mask = mask
    witness = tuple(v for v in range(1, n + 1) if best_mask >> (v - 1) & 1)
    return MuResult(best_size, witness)


def _mu_branch_and_bound(n: int, masks: list[int]) -> MuResult:
    edges = sorted(tuple(v for v in range(1, n + 1) if m >> (v - 1) & 1) for m in masks)
    if not edges:
        return MuResult(n, tuple(range(1, n + 1)))

    def greedy_hitting(remaining) -> set[int]:
        hit: set[int] = set()
        for e in remaining:
            if not any(v in hit for v in e):
                # hit the most frequent vertex of this edge
                counts = {}
                for f in remaining:
                    if not any(v in hit for v in f):
                        for v in f:
                            counts[v] = counts.get(v, 0) + 1
                hit.add(max(e, key=lambda v: (counts.get(v, 0), -v)))
        return hit

    def matching_bound(remaining) -> int:
        used: set[int] = set()
        count = 0
        for e in remaining:
            if not used.intersection(e):
                used.update(e)
                count += 1
        return count

    best = {"size": len(greedy_hitting(edges)), "set": greedy_hitting(edges)}

    def search(remaining, chosen: set[int]):
        if not remaining:
            if len(chosen) < best["size"]:
                best["size"] = len(chosen)
                best["set"] = set(chosen)
            return
        if len(chosen) + matching_bound(remaining) >= best["size"]:
            return
        e = remaining[0]
        for v in e:
            chosen.add(v)
            search([f for f in remaining[1:] if v not in f], chosen)
            chosen.discard(v)

    search(edges, set())
    witness = tuple(v for v in range(1, n + 1) if v not in best["set"])
    return MuResult(len(witness), witness)

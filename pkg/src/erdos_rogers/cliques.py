"""k-clique listing on sparse graphs given as adjacency sets."""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence


def adjacency(n: int, edges: Iterable[tuple[int, int]]) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _forward(adj: Sequence[set[int]], vertices: Iterable[int] | None):
    """Orient every edge from lower to higher (degree, id) rank.

    Each clique is then listed exactly once, from its lowest-ranked vertex,
    and the forward sets stay small on sparse graphs.
    """
    if vertices is None:
        keep = None
        vertices = range(len(adj))
    else:
        vertices = list(vertices)
        keep = set(vertices)
    nbrs = {v: adj[v] if keep is None else adj[v] & keep for v in vertices}
    rank = {v: (len(nbrs[v]), v) for v in vertices}
    return {v: {u for u in nbrs[v] if rank[u] > rank[v]} for v in nbrs}


def iter_cliques(adj: Sequence[set[int]], k: int, vertices: Iterable[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every k-clique once, as a sorted vertex tuple.

    Branch and bound: a branch is cut as soon as the current clique plus all
    remaining candidates cannot reach k vertices.
    """
    if k < 1:
        return
    fwd = _forward(adj, vertices)

    def grow(clique: list[int], cand: set[int]):
        if len(clique) == k:
            yield tuple(sorted(clique))
            return
        if len(clique) + len(cand) < k:
            return
        for v in list(cand):
            nxt = cand & fwd[v]
            if len(clique) + 1 + len(nxt) >= k or len(clique) + 1 == k:
                clique.append(v)
                yield from grow(clique, nxt)
                clique.pop()

    for v in fwd:
        if k == 1 or len(fwd[v]) >= k - 1:
            yield from grow([v], set(fwd[v]))


def has_clique(adj: Sequence[set[int]], k: int, vertices: Iterable[int] | None = None) -> bool:
    return next(iter_cliques(adj, k, vertices), None) is not None


def count_cliques(adj: Sequence[set[int]], k: int, vertices: Iterable[int] | None = None) -> int:
    return sum(1 for _ in iter_cliques(adj, k, vertices))

"""Slow reference implementations used to cross-check the fast paths.

Nothing here shares code with :mod:`erdos_rogers.schemes` enumeration,
canonical labelling or :mod:`erdos_rogers.cliques`; keep it that way.
"""
from __future__ import annotations

import itertools
from typing import Iterable


def brute_canonical_form(t: int, blocks: Iterable[Iterable[int]]) -> tuple:
    """Minimum over all t! node permutations of the sorted relabelled block list."""
    blocks = [tuple(b) for b in blocks]
    best = None
    for perm in itertools.permutations(range(t)):
        image = tuple(sorted(tuple(sorted(perm[v] for v in b)) for b in blocks))
        if best is None or image < best:
            best = image
    return best


def labelled_pair_partitions(s: int, t: int):
    """Every partition of the pairs of range(t) into cliques of size 2..s.

    Exact cover by recursion on the smallest uncovered pair: the block
    through that pair is any node set containing it whose pairs are all
    still uncovered.
    """
    all_pairs = list(itertools.combinations(range(t), 2))

    def extend(uncovered: frozenset, blocks: list):
        if not uncovered:
            yield tuple(blocks)
            return
        i, j = min(uncovered)
        others = [k for k in range(t) if k not in (i, j)]
        for size in range(0, s - 1):
            for extra in itertools.combinations(others, size):
                block = tuple(sorted((i, j) + extra))
                pairs = set(itertools.combinations(block, 2))
                if pairs <= uncovered:
                    yield from extend(uncovered - pairs, blocks + [block])

    yield from extend(frozenset(all_pairs), [])


def naive_scheme_classes(s: int, t: int) -> set:
    """Isomorphism classes of schemes, as brute-force canonical block lists."""
    return {brute_canonical_form(t, blocks) for blocks in labelled_pair_partitions(s, t)}


def naive_has_clique(adj: dict, k: int, vertices=None) -> bool:
    """Try every k-subset. Only for tiny graphs."""
    vertices = sorted(adj if vertices is None else vertices)
    for combo in itertools.combinations(vertices, k):
        if all(v in adj[u] for u, v in itertools.combinations(combo, 2)):
            return True
    return False


def naive_cliques(adj: dict, k: int) -> list[tuple[int, ...]]:
    vertices = sorted(adj)
    return [
        combo
        for combo in itertools.combinations(vertices, k)
        if all(v in adj[u] for u, v in itertools.combinations(combo, 2))
    ]

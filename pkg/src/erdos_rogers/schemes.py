"""Colour schemes, colour configurations, values, cores and enumeration.

A scheme on ``t`` nodes (labelled ``0..t-1``) is a decomposition of all node
pairs into blocks of size ``2..s``. Blocks of size two are stored explicitly
so that ``b`` (number of blocks) and ``l`` (number of labels) are always
well defined; enumeration and canonical labelling only look at the *large*
blocks (size >= 3) since the small ones are forced by them.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import BadSubset, MismatchedParameters, NodeOutOfRange, TooLarge
from .exponents import ExponentSet, classify_pair, fraction_str

__all__ = [
    "Scheme",
    "Configuration",
    "CoreResult",
    "ENUMERATION_CAP",
    "scheme_value",
    "config_value",
    "blockwise_value",
    "local_value",
    "local_values",
    "count_exponents",
    "induced_subconfiguration",
    "core",
    "canonical_form",
    "canonicalize",
    "enumerate_schemes",
    "q1",
    "q2",
    "all_pairs",
    "schemes_census_csv",
]

ENUMERATION_CAP = 9

Block = tuple[int, ...]


def _sorted_blocks(blocks: Iterable[Iterable[int]]) -> tuple[Block, ...]:
    out = []
    for b in blocks:
        b = tuple(b)
        if len(b) == 2:
            out.append(b if b[0] < b[1] else (b[1], b[0]))
        else:
            out.append(tuple(sorted(b)))
    return tuple(sorted(out))


@dataclass(frozen=True)
class Scheme:
    """A colour scheme for K_t with block-size cap ``s``.

    ``blocks`` must cover every pair of ``range(t)`` exactly once; the
    constructor checks this and stores the blocks in sorted order.
    """

    t: int
    s: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        blocks = _sorted_blocks(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if self.t < 2:
            raise ValueError(f"a scheme needs at least 2 nodes, got t={self.t}")
        # rows[v] is the bitmask of nodes already paired with v
        rows = [0] * self.t
        for block in blocks:
            if len(block) < 2:
                raise ValueError(f"block {block} has fewer than 2 nodes")
            if len(block) > self.s:
                raise ValueError(f"block {block} has more than s={self.s} nodes")
            if len(set(block)) != len(block) or block[0] < 0 or block[-1] >= self.t:
                raise ValueError(f"block {block} is not a subset of range({self.t})")
            mask = 0
            for v in block:
                mask |= 1 << v
            for v in block:
                if rows[v] & mask:
                    u = (rows[v] & mask).bit_length() - 1
                    raise ValueError(f"pair {tuple(sorted((u, v)))} lies in more than one block")
                rows[v] |= mask & ~(1 << v)
        full = (1 << self.t) - 1
        if any(row != full & ~(1 << v) for v, row in enumerate(rows)):
            raise ValueError("some pair of nodes is not covered by any block")

    @classmethod
    def from_large_blocks(cls, t: int, s: int, large: Iterable[Iterable[int]]) -> "Scheme":
        """Complete a family of pairwise almost-disjoint blocks with size-2 blocks.

        Only the large blocks are checked; the filler pairs are exactly the
        uncovered ones, so the full cover check is skipped.
        """
        large = _sorted_blocks(large)
        rows = [0] * t
        for block in large:
            if not 2 <= len(block) <= s or len(set(block)) != len(block) or block[0] < 0 or block[-1] >= t:
                raise ValueError(f"block {block} does not fit a scheme with t={t}, s={s}")
            mask = sum(1 << v for v in block)
            for v in block:
                if rows[v] & mask:
                    raise ValueError(f"block {block} shares a pair with an earlier block")
                rows[v] |= mask & ~(1 << v)
        small = [(u, v) for u in range(t) for v in range(u + 1, t) if not rows[u] >> v & 1]
        q = object.__new__(cls)
        object.__setattr__(q, "t", t)
        object.__setattr__(q, "s", s)
        object.__setattr__(q, "blocks", tuple(sorted(large + tuple(small))))
        return q

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def l(self) -> int:  # noqa: E743
        return sum(len(block) for block in self.blocks)

    @property
    def large_blocks(self) -> tuple[Block, ...]:
        return tuple(block for block in self.blocks if len(block) >= 3)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(sorted((len(b) for b in self.blocks), reverse=True))

    def as_configuration(self) -> "Configuration":
        return Configuration(tuple(range(self.t)), self.blocks)

    def relabel(self, perm: Sequence[int]) -> "Scheme":
        """Image of the scheme under node map ``i -> perm[i]``."""
        return Scheme(self.t, self.s, tuple(tuple(perm[v] for v in b) for b in self.blocks))

    def to_dict(self) -> dict:
        return {"t": self.t, "s": self.s, "blocks": [list(b) for b in self.blocks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Scheme":
        return cls(int(d["t"]), int(d["s"]), tuple(tuple(b) for b in d["blocks"]))

    @classmethod
    def from_json(cls, text: str) -> "Scheme":
        return cls.from_dict(json.loads(text))


def all_pairs(s: int, t: int) -> Scheme:
    """Every edge gets its own colour."""
    return Scheme.from_large_blocks(t, s, ())


def q1(s: int, t: int) -> Scheme:
    """One s-block, every remaining pair on its own colour."""
    return Scheme.from_large_blocks(t, s, [range(s)])


def q2(s: int, t: int) -> Scheme:
    """An s-block and a (t-s+1)-block meeting in one node, the rest pairs."""
    return Scheme.from_large_blocks(t, s, [range(s), range(s - 1, t)])


@dataclass(frozen=True)
class Configuration:
    """Nodes plus a multiset of colours, each colour labelling >= 2 nodes.

    Unlike a scheme, pairs may be uncovered or covered several times and
    there is no cap on colour sizes.
    """

    nodes: tuple[int, ...]
    colours: tuple[Block, ...]

    def __post_init__(self):
        nodes = tuple(sorted(set(self.nodes)))
        colours = _sorted_blocks(self.colours)
        node_set = set(nodes)
        for colour in colours:
            if len(set(colour)) < 2:
                raise ValueError(f"colour {colour} labels fewer than 2 nodes")
            if not node_set.issuperset(colour):
                raise ValueError(f"colour {colour} labels nodes outside the configuration")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "colours", colours)

    @property
    def h(self) -> int:
        return len(self.nodes)

    @property
    def b(self) -> int:
        return len(self.colours)

    @property
    def l(self) -> int:  # noqa: E743
        return sum(len(c) for c in self.colours)


@dataclass(frozen=True)
class CoreResult:
    node_subset: tuple[int, ...]
    induced_colours: tuple[Block, ...]
    value: Fraction

    @property
    def node_count(self) -> int:
        return len(self.node_subset)

    def edges(self) -> list[tuple[int, int]]:
        return list(itertools.combinations(self.node_subset, 2))


def _value(h: int, b: int, l: int, e: ExponentSet) -> Fraction:
    return h - 2 + (b - 1) * e.delta + (l - 2) * (e.alpha - 1)


def _check_params(q: Scheme, e: ExponentSet) -> None:
    if q.t != e.t or q.s != e.s:
        raise MismatchedParameters(
            f"scheme has (s, t) = ({q.s}, {q.t}) but exponents are for ({e.s}, {e.t})"
        )


def scheme_value(q: Scheme, e: ExponentSet) -> Fraction:
    """v(Q) = t - 2 + (b-1) delta + (l-2)(alpha-1)."""
    _check_params(q, e)
    return _value(q.t, q.b, q.l, e)


def config_value(w: Configuration, e: ExponentSet) -> Fraction:
    # applied literally, also for b = 0
    return _value(w.h, w.b, w.l, e)


def blockwise_value(q: Scheme, e: ExponentSet) -> Fraction:
    """Value as t + sum_D (delta + |D|(alpha-1)) - (delta + 2 alpha)."""
    _check_params(q, e)
    total = sum((e.delta + len(block) * (e.alpha - 1) for block in q.blocks), Fraction(0))
    return q.t + total - e.edge_exponent


def local_value(q: Scheme, node: int, e: ExponentSet) -> Fraction:
    """v(P) = 1 + sum over blocks D containing P of (delta/|D| + alpha - 1)."""
    if not 0 <= node < q.t:
        raise NodeOutOfRange(f"node {node} not in range({q.t})")
    return 1 + sum(
        (e.delta / len(block) + (e.alpha - 1) for block in q.blocks if node in block),
        Fraction(0),
    )


def local_values(q: Scheme, e: ExponentSet) -> list[Fraction]:
    return [local_value(q, node, e) for node in range(q.t)]


def count_exponents(q: Scheme, e: ExponentSet) -> tuple[Fraction, Fraction]:
    """Exponents of n in n^t m^b gamma^l and in its per-edge version (log factors dropped)."""
    _check_params(q, e)
    total = q.t + q.b * e.delta + q.l * (e.alpha - 1)
    return total, total - e.edge_exponent


def induced_subconfiguration(w: Configuration | Scheme, subset: Iterable[int]) -> Configuration:
    """Restrict to ``subset``, keeping colours that still label at least two nodes."""
    if isinstance(w, Scheme):
        w = w.as_configuration()
    subset = set(subset)
    if not subset.issubset(w.nodes):
        raise BadSubset(f"{sorted(subset - set(w.nodes))} are not nodes of the configuration")
    colours = []
    for colour in w.colours:
        kept = tuple(v for v in colour if v in subset)
        if len(kept) >= 2:
            colours.append(kept)
    return Configuration(tuple(subset), tuple(colours))


@lru_cache(maxsize=65536)
def _core_cached(t: int, blocks: tuple[Block, ...], alpha: Fraction, delta: Fraction):
    masks = [sum(1 << v for v in block) for block in blocks]
    best_key = None
    best_value = None
    for mask in range(1 << t):
        h = mask.bit_count()
        if h < 2:
            continue
        b = 0
        l = 0
        for bm in masks:
            k = (bm & mask).bit_count()
            if k >= 2:
                b += 1
                l += k
        value = h - 2 + (b - 1) * delta + (l - 2) * (alpha - 1)
        nodes = tuple(v for v in range(t) if mask >> v & 1)
        key = (value, -h, nodes)
        if best_key is None or key < best_key:
            best_key, best_value = key, value
    return best_key[2], best_value


def core(q: Scheme, e: ExponentSet) -> CoreResult:
    """Induced subconfiguration on >= 2 nodes of minimal value.

    Ties go to the larger node set, then to the lexicographically smallest
    sorted node list. Exhaustive over all subsets.
    """
    _check_params(q, e)
    nodes, value = _core_cached(q.t, q.blocks, e.alpha, e.delta)
    sub = induced_subconfiguration(q, nodes)
    return CoreResult(nodes, sub.colours, value)


# -- canonical labelling -------------------------------------------------------


def _refine(cells: list[list[int]], node_blocks: list[list[Block]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition of the nodes.

    Depends only on the cell indices, so it commutes with relabelling.
    """
    while True:
        where = {}
        for i, cell in enumerate(cells):
            for v in cell:
                where[v] = i

        def signature(v):
            return tuple(sorted(
                (len(block), tuple(sorted(where[u] for u in block if u != v)))
                for block in node_blocks[v]
            ))

        new_cells = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                groups.setdefault(signature(v), []).append(v)
            for sig in sorted(groups):
                new_cells.append(groups[sig])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


@lru_cache(maxsize=200000)
def _canonical_large(t: int, large: tuple[Block, ...]) -> tuple[tuple[Block, ...], tuple[int, ...]]:
    node_blocks: list[list[Block]] = [[] for _ in range(t)]
    for block in large:
        for v in block:
            node_blocks[v].append(block)

    best: list = [None, None]

    def leaf(cells):
        lab = [0] * t
        pos = 0
        for cell in cells:
            for v in cell:
                lab[v] = pos
                pos += 1
        image = tuple(sorted(tuple(sorted(lab[v] for v in b)) for b in large))
        if best[0] is None or image < best[0]:
            best[0], best[1] = image, tuple(lab)

    def search(cells):
        cells = _refine(cells, node_blocks)
        target = None
        for i, cell in enumerate(cells):
            # cells of nodes outside every large block are interchangeable
            if len(cell) > 1 and node_blocks[cell[0]]:
                target = i
                break
        if target is None:
            leaf(cells)
            return
        cell = cells[target]
        for v in cell:
            rest = [u for u in cell if u != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search([list(range(t))])
    return best[0], best[1]


def canonical_form(q: Scheme) -> tuple[int, int, tuple[Block, ...]]:
    """Isomorphism-invariant key: (t, s, canonically relabelled large blocks)."""
    image, _ = _canonical_large(q.t, q.large_blocks)
    return q.t, q.s, image


def canonicalize(q: Scheme) -> Scheme:
    """The canonical representative of the isomorphism class of ``q``."""
    _, perm = _canonical_large(q.t, q.large_blocks)
    return q.relabel(perm)


# -- enumeration ---------------------------------------------------------------


def _class_order(q: Scheme):
    return (len(q.large_blocks), q.block_sizes(), q.large_blocks)


def enumerate_schemes(s: int, t: int, cap: int = ENUMERATION_CAP) -> list[Scheme]:
    """One canonical representative per isomorphism class of schemes for K_t.

    Works level by level on the number of large blocks: every family with
    k+1 large blocks arises from some k-block class representative by adding
    one compatible block, so adding every compatible block to every
    representative and deduplicating by canonical form is exhaustive.
    """
    classify_pair(s, t)
    if t > cap:
        raise TooLarge(f"t={t} exceeds the enumeration cap {cap}")
    candidates = [
        (c, sum(1 << v for v in c))
        for k in range(3, min(s, t) + 1)
        for c in itertools.combinations(range(t), k)
    ]
    seen = {()}
    frontier: list[tuple[Block, ...]] = [()]
    found: list[tuple[Block, ...]] = [()]
    while frontier:
        nxt = []
        for family in frontier:
            fam_masks = [sum(1 << v for v in b) for b in family]
            for block, mask in candidates:
                if any((mask & fm).bit_count() > 1 for fm in fam_masks):
                    continue
                image, _ = _canonical_large(t, _sorted_blocks(family + (block,)))
                if image not in seen:
                    seen.add(image)
                    nxt.append(image)
        found.extend(nxt)
        frontier = nxt
    schemes = [Scheme.from_large_blocks(t, s, large) for large in found]
    return sorted(schemes, key=_class_order)


def schemes_census_csv(schemes: Sequence[Scheme], e: ExponentSet) -> str:
    """CSV rows: class id, b, l, value as p/q, large blocks."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["class_id", "b", "l", "value", "large_blocks"])
    for i, q in enumerate(schemes):
        writer.writerow([i, q.b, q.l, fraction_str(scheme_value(q, e)), json.dumps([list(b) for b in q.large_blocks])])
    return buf.getvalue()

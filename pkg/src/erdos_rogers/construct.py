"""The randomized construction G0 -> G1 -> G, with full provenance.

G0 is a union of m random complete s-partite graphs (the colour classes).
Type-1 deletion removes every edge whose endpoints share two or more
colours, giving G1. Type-2 deletion walks the G1 edges in a random birth
order and rejects an edge whenever it would complete the core of some K_t
of G1, giving the K_t-free graph G.
"""
from __future__ import annotations

import enum
import hashlib
import itertools
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .cliques import adjacency, has_clique, iter_cliques
from .errors import HashMismatch, IncompleteKtList, InvalidParams, WrongStage
from .exponents import ConstructionParams, ExponentSet, exponents
from .schemes import CoreResult, Scheme, core

__all__ = [
    "Stage",
    "ColourClass",
    "ColouredGraph",
    "EdgeProvenance",
    "KtRecord",
    "DeletionTrace",
    "PipelineResult",
    "sample_g0",
    "edge_provenance",
    "type1_filter",
    "find_kt",
    "type2_filter",
    "verify_ktfree",
    "cores_per_edge",
    "run_pipeline",
    "dump_graph",
    "load_graph",
    "graph_bytes",
    "write_trace",
    "read_trace",
    "replay",
    "replay_edges",
    "write_build",
]

Edge = tuple[int, int]

BIRTH_STREAM = 1


class Stage(enum.Enum):
    G0 = "G0"
    G1 = "G1"
    G = "G"


@dataclass(frozen=True)
class ColourClass:
    """Members of one colour and the part (1..s) each member sits in."""

    members: tuple[int, ...]
    parts: tuple[int, ...]

    def __post_init__(self):
        if len(self.members) != len(self.parts):
            raise InvalidParams("members and parts must have equal length")

    def part_of(self) -> dict[int, int]:
        return dict(zip(self.members, self.parts))


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class ColouredGraph:
    n: int
    s: int
    t: int
    classes: tuple[ColourClass, ...]
    stage: Stage
    edges: frozenset

    @property
    def m(self) -> int:
        return len(self.classes)

    def vertex_colours(self) -> list[set[int]]:
        colours: list[set[int]] = [set() for _ in range(self.n)]
        for i, cls in enumerate(self.classes):
            for v in cls.members:
                colours[v].add(i)
        return colours

    def adjacency(self) -> list[set[int]]:
        return adjacency(self.n, self.edges)

    def with_edges(self, edges: Iterable[Edge], stage: Stage) -> "ColouredGraph":
        return ColouredGraph(self.n, self.s, self.t, self.classes, stage, frozenset(edges))


@dataclass(frozen=True)
class EdgeProvenance:
    edge: Edge
    providing_colours: frozenset
    shared_colours: frozenset


def _pair_colours(classes: Sequence[ColourClass]):
    """Map each vertex pair sharing a colour to (shared colours, providing colours)."""
    shared: dict[Edge, list[int]] = defaultdict(list)
    providing: dict[Edge, list[int]] = defaultdict(list)
    for i, cls in enumerate(classes):
        order = sorted(zip(cls.members, cls.parts))
        for (u, pu), (v, pv) in itertools.combinations(order, 2):
            shared[(u, v)].append(i)
            if pu != pv:
                providing[(u, v)].append(i)
    return shared, providing


def edge_provenance(g: ColouredGraph) -> dict[Edge, EdgeProvenance]:
    """Provenance for every pair that shares at least one colour."""
    shared, providing = _pair_colours(g.classes)
    return {
        e: EdgeProvenance(e, frozenset(providing.get(e, ())), frozenset(cols))
        for e, cols in shared.items()
    }


def sample_g0(params: ConstructionParams, seed: int) -> ColouredGraph:
    """Draw the m colour classes and their random s-partitions.

    Each vertex joins each class independently with probability gamma and
    each member picks its part uniformly from 1..s, independently.
    """
    if not 0 <= params.gamma <= 1:
        raise InvalidParams(f"gamma must lie in [0, 1], got {params.gamma}")
    rng = np.random.default_rng(seed)
    n, m, s = params.n, params.m, params.s
    classes = []
    for _ in range(m):
        members = np.flatnonzero(rng.random(n) < params.gamma)
        parts = rng.integers(1, s + 1, size=len(members))
        classes.append(ColourClass(tuple(int(v) for v in members), tuple(int(p) for p in parts)))
    _, providing = _pair_colours(classes)
    return ColouredGraph(n, s, params.t, tuple(classes), Stage.G0, frozenset(providing))


@dataclass
class DeletionTrace:
    type1_removed: list = field(default_factory=list)  # (edge, shared colours)
    type2_removed: list = field(default_factory=list)  # (edge, KtRecord id)
    birthtimes: list = field(default_factory=list)  # G1 edges in birth order


def type1_filter(g0: ColouredGraph) -> tuple[ColouredGraph, DeletionTrace]:
    """Drop every G0 edge whose endpoints share two or more colours."""
    if g0.stage is not Stage.G0:
        raise WrongStage(f"type1_filter needs a G0 graph, got {g0.stage.value}")
    shared, providing = _pair_colours(g0.classes)
    trace = DeletionTrace()
    keep = []
    for e in sorted(providing):
        cols = shared[e]
        if len(cols) == 1:
            keep.append(e)
        else:
            trace.type1_removed.append((e, tuple(cols)))
    return g0.with_edges(keep, Stage.G1), trace


@dataclass(frozen=True)
class KtRecord:
    id: int
    vertices: tuple[int, ...]
    scheme: Scheme
    core: CoreResult
    core_edges: tuple[Edge, ...]
    block_colours: tuple[int, ...]  # colour index of each scheme block, same order


def _scheme_of_clique(clique: Sequence[int], colours: Sequence[set[int]], s: int, t: int):
    index = {v: i for i, v in enumerate(clique)}
    groups: dict[int, list[int]] = defaultdict(list)
    for c in set().union(*(colours[v] for v in clique)):
        members = [index[v] for v in clique if c in colours[v]]
        if len(members) >= 2:
            groups[c] = members
    # within G1 every clique pair shares exactly one colour, so these groups
    # partition the pairs; Scheme() re-checks it
    order = sorted(groups, key=lambda c: tuple(groups[c]))
    scheme = Scheme(t, s, tuple(tuple(groups[c]) for c in order))
    by_block = {tuple(groups[c]): c for c in order}
    return scheme, tuple(by_block[b] for b in scheme.blocks)


def find_kt(g1: ColouredGraph, t: int | None = None, e: ExponentSet | None = None) -> list[KtRecord]:
    """Every t-clique of G1, read as a colour scheme, with its core."""
    if g1.stage is not Stage.G1:
        raise WrongStage(f"find_kt needs a G1 graph, got {g1.stage.value}")
    t = g1.t if t is None else t
    e = exponents((g1.s, t)) if e is None else e
    colours = g1.vertex_colours()
    records = []
    for clique in sorted(iter_cliques(g1.adjacency(), t)):
        scheme, block_colours = _scheme_of_clique(clique, colours, g1.s, t)
        c = core(scheme, e)
        core_edges = tuple(_edge(clique[i], clique[j]) for i, j in c.edges())
        records.append(KtRecord(len(records), clique, scheme, c, core_edges, block_colours))
    return records


def _birth_order(edges: Sequence[Edge], seed: int) -> list[Edge]:
    rng = np.random.default_rng([seed, BIRTH_STREAM])
    perm = rng.permutation(len(edges))
    return [edges[i] for i in perm]


def type2_filter(g1: ColouredGraph, kts: Sequence[KtRecord], seed: int) -> tuple[ColouredGraph, DeletionTrace]:
    """Accept G1 edges in birth order unless an edge completes some core.

    Raises IncompleteKtList if the result still contains a K_t, which can only
    happen when ``kts`` misses some t-clique of ``g1``.
    """
    if g1.stage is not Stage.G1:
        raise WrongStage(f"type2_filter needs a G1 graph, got {g1.stage.value}")
    births = _birth_order(sorted(g1.edges), seed)
    containing: dict[Edge, list[int]] = defaultdict(list)
    for rec in kts:
        for e in rec.core_edges:
            containing[e].append(rec.id)
    need = {rec.id: len(rec.core_edges) for rec in kts}
    accepted_count = Counter()
    accepted = []
    trace = DeletionTrace(birthtimes=births)
    for e in births:
        blocker = next((r for r in containing.get(e, ()) if accepted_count[r] == need[r] - 1), None)
        if blocker is not None:
            trace.type2_removed.append((e, blocker))
            continue
        accepted.append(e)
        for r in containing.get(e, ()):
            accepted_count[r] += 1
    g = g1.with_edges(accepted, Stage.G)
    if has_clique(g.adjacency(), g.t):
        raise IncompleteKtList(f"a K_{g.t} survived Type-2 deletion; the K_t list was not exhaustive")
    return g, trace


def verify_ktfree(g: ColouredGraph, t: int | None = None) -> bool:
    """Independent check via networkx's maximal-clique enumeration."""
    t = g.t if t is None else t
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from(g.edges)
    return all(len(c) < t for c in nx.find_cliques(graph))


def cores_per_edge(g1: ColouredGraph, kts: Sequence[KtRecord]) -> dict[Edge, int]:
    """Number of K_t cores containing each G1 edge (zero for most)."""
    counts = dict.fromkeys(sorted(g1.edges), 0)
    for rec in kts:
        for e in rec.core_edges:
            counts[e] += 1
    return counts


@dataclass
class PipelineResult:
    params: ConstructionParams
    seed: int
    g0: ColouredGraph
    g1: ColouredGraph
    g: ColouredGraph
    kts: list
    trace: DeletionTrace


def run_pipeline(params: ConstructionParams, seed: int) -> PipelineResult:
    g0 = sample_g0(params, seed)
    g1, t1 = type1_filter(g0)
    kts = find_kt(g1, params.t)
    g, t2 = type2_filter(g1, kts, seed)
    trace = DeletionTrace(t1.type1_removed, t2.type2_removed, t2.birthtimes)
    return PipelineResult(params, seed, g0, g1, g, kts, trace)


# -- files ----------------------------------------------------------------------


def _graph_dict(g: ColouredGraph) -> dict:
    out = {
        "n": g.n,
        "s": g.s,
        "t": g.t,
        "stage": g.stage.value,
        "classes": [{"members": list(c.members), "parts": list(c.parts)} for c in g.classes],
    }
    if g.stage is not Stage.G0:
        out["edges"] = [list(e) for e in sorted(g.edges)]
    return out


def graph_bytes(g: ColouredGraph) -> bytes:
    """Deterministic serialization; identical graphs give identical bytes."""
    return (json.dumps(_graph_dict(g), sort_keys=True, separators=(",", ":")) + "\n").encode()


def dump_graph(g: ColouredGraph, path) -> None:
    Path(path).write_bytes(graph_bytes(g))


def graph_from_dict(d: dict) -> ColouredGraph:
    classes = tuple(ColourClass(tuple(c["members"]), tuple(c["parts"])) for c in d["classes"])
    stage = Stage(d["stage"])
    if "edges" in d:
        edges = frozenset(_edge(*e) for e in d["edges"])
    else:
        _, providing = _pair_colours(classes)
        edges = frozenset(providing)
    return ColouredGraph(int(d["n"]), int(d["s"]), int(d["t"]), classes, stage, edges)


def load_graph(path) -> ColouredGraph:
    return graph_from_dict(json.loads(Path(path).read_text()))


def _record_lines(trace: DeletionTrace) -> list[str]:
    lines = []
    for e, cols in trace.type1_removed:
        lines.append(json.dumps({"kind": "type1", "edge": list(e), "shared": list(cols)}, separators=(",", ":")))
    lines.append(json.dumps({"kind": "birthtimes", "order": [list(e) for e in trace.birthtimes]}, separators=(",", ":")))
    for e, rid in trace.type2_removed:
        lines.append(json.dumps({"kind": "type2", "edge": list(e), "kt": rid}, separators=(",", ":")))
    return lines


def _digest(lines: Iterable[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()


def write_trace(trace: DeletionTrace, g0: ColouredGraph, path, seed: int | None = None) -> None:
    """JSON lines: a header binding the trace to G0, then one record per line."""
    lines = _record_lines(trace)
    header = {
        "kind": "header",
        "g0_sha256": hashlib.sha256(graph_bytes(g0)).hexdigest(),
        "records_sha256": _digest(lines),
        "seed": seed,
    }
    Path(path).write_text("\n".join([json.dumps(header, sort_keys=True, separators=(",", ":"))] + lines) + "\n")


def read_trace(path) -> tuple[dict, DeletionTrace]:
    raw = Path(path).read_text().splitlines()
    header = json.loads(raw[0])
    lines = [line for line in raw[1:] if line]
    if header.get("kind") != "header" or _digest(lines) != header.get("records_sha256"):
        raise HashMismatch("trace records do not match the trace header digest")
    trace = DeletionTrace()
    for line in lines:
        rec = json.loads(line)
        if rec["kind"] == "type1":
            trace.type1_removed.append((tuple(rec["edge"]), tuple(rec["shared"])))
        elif rec["kind"] == "type2":
            trace.type2_removed.append((tuple(rec["edge"]), rec["kt"]))
        elif rec["kind"] == "birthtimes":
            trace.birthtimes = [tuple(e) for e in rec["order"]]
    return header, trace


def replay(trace_path, g0_path) -> ColouredGraph:
    """Rebuild G from G0 and a deletion trace.

    Raises HashMismatch when the trace was not produced from this G0 or has
    been altered, or when a recorded deletion does not fit the graph.
    """
    g0_raw = Path(g0_path).read_bytes()
    header, trace = read_trace(trace_path)
    if hashlib.sha256(g0_raw).hexdigest() != header["g0_sha256"]:
        raise HashMismatch("trace was recorded against a different G0")
    return replay_edges(graph_from_dict(json.loads(g0_raw)), trace)


def replay_edges(g0: ColouredGraph, trace: DeletionTrace) -> ColouredGraph:
    """Apply the recorded Type-1 then Type-2 removals to the edges of G0."""
    edges = set(g0.edges)
    for e, _ in trace.type1_removed:
        if e not in edges:
            raise HashMismatch(f"type-1 record removes {e}, which is not a G0 edge")
        edges.remove(e)
    for e, _ in trace.type2_removed:
        if e not in edges:
            raise HashMismatch(f"type-2 record removes {e}, which is not a G1 edge")
        edges.remove(e)
    return g0.with_edges(edges, Stage.G)


def write_build(result: PipelineResult, out_dir) -> dict[str, Path]:
    """Write g0.json, g1.json, g.json, trace.jsonl and config.json into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {name: out / name for name in ("g0.json", "g1.json", "g.json", "trace.jsonl", "config.json")}
    dump_graph(result.g0, paths["g0.json"])
    dump_graph(result.g1, paths["g1.json"])
    dump_graph(result.g, paths["g.json"])
    write_trace(result.trace, result.g0, paths["trace.jsonl"], seed=result.seed)
    config = {"params": result.params.to_dict(), "seed": result.seed}
    paths["config.json"].write_text(json.dumps(config, sort_keys=True, indent=2) + "\n")
    return paths

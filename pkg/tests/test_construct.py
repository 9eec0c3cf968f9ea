from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from erdos_rogers.construct import (
    Stage,
    cores_per_edge,
    dump_graph,
    edge_provenance,
    find_kt,
    graph_bytes,
    load_graph,
    read_trace,
    replay,
    run_pipeline,
    sample_g0,
    type1_filter,
    type2_filter,
    verify_ktfree,
    write_build,
    write_trace,
)
from erdos_rogers.errors import HashMismatch, IncompleteKtList, WrongStage
from erdos_rogers.exponents import ConstructionParams, exponents
from erdos_rogers.oracles import naive_cliques
from erdos_rogers.schemes import canonical_form, q2, scheme_value


def test_q2_fixture(q2_g0):
    g1, t1 = type1_filter(q2_g0)
    assert t1.type1_removed == [] and g1.edges == q2_g0.edges
    assert len(g1.edges) == 3 + 3 + 4 + 27
    assert not verify_ktfree(g1, 5)
    kts = find_kt(g1)
    assert len(kts) == 1
    rec = kts[0]
    assert rec.vertices == (0, 1, 2, 3, 4)
    assert canonical_form(rec.scheme) == canonical_form(q2(3, 5))
    assert rec.core.value == 0 and rec.core.node_count == 5
    assert sorted(rec.block_colours) == [0, 1, 2, 3, 4, 5]
    per_edge = cores_per_edge(g1, kts)
    assert sum(per_edge.values()) == 10 and max(per_edge.values()) == 1
    for seed in range(10):
        g, t2 = type2_filter(g1, kts, seed)
        assert len(t2.type2_removed) == 1
        removed = t2.type2_removed[0][0]
        assert removed in rec.core_edges
        # the rejected edge is the last of the core edges to be born
        order = [e for e in t2.birthtimes if e in rec.core_edges]
        assert order[-1] == removed
        assert verify_ktfree(g, 5) and len(g.edges) == len(g1.edges) - 1


def test_incomplete_list_detected(q2_g0):
    g1, _ = type1_filter(q2_g0)
    with pytest.raises(IncompleteKtList):
        type2_filter(g1, [], 0)


def test_stage_checks(q2_g0):
    with pytest.raises(WrongStage):
        find_kt(q2_g0)
    with pytest.raises(WrongStage):
        type2_filter(q2_g0, [], 0)
    g1, _ = type1_filter(q2_g0)
    with pytest.raises(WrongStage):
        type1_filter(g1)


def test_type1_removes_doubly_coloured_pairs():
    from erdos_rogers.construct import graph_from_dict

    g0 = graph_from_dict({"n": 4, "s": 2, "t": 4, "stage": "G0", "classes": [
        {"members": [0, 1, 2], "parts": [1, 2, 2]},
        {"members": [0, 1, 3], "parts": [1, 1, 2]},
    ]})
    # class 0 gives 01, 02; class 1 gives 03, 13; 01 is shared by both
    assert g0.edges == {(0, 1), (0, 2), (0, 3), (1, 3)}
    prov = edge_provenance(g0)
    assert prov[(0, 1)].shared_colours == {0, 1} and prov[(0, 1)].providing_colours == {0}
    g1, trace = type1_filter(g0)
    assert g1.edges == {(0, 2), (0, 3), (1, 3)}
    assert trace.type1_removed == [((0, 1), (0, 1))]


def test_sample_edge_cases():
    empty = sample_g0(ConstructionParams.direct(50, 5, 0.0, 3, 3, 5), 1)
    assert empty.edges == frozenset() and all(c.members == () for c in empty.classes)
    full = sample_g0(ConstructionParams.direct(12, 1, 1.0, 3, 3, 5), 1)
    parts = full.classes[0].part_of()
    assert len(full.classes[0].members) == 12
    assert full.edges == {(u, v) for u in range(12) for v in range(u + 1, 12) if parts[u] != parts[v]}
    assert set(parts.values()) <= {1, 2, 3}


def test_sampling_is_deterministic():
    p = ConstructionParams.direct(200, 30, 0.05, 10, 3, 5)
    assert graph_bytes(sample_g0(p, 7)) == graph_bytes(sample_g0(p, 7))
    assert graph_bytes(sample_g0(p, 7)) != graph_bytes(sample_g0(p, 8))


@st.composite
def small_params(draw):
    s = draw(st.integers(3, 4))
    t = draw(st.integers(s + 2, 2 * s - 1))
    n = draw(st.integers(t, 40))
    return ConstructionParams.direct(n, draw(st.integers(0, 40)), draw(st.floats(0.1, 0.6)), t, s, t)


@given(small_params(), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_pipeline_contract_small(params, seed):
    res = run_pipeline(params, seed)
    adj1 = {v: nb for v, nb in enumerate(res.g1.adjacency())}
    assert [r.vertices for r in res.kts] == naive_cliques(adj1, params.t)
    assert res.g.edges <= res.g1.edges <= res.g0.edges
    assert naive_cliques({v: nb for v, nb in enumerate(res.g.adjacency())}, params.t) == []
    assert verify_ktfree(res.g)
    e = exponents((params.s, params.t))
    for rec in res.kts:
        assert any(edge not in res.g.edges for edge in rec.core_edges)
        assert set(rec.core_edges) <= res.g1.edges
        assert rec.core.value <= scheme_value(rec.scheme, e)


def test_files_and_replay(tmp_path):
    p = ConstructionParams.direct(300, 60, 0.06, 10, 3, 5)
    res = run_pipeline(p, 3)
    assert res.kts, "fixture should contain at least one K5"
    paths = write_build(res, tmp_path)
    assert load_graph(paths["g.json"]).edges == res.g.edges
    assert load_graph(paths["g0.json"]).stage is Stage.G0
    g = replay(paths["trace.jsonl"], paths["g0.json"])
    assert graph_bytes(g) == paths["g.json"].read_bytes()
    header, trace = read_trace(paths["trace.jsonl"])
    assert header["seed"] == 3 and trace.type2_removed == res.trace.type2_removed
    config = json.loads(paths["config.json"].read_text())
    assert ConstructionParams.from_dict(config["params"]) == p


def test_empty_trace_on_edgeless_graph(tmp_path):
    res = run_pipeline(ConstructionParams.direct(20, 0, 0.0, 5, 3, 5), 1)
    write_trace(res.trace, res.g0, tmp_path / "t.jsonl")
    dump_graph(res.g0, tmp_path / "g0.json")
    g = replay(tmp_path / "t.jsonl", tmp_path / "g0.json")
    assert g.edges == frozenset() and g.n == 20


def test_tampering_is_detected(tmp_path):
    res = run_pipeline(ConstructionParams.direct(300, 60, 0.06, 10, 3, 5), 3)
    paths = write_build(res, tmp_path)
    lines = paths["trace.jsonl"].read_text().splitlines()
    lines.pop()  # drop one deletion record
    bad = tmp_path / "bad.jsonl"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(HashMismatch):
        replay(bad, paths["g0.json"])
    other = run_pipeline(ConstructionParams.direct(300, 60, 0.06, 10, 3, 5), 4)
    dump_graph(other.g0, tmp_path / "other.json")
    with pytest.raises(HashMismatch):
        replay(paths["trace.jsonl"], tmp_path / "other.json")

"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Each criterion is checked at its stated tolerance and time limit. Nothing is
relaxed to make a line green.
"""
from __future__ import annotations

import os
import random
import time
from decimal import Decimal
from fractions import Fraction

import pytest

from erdos_rogers.analyze import full_experiment
from erdos_rogers.construct import cores_per_edge, find_kt, type1_filter, type2_filter
from erdos_rogers.exponents import ConstructionParams, exponent_table, exponents
from erdos_rogers.oracles import brute_canonical_form, naive_scheme_classes
from erdos_rogers.schemes import (
    blockwise_value,
    canonical_form,
    core,
    enumerate_schemes,
    local_values,
    q2,
    scheme_value,
)
from erdos_rogers.verify import (
    localneg_casecheck,
    verify_app1,
    verify_app2,
    verify_claim2_large_t,
    verify_extremal,
    verify_negscheme,
)
from reference_casecheck import reference_loop
from scheme_gen import random_scheme, random_valid_pair

TABLE_ROWS = [
    ((3, 5), "0.462"),
    ((4, 6), "0.467"),
    ((4, 7), "0.457"),
    ((5, 7), "0.475"),
    ((5, 8), "0.465"),
    ((5, 9), "0.460"),
]


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, elapsed: float, limit: float, detail: str) -> None:
        within = elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        with capsys.disabled():
            print(f"\n[{status}] criterion {number}: {detail} ({elapsed:.2f}s, limit {limit:g}s)")
        assert within, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"
        assert ok, detail

    return emit


def test_criterion_1_exponent_exactness(report):
    start = time.perf_counter()
    e = exponents((3, 5))
    exact = (e.alpha, e.delta, e.eta) == (Fraction(6, 13), Fraction(9, 13), Fraction(5, 13))
    rows = exponent_table([pair for pair, _ in TABLE_ROWS])
    mismatches = [
        f"{pair}: computed {got} (alpha={exponents(pair).alpha}), table {want}"
        for ((pair, want), (_, _, got)) in zip(TABLE_ROWS, rows)
        if got != Decimal(want)
    ]
    closed_bad = []
    for s in range(4, 41):
        if exponents((s, s + 2)).alpha != Fraction(1, 2) - Fraction(s - 2, 8 * s * s - 18 * s + 8):
            closed_bad.append((s, s + 2))
        if s >= 11:
            plus3 = Fraction(3 * s * s - 3 * s - 3, 6 * s * s - 4 * s - 7)
        else:
            plus3 = Fraction(3 * s * s - 8 * s + 5, 6 * s * s - 14 * s + 6)
        if exponents((s, s + 3)).alpha != plus3:
            closed_bad.append((s, s + 3))
    ok = exact and not mismatches and not closed_bad
    detail = (
        f"(3,5) exact={exact}; table rows matched {len(TABLE_ROWS) - len(mismatches)}/6"
        + (f" [{'; '.join(mismatches)}]" if mismatches else "")
        + f"; closed forms t=s+2, s+3 mismatches {closed_bad or 'none'}"
    )
    report(1, ok, time.perf_counter() - start, 1, detail)


def test_criterion_2_lemma_extremal(report):
    start = time.perf_counter()
    r = verify_extremal(40)
    counts = r.details["pairs_checked"]
    report(2, r.ok, time.perf_counter() - start, 1,
           f"extremal s<=40 {r.status.value}: {counts['regular']} regular, {counts['exceptional']} exceptional, witnesses {r.witnesses[:3]}")


def test_criterion_3_negscheme(report):
    start = time.perf_counter()
    reports = {pair: verify_negscheme(*pair) for pair in [(3, 5), (4, 6), (4, 7)]}
    all_nonpos = all(r.ok for r in reports.values())
    r35 = reports[(3, 5)]
    zero = r35.details["value_zero"]
    q2_unique = r35.details["class_count"] == 3 and len(zero) == 1 and zero[0]["name"] == "Q2"
    oracle = {}
    for s, t in [(3, 5), (4, 6)]:
        fast = {brute_canonical_form(t, q.blocks) for q in enumerate_schemes(s, t)}
        oracle[(s, t)] = fast == naive_scheme_classes(s, t)
    ok = all_nonpos and q2_unique and all(oracle.values())
    counts = {f"{s},{t}": r.details["class_count"] for (s, t), r in reports.items()}
    report(3, ok, time.perf_counter() - start, 60,
           f"v<=0 on all classes {all_nonpos} (counts {counts}); (3,5) Q2 unique zero {q2_unique}; naive oracle agrees {oracle}")


def test_criterion_4_value_identities(report):
    start = time.perf_counter()
    pool = [q for pair in [(3, 5), (4, 6), (4, 7)] for q in enumerate_schemes(*pair)]
    rng = random.Random(20240601)
    for _ in range(1000):
        s, t = random_valid_pair(rng, 8)
        pool.append(random_scheme(rng, s, t))
    bad = []
    for q in pool:
        e = exponents((q.s, q.t))
        v = scheme_value(q, e)
        if blockwise_value(q, e) != v or sum(local_values(q, e)) != v + e.delta + 2 * e.alpha:
            bad.append(q)
    report(4, not bad, time.perf_counter() - start, 60,
           f"identities hold exactly on {len(pool) - len(bad)}/{len(pool)} schemes ({len(pool) - 1000} enumerated + 1000 random, t<=8)")


def test_criterion_5_casecheck_fidelity(report):
    start = time.perf_counter()
    exact = localneg_casecheck("exact", margin=Fraction(1, 1000))
    flt = localneg_casecheck("float")
    ref_pairs, ref_decisions = reference_loop()
    got = [(d["t"], d["s"], d["j"], d["branch"], d["bad"]) for d in flt.details["decisions"]]
    got_pairs = [(p["t"], p["s"], p["bad"]) for p in flt.details["per_pair"]]
    same = got == ref_decisions and got_pairs == ref_pairs
    ok = exact.ok and same
    report(5, ok, time.perf_counter() - start, 1,
           f"exact mode {exact.status.value} on {len(exact.details['per_pair'])} (t,s) pairs; float mode matches transliteration on {len(ref_decisions)} decisions: {same}")


def test_criterion_6_sweeps(report):
    start = time.perf_counter()
    a1 = verify_app1(40, 100)
    a2 = verify_app2(40)
    c2 = verify_claim2_large_t(14, 20)
    ok = a1.ok and a2.ok and c2.ok
    report(6, ok, time.perf_counter() - start, 10,
           f"app1 {a1.status.value} ({a1.details['cases_checked']} cases), app2 {a2.status.value} ({a2.details['pairs_checked']} pairs), claim2 {c2.status.value} ({c2.details['cases_checked']} cases)")


@pytest.fixture(scope="module")
def smoke_runs(smoke_config, tmp_path_factory):
    params = ConstructionParams.from_dict(smoke_config["params"])
    start = time.perf_counter()
    rep = full_experiment(
        params,
        smoke_config["seeds"],
        probe_trials=smoke_config["probe_trials"],
        threads=os.cpu_count() or 1,
        workdir=tmp_path_factory.mktemp("smoke"),
    )
    return rep, time.perf_counter() - start


def test_criterion_7_pipeline_contract(report, smoke_runs, smoke_config):
    rep, elapsed = smoke_runs
    failures = {}
    for run in rep.runs:
        bad = [k for k, v in run["contract"].items() if not v]
        if bad:
            failures[run["seed"]] = bad
    kts = sum(run["kt_count"] for run in rep.runs)
    report(7, not failures, elapsed, smoke_config["time_limit_seconds"],
           f"{len(rep.runs)} seeds at n={rep.params.n}, m={rep.params.m}, gamma={rep.params.gamma}: K5-free, "
           f"E(G)<=E(G1)<=E(G0), file replay byte-identical, every K5 lost a core edge; {kts} K5s handled; failures {failures or 'none'}")


def test_criterion_8_q2_fixture(report, q2_g0):
    start = time.perf_counter()
    g1, _ = type1_filter(q2_g0)
    kts = find_kt(g1)
    one = len(kts) == 1
    is_q2 = one and canonical_form(kts[0].scheme) == canonical_form(q2(3, 5))
    zero = one and kts[0].core.value == 0 and core(kts[0].scheme, exponents((3, 5))).value == 0
    g, trace = type2_filter(g1, kts, seed=0)
    removed_one = one and len(trace.type2_removed) == 1 and trace.type2_removed[0][0] in kts[0].core_edges
    counted = max(cores_per_edge(g1, kts).values()) == 1
    ok = one and is_q2 and zero and removed_one and counted
    report(8, ok, time.perf_counter() - start, 1,
           f"records={len(kts)}, scheme is Q2 {is_q2}, core value 0 {zero}, type-2 removed exactly one core edge {removed_one}")


def test_criterion_9_statistical_sanity(report, smoke_runs, smoke_config):
    rep, elapsed = smoke_runs
    t1_max = max(run["type1_fraction"] for run in rep.runs)
    factor = smoke_config["census_noise_factor"]
    over = []
    worst = 0.0
    for run in rep.runs:
        for row in run["census"]:
            if row["predicted"] > 0:
                worst = max(worst, row["observed"] / row["predicted"])
            if row["observed"] > factor * row["predicted"]:
                over.append((run["seed"], row["name"] or row["class_id"], row["observed"], row["predicted"]))
    probe = [run["probe"]["fraction"] for run in rep.runs]
    probe_min = min(probe)
    threshold = smoke_config["probe_threshold"]
    ok = t1_max < smoke_config["type1_max_fraction"] and not over and probe_min >= threshold
    report(9, ok, elapsed, smoke_config["time_limit_seconds"],
           f"type-1 removal max {t1_max:.4f} (< 0.5); census worst observed/predicted {worst:.2e} (<= {factor}), "
           f"overshoots {over or 'none'}; probe fraction mean {sum(probe) / len(probe):.3f}, min {probe_min:.3f} (fixture threshold {threshold})")

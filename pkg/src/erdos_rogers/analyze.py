"""Monte Carlo diagnostics on built graphs.

None of these functions mutate their graph arguments. All randomness comes
from explicit integer seeds; per-trial streams are derived from
``(seed, trial index)`` so results do not depend on scheduling.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .cliques import has_clique
from .construct import (
    ColouredGraph,
    KtRecord,
    cores_per_edge,
    graph_bytes,
    replay,
    replay_edges,
    run_pipeline,
    verify_ktfree,
    write_build,
)
from .errors import BadSize, EmptySubset
from .exponents import ConstructionParams, ExponentSet, exponents
from .schemes import ENUMERATION_CAP, canonical_form, enumerate_schemes, q1, q2

__all__ = [
    "subset_ks_probe",
    "random_subset",
    "monochromatic_ks_census",
    "multicolour_pair_density",
    "scheme_census",
    "CensusRow",
    "run_summary",
    "ExperimentReport",
    "full_experiment",
]

PROBE_STREAM = 2
SUBSET_STREAM = 3


def random_subset(n: int, a: int, rng: np.random.Generator) -> list[int]:
    return sorted(int(v) for v in rng.choice(n, size=a, replace=False))


def subset_ks_probe(g: ColouredGraph, a: int, trials: int, s: int, seed: int) -> tuple[int, int]:
    """Sample ``trials`` uniform a-subsets and count those inducing a K_s."""
    if not 1 <= a <= g.n:
        raise BadSize(f"subset size a={a} must lie in 1..{g.n}")
    if trials <= 0:
        return 0, 0
    adj = g.adjacency()
    if a == g.n:
        hit = has_clique(adj, s)
        return (trials if hit else 0), trials
    successes = 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, PROBE_STREAM, trial])
        if has_clique(adj, s, random_subset(g.n, a, rng)):
            successes += 1
    return successes, trials


def _transversal_cliques(parts: list[list[int]], adj, limit: int | None):
    """Count choices of one vertex per part forming a clique (stop at ``limit``)."""
    found = 0

    def pick(i: int, chosen: list[int]):
        nonlocal found
        if limit is not None and found >= limit:
            return
        if i == len(parts):
            found += 1
            return
        for v in parts[i]:
            if all(v in adj[u] for u in chosen):
                chosen.append(v)
                pick(i + 1, chosen)
                chosen.pop()

    pick(0, [])
    return found


def monochromatic_ks_census(g1: ColouredGraph, subset: Iterable[int], s: int, multiplicities: bool = False):
    """Colours that give an all-one-colour K_s inside ``subset``.

    A colour counts when ``s`` vertices of the subset lie in its ``s``
    distinct parts and all the edges between them survive in ``g1``.
    Returns the number of such colours, or with ``multiplicities=True`` a
    dict colour -> number of such copies.
    """
    subset = set(subset)
    if len(subset) < s:
        return {} if multiplicities else 0
    adj = g1.adjacency()
    copies = {}
    for i, cls in enumerate(g1.classes):
        groups: dict[int, list[int]] = {}
        for v, p in zip(cls.members, cls.parts):
            if v in subset:
                groups.setdefault(p, []).append(v)
        if len(groups) < s:
            continue
        parts = [groups[p] for p in sorted(groups)]
        total = 0
        for combo in itertools.combinations(parts, s):
            total += _transversal_cliques(list(combo), adj, None if multiplicities else 1)
            if total and not multiplicities:
                break
        if total:
            copies[i] = total
    return copies if multiplicities else len(copies)


def multicolour_pair_density(g: ColouredGraph, subset: Iterable[int]) -> float:
    """Fraction of pairs of ``subset`` whose endpoints share two or more colours."""
    subset = set(subset)
    if len(subset) < 2:
        raise EmptySubset("need at least two vertices")
    counts: Counter = Counter()
    for cls in g.classes:
        inside = sorted(v for v in cls.members if v in subset)
        counts.update(itertools.combinations(inside, 2))
    multi = sum(1 for c in counts.values() if c >= 2)
    return multi / math.comb(len(subset), 2)


@dataclass
class CensusRow:
    class_id: int
    name: str
    large_blocks: list
    b: int
    l: int  # noqa: E741
    observed: int
    predicted: float

    @property
    def ratio(self) -> float:
        return self.observed / self.predicted if self.predicted > 0 else math.nan

    def to_dict(self) -> dict:
        return {
            "class_id": self.class_id,
            "name": self.name,
            "large_blocks": self.large_blocks,
            "b": self.b,
            "l": self.l,
            "observed": self.observed,
            "predicted": self.predicted,
            "ratio": self.ratio,
        }


def _predicted(n: int, m: int, gamma: float, t: int, b: int, l: int) -> float:
    if m == 0 or gamma == 0:
        return 0.0
    return math.exp(t * math.log(n) + b * math.log(m) + l * math.log(gamma))


def scheme_census(kts: Sequence[KtRecord], e: ExponentSet, params: ConstructionParams) -> list[CensusRow]:
    """Observed K_t count per scheme class against the upper bound n^t m^b gamma^l.

    The prediction uses the run's actual m and gamma. Rows follow the
    ``enumerate_schemes`` class order when t is within the enumeration cap;
    otherwise only classes that were observed get a row.
    """
    s, t = e.s, e.t
    observed = Counter(canonical_form(rec.scheme) for rec in kts)
    if t <= ENUMERATION_CAP:
        classes = enumerate_schemes(s, t)
    else:
        classes = []
    known = {canonical_form(q) for q in classes}
    extra = {rec.scheme for rec in kts if canonical_form(rec.scheme) not in known}
    seen = set()
    for q in sorted(extra, key=lambda q: canonical_form(q)):
        if canonical_form(q) not in seen:
            seen.add(canonical_form(q))
            classes.append(q)
    names = {canonical_form(q1(s, t)): "Q1", canonical_form(q2(s, t)): "Q2"}
    rows = []
    for i, q in enumerate(classes):
        key = canonical_form(q)
        name = names.get(key, "all_pairs" if not q.large_blocks else "")
        rows.append(CensusRow(
            i, name, [list(b) for b in q.large_blocks], q.b, q.l, observed.get(key, 0),
            _predicted(params.n, params.m, params.gamma, t, q.b, q.l),
        ))
    return rows


def run_summary(params: ConstructionParams, seed: int, probe_trials: int = 20, workdir=None) -> dict:
    """One full pipeline run plus every diagnostic, as a flat-ish dict.

    With ``workdir`` the build files go to ``workdir/seed-<seed>`` and the
    replay check reads them back from disk instead of replaying in memory.
    """
    start = time.perf_counter()
    res = run_pipeline(params, seed)
    e = exponents((params.s, params.t))
    g0, g1, g = res.g0, res.g1, res.g
    rng = np.random.default_rng([seed, SUBSET_STREAM])
    subset = random_subset(params.n, params.a, rng)
    mono = monochromatic_ks_census(g1, subset, params.s)
    benchmark = params.m * params.a**params.s * params.gamma**params.s
    successes, trials = subset_ks_probe(g, params.a, probe_trials, params.s, seed)
    per_edge = cores_per_edge(g1, res.kts)
    census = scheme_census(res.kts, e, params)
    if workdir is None:
        replayed = replay_edges(g0, res.trace)
    else:
        paths = write_build(res, Path(workdir) / f"seed-{seed}")
        replayed = replay(paths["trace.jsonl"], paths["g0.json"])
    cores_missing = all(any(ce not in g.edges for ce in rec.core_edges) for rec in res.kts)
    n_g0, n_g1 = len(g0.edges), len(g1.edges)
    return {
        "seed": seed,
        "edges": {"G0": n_g0, "G1": n_g1, "G": len(g.edges)},
        "type1_fraction": len(res.trace.type1_removed) / n_g0 if n_g0 else 0.0,
        "type2_fraction": len(res.trace.type2_removed) / n_g1 if n_g1 else 0.0,
        "kt_count": len(res.kts),
        "census": [row.to_dict() for row in census],
        "probe": {"trials": trials, "successes": successes, "fraction": successes / trials if trials else 0.0},
        "monochromatic_ks": {"count": mono, "benchmark": benchmark, "ratio": mono / benchmark if benchmark else math.nan},
        "multicolour_pair_density": multicolour_pair_density(g, subset) if len(subset) >= 2 else 0.0,
        "inverse_log_n": 1 / math.log(params.n) if params.n > 1 else math.nan,
        "cores_per_edge_max": max(per_edge.values(), default=0),
        "log_n_power_2t": math.log(params.n) ** (2 * params.t) if params.n > 1 else math.nan,
        "contract": {
            "kt_free": verify_ktfree(g, params.t),
            "g_subset_g1": g.edges <= g1.edges,
            "g1_subset_g0": g1.edges <= g0.edges,
            "replay_matches": graph_bytes(replayed) == graph_bytes(g),
            "every_kt_loses_core_edge": cores_missing,
        },
        "wall_time": time.perf_counter() - start,
    }


SCALARS = (
    ("edges_G0", lambda r: r["edges"]["G0"]),
    ("edges_G1", lambda r: r["edges"]["G1"]),
    ("edges_G", lambda r: r["edges"]["G"]),
    ("type1_fraction", lambda r: r["type1_fraction"]),
    ("type2_fraction", lambda r: r["type2_fraction"]),
    ("kt_count", lambda r: r["kt_count"]),
    ("probe_fraction", lambda r: r["probe"]["fraction"]),
    ("monochromatic_ks", lambda r: r["monochromatic_ks"]["count"]),
    ("multicolour_pair_density", lambda r: r["multicolour_pair_density"]),
    ("cores_per_edge_max", lambda r: r["cores_per_edge_max"]),
    ("wall_time", lambda r: r["wall_time"]),
)


@dataclass
class ExperimentReport:
    params: ConstructionParams
    seeds: list
    runs: list = field(default_factory=list)

    def aggregate(self) -> dict:
        out = {}
        for name, get in SCALARS:
            values = [get(r) for r in self.runs]
            if values:
                out[name] = {"mean": float(np.mean(values)), "min": min(values), "max": max(values)}
        census: dict[int, dict] = {}
        for r in self.runs:
            for row in r["census"]:
                entry = census.setdefault(row["class_id"], {**{k: row[k] for k in ("class_id", "name", "large_blocks", "b", "l")}, "observed": [], "predicted": row["predicted"]})
                entry["observed"].append(row["observed"])
        for entry in census.values():
            obs = entry.pop("observed")
            entry["observed_mean"] = float(np.mean(obs))
            entry["observed_max"] = max(obs)
        out["census"] = [census[k] for k in sorted(census)]
        out["contract_ok"] = all(all(r["contract"].values()) for r in self.runs)
        return out

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "seeds": list(self.seeds), "runs": self.runs, "aggregate": self.aggregate()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["seed"] + [name for name, _ in SCALARS] + ["contract_ok"])
        for r in self.runs:
            writer.writerow([r["seed"]] + [get(r) for _, get in SCALARS] + [all(r["contract"].values())])
        return buf.getvalue()


def _summary_job(job):
    params, seed, trials, workdir = job
    return run_summary(params, seed, trials, workdir)


def full_experiment(
    params: ConstructionParams,
    seeds: Sequence[int],
    probe_trials: int = 20,
    threads: int = 1,
    workdir=None,
) -> ExperimentReport:
    """Run the whole pipeline for every seed and collect the diagnostics.

    With ``threads > 1`` seeds run in worker processes; the report is the
    same either way since each run depends only on its seed.
    """
    jobs = [(params, seed, probe_trials, workdir) for seed in seeds]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(_summary_job, jobs))
    else:
        runs = [_summary_job(job) for job in jobs]
    return ExperimentReport(params, list(seeds), runs)

"""Machine checks of the finite, exactly decidable statements behind the bound.

Every check returns a :class:`LemmaReport`. A failed report always carries
at least one concrete witness tuple; nothing is suppressed.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .exponents import ExponentSet, classify_pair, exponents, fraction_str, valid_pairs
from .schemes import (
    ENUMERATION_CAP,
    canonical_form,
    core,
    enumerate_schemes,
    q1,
    q2,
    scheme_value,
)

__all__ = [
    "Status",
    "LemmaReport",
    "verify_extremal",
    "verify_negscheme",
    "verify_app1",
    "verify_app2",
    "localneg_casecheck",
    "claim2_tuples",
    "verify_claim2_large_t",
    "run_all",
]


class Status(enum.Enum):
    VERIFIED = "verified"
    FAILED = "failed"


@dataclass
class LemmaReport:
    lemma: str
    range: str
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> Status:
        return Status.FAILED if self.witnesses else Status.VERIFIED

    @property
    def ok(self) -> bool:
        return self.status is Status.VERIFIED

    def to_dict(self) -> dict:
        out = {"lemma": self.lemma, "range": self.range, "status": self.status.value}
        out["witnesses"] = [list(w) if isinstance(w, tuple) else w for w in self.witnesses]
        out.update(self.details)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), default=str)


def verify_extremal(s_max: int) -> LemmaReport:
    """v(Q1) = 0 for regular pairs, v(Q2) = 0 for exceptional ones, and the cross inequalities."""
    report = LemmaReport("extremal", f"3 <= s <= {s_max}, s+2 <= t <= 2s-1")
    counts = {"regular": 0, "exceptional": 0}
    for pair in valid_pairs(s_max):
        e = exponents(pair)
        v1 = scheme_value(q1(pair.s, pair.t), e)
        v2 = scheme_value(q2(pair.s, pair.t), e)
        if pair.regular:
            counts["regular"] += 1
            if v1 != 0:
                report.witnesses.append((pair.s, pair.t, "a", fraction_str(v1)))
            if v2 > 0:
                report.witnesses.append((pair.s, pair.t, "c", fraction_str(v2)))
        else:
            counts["exceptional"] += 1
            if v2 != 0:
                report.witnesses.append((pair.s, pair.t, "b", fraction_str(v2)))
            if v1 > 0:
                report.witnesses.append((pair.s, pair.t, "d", fraction_str(v1)))
    report.details["pairs_checked"] = counts
    return report


def _class_name(q, named: dict) -> str:
    return named.get(canonical_form(q), "")


def verify_negscheme(s: int, t: int, cap: int = ENUMERATION_CAP) -> LemmaReport:
    """Every scheme class for (s, t) has value <= 0; reports all maximizers.

    Also reports, without asserting it, whether each class is its own core.
    """
    pair = classify_pair(s, t)
    e = exponents(pair)
    classes = enumerate_schemes(s, t, cap=cap)
    named = {canonical_form(q1(s, t)): "Q1", canonical_form(q2(s, t)): "Q2"}
    report = LemmaReport("negscheme", f"({s},{t})")
    values = [scheme_value(q, e) for q in classes]
    best = max(values)
    maximizers = []
    rows = []
    core_not_whole = []
    for i, (q, v) in enumerate(zip(classes, values)):
        if v > 0:
            report.witnesses.append((s, t, i, fraction_str(v)))
        entry = {
            "class_id": i,
            "name": _class_name(q, named),
            "large_blocks": [list(b) for b in q.large_blocks],
            "b": q.b,
            "l": q.l,
            "value": fraction_str(v),
        }
        rows.append(entry)
        if v == best:
            maximizers.append(entry)
        c = core(q, e)
        if c.node_count != t:
            core_not_whole.append({"class_id": i, "core_nodes": list(c.node_subset), "core_value": fraction_str(c.value)})
    report.details.update(
        regular=pair.regular,
        class_count=len(classes),
        max_value=fraction_str(best),
        maximizers=maximizers,
        value_zero=[r for r, v in zip(rows, values) if v == 0],
        core_not_whole=core_not_whole,
        classes=rows,
    )
    return report


def _app1_lhs_gt_rhs(e: ExponentSet, k: int) -> bool:
    return comb(k, 2) * (e.delta + 2 * (e.alpha - 1)) > e.delta + k * (e.alpha - 1)


def verify_app1(s_max: int, k_max: int) -> LemmaReport:
    """For all valid pairs with s <= s_max and 2 < k <= k_max the two sides agree."""
    report = LemmaReport("app1", f"3 <= s <= {s_max}, 3 <= k <= {k_max}")
    checked = 0
    for pair in valid_pairs(s_max):
        e = exponents(pair)
        for k in range(3, k_max + 1):
            checked += 1
            if _app1_lhs_gt_rhs(e, k) != (k * e.eta < e.delta):
                report.witnesses.append((pair.s, pair.t, k))
    report.details["cases_checked"] = checked
    return report


def app2_parts(e: ExponentSet) -> dict[str, bool]:
    """Truth of each of the six statements, evaluated as originally stated."""
    s, t = e.s, e.t
    a, d, eta = e.alpha, e.delta, e.eta
    half = Fraction(t - 1, 2)
    return {
        "a": ((t - s + 1) * eta < d) == e.pair.regular,
        "b": t == 2 * s - 1 or (t - s) * eta < d,
        "c": (t - s - 1) * eta < d,
        "d": (t - 1) * eta > 2 * d,
        "e": d > Fraction(2, 3),
        "f": 1 + 2 * (d / half + (a - 1)) - eta < 2 * d / t,
    }


def verify_app2(s_max: int) -> LemmaReport:
    report = LemmaReport("app2", f"3 <= s <= {s_max}, parts a-f")
    checked = 0
    for pair in valid_pairs(s_max):
        checked += 1
        for part, holds in app2_parts(exponents(pair)).items():
            if not holds:
                report.witnesses.append((pair.s, pair.t, part))
    report.details["pairs_checked"] = checked
    return report


def localneg_casecheck(mode: str = "exact", margin=Fraction(1, 1000)) -> LemmaReport:
    """The small-t case check for the local value bound, t = 5..13.

    ``mode="exact"`` runs on Fractions with the margin as an exact rational;
    ``mode="float"`` reproduces the double-precision original, margins and
    all. The decision list records, per (t, s, j, branch), whether the
    evaluated local value was flagged as bad.
    """
    if mode not in ("exact", "float"):
        raise ValueError(f"mode must be 'exact' or 'float', got {mode!r}")
    exact = mode == "exact"
    report = LemmaReport("localneg", "5 <= t <= 13, floor(t/2)+1 <= s <= t-2, 0 <= j <= 4")
    decisions = []
    per_pair = []
    for t in range(5, 14):
        for s in range(t // 2 + 1, t - 1):
            if exact:
                alpha = Fraction((s - 2) * (t - s) * (s - 1) + s - 1, (2 * s - 3) * (t - s) * (s - 1) + 2 * s - t)
                tol = Fraction(margin)
            else:
                alpha = ((s - 2) * (t - s) * (s - 1) + s - 1) / ((2 * s - 3) * (t - s) * (s - 1) + 2 * s - t)
                tol = 10 ** (-3) if margin == Fraction(1, 1000) else float(margin)
            delta = s - (2 * s - 1) * alpha
            bad = 0
            R = (t - 1) // 2
            for j in range(5):
                a = (t - 1) - j * (R - 1)
                if 0 <= a:
                    half = Fraction(delta, 2) if exact else delta / 2
                    v = 1 + a * (half + alpha - 1) + j * (delta / R + alpha - 1)
                    flag = v > 2 * delta / t - tol
                    bad |= flag
                    decisions.append({"t": t, "s": s, "j": j, "branch": 1, "a": a, "v": v, "bad": bool(flag)})
                if 2 <= a + 1 <= R:
                    v = 1 + (delta / (a + 1) + alpha - 1) + j * (delta / R + alpha - 1)
                    flag = v > 2 * delta / t - tol
                    bad |= flag
                    decisions.append({"t": t, "s": s, "j": j, "branch": 2, "a": a, "v": v, "bad": bool(flag)})
            per_pair.append({"t": t, "s": s, "bad": int(bad)})
            if bad:
                report.witnesses.append((t, s))
    report.details.update(mode=mode, per_pair=per_pair, decisions=decisions)
    return report


def claim2_tuples(t: int) -> list[tuple[int, ...]]:
    """All multisets (q_1..q_w), w >= 1, with 2 <= q_j <= R, sum q_j = t + w - 1,
    and either every q_j in {2, R} or all but at most one q_j equal to R.
    Returned sorted in decreasing order; R = floor((t-1)/2).
    """
    R = (t - 1) // 2
    out = set()
    if R < 2:
        return []
    step = R - 1
    for y in range(0, (t - 1) // step + 1):
        rest = t - 1 - y * step
        if rest < 0:
            continue
        # every q in {2, R}: the rest is made of 2s
        out.add(tuple([R] * y + [2] * rest))
        # all but at most one equal R
        if rest == 0:
            out.add(tuple([R] * y))
        elif 1 <= rest <= R - 1:
            out.add(tuple(sorted([R] * y + [rest + 1], reverse=True)))
    return sorted(q for q in out if q)


def verify_claim2_large_t(t_min: int, t_max: int) -> LemmaReport:
    """1 + sum_j (delta/q_j + alpha - 1) < 2 delta / t for every admissible tuple."""
    if t_min < 14 or t_max < t_min:
        raise ValueError("need 14 <= t_min <= t_max")
    report = LemmaReport("claim2", f"{t_min} <= t <= {t_max}")
    checked = 0
    for t in range(t_min, t_max + 1):
        tuples = claim2_tuples(t)
        for s in range(math.ceil((t + 1) / 2), t - 1):
            e = exponents(classify_pair(s, t))
            bound = 2 * e.delta / t
            for qs in tuples:
                checked += 1
                v = 1 + sum((e.delta / q + (e.alpha - 1) for q in qs), Fraction(0))
                if not v < bound:
                    report.witnesses.append((s, t, qs))
    report.details["cases_checked"] = checked
    return report


def run_all(s_max: int = 40, k_max: int = 100) -> list[LemmaReport]:
    reports = [
        verify_extremal(s_max),
        verify_app1(s_max, k_max),
        verify_app2(s_max),
        localneg_casecheck("exact"),
        localneg_casecheck("float"),
        verify_claim2_large_t(14, 20),
    ]
    reports += [verify_negscheme(s, t) for s, t in [(3, 5), (4, 6), (4, 7)]]
    return reports

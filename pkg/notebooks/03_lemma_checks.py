"""Run every finite check and print a one-line status for each.

Run: python3 notebooks/03_lemma_checks.py
"""
from __future__ import annotations

from erdos_rogers.verify import run_all

for r in run_all(s_max=40, k_max=100):
    extra = {k: v for k, v in r.details.items() if k in ("pairs_checked", "cases_checked", "class_count", "mode")}
    print(f"{r.lemma:10s} {r.status.value:8s} {r.range}  {extra}")

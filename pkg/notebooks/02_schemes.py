"""Colour schemes: values, local values, cores and the isomorphism census.

Run: python3 notebooks/02_schemes.py
"""
from __future__ import annotations

from erdos_rogers import core, enumerate_schemes, exponents, scheme_value
from erdos_rogers.schemes import local_values, q1, q2

e = exponents((3, 5))
for name, q in [("Q1", q1(3, 5)), ("Q2", q2(3, 5))]:
    print(f"{name}: b={q.b} l={q.l} v={scheme_value(q, e)} local={[str(x) for x in local_values(q, e)]}")

# The three classes of K5 schemes with blocks of size <= 3. Only Q2 reaches 0.
for i, q in enumerate(enumerate_schemes(3, 5)):
    c = core(q, e)
    print(f"class {i}: large blocks {q.large_blocks}, v={scheme_value(q, e)}, core on {c.node_count} nodes")

for s, t in [(4, 6), (4, 7), (5, 8)]:
    classes = enumerate_schemes(s, t)
    ex = exponents((s, t))
    best = max(scheme_value(q, ex) for q in classes)
    print(f"({s},{t}): {len(classes)} classes, max value {best}")

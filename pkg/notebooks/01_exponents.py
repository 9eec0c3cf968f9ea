"""Exact exponents for each admissible pair (s, t).

Run: python3 notebooks/01_exponents.py
"""
from __future__ import annotations

from erdos_rogers import classify_pair, exponent_table, exponents

# (3, 5) is exceptional: the extremal scheme is two triangles sharing a vertex.
e = exponents((3, 5))
print(f"(3,5): alpha={e.alpha} delta={e.delta} eta={e.eta} regular={e.pair.regular}")

# Every exponent is an exact rational; the table rounds half away from zero.
for s, t, alpha in exponent_table([(3, 5), (4, 6), (4, 7), (5, 7), (5, 8), (5, 9)]):
    print(f"  alpha({s},{t}) = {exponents((s, t)).alpha} ~ {alpha}")

# Regular pairs only appear from s = 10 on.
print("regular pairs with s <= 12:",
      [(s, t) for s in range(3, 13) for t in range(s + 2, 2 * s) if classify_pair(s, t).regular])

"""Independent reference for the small-t local value case check."""
from __future__ import annotations

import math


def reference_loop():
    """Line-by-line transliteration of the original case-check loop (doubles)."""
    out = []
    decisions = []
    for t in range(5, 14):
        for s in range(math.floor(t / 2) + 1, t - 2 + 1):
            alpha = ((s - 2) * (t - s) * (s - 1) + s - 1) / ((2 * s - 3) * (t - s) * (s - 1) + 2 * s - t)
            delta = s - (2 * s - 1) * alpha
            eta = 2 * (1 - alpha) - delta  # noqa: F841  unused in the original as well
            bad = 0
            R = math.floor((t - 1) / 2)
            for j in range(0, 5):
                a = (t - 1) - j * (R - 1)
                if 0 <= a:
                    v = 1 + a * (delta / 2 + alpha - 1) + j * (delta / R + alpha - 1)
                    flag = v > 2 * delta / (t) - 10 ** (-3)
                    if flag:
                        bad = 1
                    decisions.append((t, s, j, 1, flag))
                if (2 <= a + 1) and (a + 1 <= R):
                    v = 1 + (delta / (a + 1) + alpha - 1) + j * (delta / R + alpha - 1)
                    flag = v > 2 * delta / (t) - 10 ** (-3)
                    if flag:
                        bad = 1
                    decisions.append((t, s, j, 2, flag))
            out.append((t, s, bad))
    return out, decisions

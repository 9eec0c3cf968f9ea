from __future__ import annotations

import itertools
import random

from erdos_rogers.schemes import Scheme


def random_scheme(rng: random.Random, s: int, t: int) -> Scheme:
    """Greedy random family of almost-disjoint large blocks, completed by pairs."""
    candidates = [c for k in range(3, s + 1) for c in itertools.combinations(range(t), k)]
    rng.shuffle(candidates)
    stop = rng.random()
    chosen, used = [], set()
    for c in candidates:
        if rng.random() < stop:
            continue
        pairs = set(itertools.combinations(c, 2))
        if pairs & used:
            continue
        chosen.append(c)
        used |= pairs
    return Scheme.from_large_blocks(t, s, chosen)


def random_valid_pair(rng: random.Random, t_max: int = 8) -> tuple[int, int]:
    t = rng.randint(5, t_max)
    return rng.randint((t + 2) // 2, t - 2), t

"""Shared test utilities: seeded random descriptors."""

from __future__ import annotations

import random

from dicriticals.descriptor import ModificationDescriptor, make_descriptor


def random_descriptor(rng: random.Random, max_m: int = 8) -> ModificationDescriptor:
    """Valid descriptor with random containment sets and 0/1 multiplicities."""
    m = rng.randint(1, max_m)
    parents: list[list[int]] = [[]]
    for j in range(2, m + 1):
        pool = list(range(1, j))
        parents.append(sorted(rng.sample(pool, rng.randint(1, len(pool)))))
    rows = []
    for j in range(1, m + 1):
        rows.append(tuple(rng.randint(0, 1) for _ in range(j - 1)) + (1,))
    return make_descriptor(3, parents, curvette_mults=rows)

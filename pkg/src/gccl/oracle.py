"""Brute-force reference implementations used by ``gccl verify`` and the tests.

Everything here works on frozensets of indices read from the incidence
matrix, so it shares no code with the bitset kernels it checks.
"""
from __future__ import annotations

import random
from itertools import chain, combinations

from gccl.context import FormalContext


def _table(ctx: FormalContext):
    matrix = ctx.incidence
    objects = frozenset(range(ctx.n_objects))
    attributes = frozenset(range(ctx.n_attributes))
    return matrix, objects, attributes


def derive_intent(ctx: FormalContext, extent) -> frozenset:
    matrix, _, attributes = _table(ctx)
    return frozenset(m for m in attributes if all(matrix[g][m] for g in extent))


def derive_extent(ctx: FormalContext, intent) -> frozenset:
    matrix, objects, _ = _table(ctx)
    return frozenset(g for g in objects if all(matrix[g][m] for m in intent))


def subsets(items):
    items = sorted(items)
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def all_concepts(ctx: FormalContext) -> set[tuple[frozenset, frozenset]]:
    """Close every object subset and keep the distinct results."""
    matrix, objects, attributes = _table(ctx)
    found = set()
    for subset in subsets(objects):
        intent = frozenset(m for m in attributes if all(matrix[g][m] for g in subset))
        extent = frozenset(g for g in objects if all(matrix[g][m] for m in intent))
        found.add((extent, intent))
    return found


def as_index_pairs(pairs) -> set[tuple[frozenset, frozenset]]:
    """Convert ``(extent bits, intent bits)`` pairs to frozenset pairs."""
    def members(bits):
        return frozenset(i for i in range(bits.bit_length()) if bits >> i & 1)
    return {(members(e), members(i)) for e, i in pairs}


def random_context(rng: random.Random, max_objects: int = 10, max_attributes: int = 10,
                   min_objects: int = 0, min_attributes: int = 0) -> FormalContext:
    n = rng.randint(min_objects, max_objects)
    m = rng.randint(min_attributes, max_attributes)
    density = rng.choice((0.2, 0.4, 0.5, 0.6, 0.8))
    matrix = [[rng.random() < density for _ in range(m)] for _ in range(n)]
    return FormalContext.from_matrix([f"g{i}" for i in range(n)], [f"m{j}" for j in range(m)], matrix)

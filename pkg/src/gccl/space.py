"""Concept formation and storage: enumerating every concept of a context and
the lattice operations on the resulting concept space."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

from gccl.context import AttributeSet, FormalContext, ObjectSet, bits_to_string
from gccl.errors import GenerationError
from gccl.operators import OperatorPair, common_attributes_bits, common_objects_bits


@dataclass(frozen=True)
class Concept:
    """An (extent, intent) pair closed under F and H."""

    extent: ObjectSet
    intent: AttributeSet

    @property
    def generation(self) -> int:
        return self.extent.generation

    def bits(self) -> tuple[int, int]:
        return self.extent.bits, self.intent.bits


class ConceptSpace:
    """All concepts of one context generation, indexed by intent.

    ``table`` maps intent bits to extent bits. Iteration follows the canonical
    order: ascending by the intent's ``0``/``1`` string in attribute order.
    """

    def __init__(self, context: FormalContext, table: dict[int, int]):
        self.context = context
        self._table = table
        self._order: list[int] | None = None
        self._extents: dict[int, int] | None = None

    @property
    def generation(self) -> int:
        return self.context.generation

    @property
    def operators(self) -> OperatorPair:
        return OperatorPair(self.context)

    @property
    def table(self) -> dict[int, int]:
        return self._table

    def __len__(self) -> int:
        return len(self._table)

    def _intents_in_order(self) -> list[int]:
        if self._order is None:
            width = self.context.n_attributes
            self._order = sorted(self._table, key=lambda b: bits_to_string(b, width))
        return self._order

    def _concept(self, extent: int, intent: int) -> Concept:
        return Concept(self.context.objects_from_bits(extent), self.context.attributes_from_bits(intent))

    def __iter__(self) -> Iterator[Concept]:
        for intent in self._intents_in_order():
            yield self._concept(self._table[intent], intent)

    def pairs(self) -> set[tuple[int, int]]:
        """The space as a set of ``(extent bits, intent bits)`` pairs."""
        return {(extent, intent) for intent, extent in self._table.items()}

    def __contains__(self, concept: Concept) -> bool:
        return self._table.get(concept.intent.bits) == concept.extent.bits

    def by_intent(self, intent: AttributeSet) -> Concept | None:
        self._own(intent)
        extent = self._table.get(intent.bits)
        return None if extent is None else self._concept(extent, intent.bits)

    def by_extent(self, extent: ObjectSet) -> Concept | None:
        self._own(extent)
        if self._extents is None:
            self._extents = {e: i for i, e in self._table.items()}
        intent = self._extents.get(extent.bits)
        return None if intent is None else self._concept(extent.bits, intent)

    def _own(self, item) -> None:
        if item.generation != self.generation:
            raise GenerationError(
                f"item of generation {item.generation} used with concept space of generation {self.generation}")

    @property
    def top(self) -> Concept:
        """(G, F(G))."""
        ctx = self.context
        return self._concept(ctx.object_mask, common_attributes_bits(ctx, ctx.object_mask))

    @property
    def bottom(self) -> Concept:
        """(H(M), M)."""
        ctx = self.context
        return self._concept(common_objects_bits(ctx, ctx.attribute_mask), ctx.attribute_mask)

    def meet(self, c1: Concept, c2: Concept) -> Concept:
        self._own(c1)
        extent = c1.extent & c2.extent
        return self._concept(extent.bits, common_attributes_bits(self.context, extent.bits))

    def join(self, c1: Concept, c2: Concept) -> Concept:
        self._own(c1)
        intent = c1.intent & c2.intent
        return self._concept(common_objects_bits(self.context, intent.bits), intent.bits)

    def leq(self, c1: Concept, c2: Concept) -> bool:
        self._own(c1)
        return c1.extent <= c2.extent

    def meet_all(self, concepts: Iterable[Concept]) -> Concept:
        """Meet of ``concepts``; the empty meet is the top concept."""
        extent = self.context.object_mask
        for c in concepts:
            self._own(c)
            extent &= c.extent.bits
        return self._concept(extent, common_attributes_bits(self.context, extent))

    def join_all(self, concepts: Iterable[Concept]) -> Concept:
        """Join of ``concepts``; the empty join is the bottom concept."""
        intent = self.context.attribute_mask
        for c in concepts:
            self._own(c)
            intent &= c.intent.bits
        return self._concept(common_objects_bits(self.context, intent), intent)

    def serialize(self) -> str:
        ctx = self.context
        lines = [f"CS {ctx.n_objects} {ctx.n_attributes} {len(self)}"]
        for intent in self._intents_in_order():
            lines.append(f"{bits_to_string(self._table[intent], ctx.n_objects)} "
                         f"{bits_to_string(intent, ctx.n_attributes)}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"ConceptSpace({len(self)} concepts, generation {self.generation})"


def _close_by_one(ctx: FormalContext, extent: int, intent: int, start: int, out: dict[int, int]) -> None:
    out[intent] = extent
    cols = ctx.columns
    for j in range(start, ctx.n_attributes):
        jbit = 1 << j
        if intent & jbit:
            continue
        child_extent = extent & cols[j]
        child_intent = common_attributes_bits(ctx, child_extent)
        # canonical iff closing added no attribute below j
        if (child_intent & ~intent) & (jbit - 1) == 0:
            _close_by_one(ctx, child_extent, child_intent, j + 1, out)


def _branch(args) -> dict[int, int]:
    ctx, extent, intent, start = args
    out: dict[int, int] = {}
    _close_by_one(ctx, extent, intent, start, out)
    return out


def _root_branches(ctx: FormalContext, extent: int, intent: int) -> list[tuple[int, int, int]]:
    branches = []
    cols = ctx.columns
    for j in range(ctx.n_attributes):
        jbit = 1 << j
        if intent & jbit:
            continue
        child_extent = extent & cols[j]
        child_intent = common_attributes_bits(ctx, child_extent)
        if (child_intent & ~intent) & (jbit - 1) == 0:
            branches.append((child_extent, child_intent, j + 1))
    return branches


def enumerate_concepts(ctx: FormalContext, threads: int = 1) -> ConceptSpace:
    """Every concept of ``ctx``, each generated exactly once (Close-by-One).

    With ``threads > 1`` the subtrees below the top concept are searched in
    worker processes; the result is identical.
    """
    top_extent = ctx.object_mask
    top_intent = common_attributes_bits(ctx, top_extent)
    table: dict[int, int] = {}
    if threads <= 1 or ctx.n_attributes < 2:
        _close_by_one(ctx, top_extent, top_intent, 0, table)
    else:
        table[top_intent] = top_extent
        ctx.columns  # build the mirror once so workers receive it
        branches = _root_branches(ctx, top_extent, top_intent)
        workers = min(threads, os.cpu_count() or 1, max(1, len(branches)))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_branch, [(ctx, e, i, s) for e, i, s in branches]):
                table.update(part)
    assert len(table) <= 1 << min(ctx.n_objects, ctx.n_attributes)
    return ConceptSpace(ctx, table)


def granular_concepts(ctx: FormalContext) -> list[Concept]:
    """Object granules (HF(g), F(g)) then attribute granules (H(m), FH(m)), without repeats."""
    seen: dict[int, int] = {}
    for row in ctx.rows:
        seen.setdefault(row, common_objects_bits(ctx, row))
    for col in ctx.columns:
        intent = common_attributes_bits(ctx, col)
        seen.setdefault(intent, col)
    return [Concept(ctx.objects_from_bits(e), ctx.attributes_from_bits(i)) for i, e in seen.items()]


def object_granule(ctx: FormalContext, g: int) -> Concept:
    row = ctx.rows[g]
    return Concept(ctx.objects_from_bits(common_objects_bits(ctx, row)), ctx.attributes_from_bits(row))


def attribute_granule(ctx: FormalContext, m: int) -> Concept:
    col = ctx.columns[m]
    return Concept(ctx.objects_from_bits(col), ctx.attributes_from_bits(common_attributes_bits(ctx, col)))

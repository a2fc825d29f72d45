"""The concept-cognitive process: growing a learning state as new objects and
attributes arrive, keeping the concept space equal to that of the grown context.

New intents after adding an object with row ``r`` are the old intents plus every
``I & r``; dually for attributes with extents. The batch re-enumeration path
(``method="rebuild"``) is kept as the reference.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from gccl.context import FormalContext
from gccl.errors import BatchError
from gccl.operators import OperatorPair
from gccl.space import ConceptSpace, enumerate_concepts

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BatchRecord:
    new_objects: int
    new_attributes: int
    seconds: float
    timestamp: float


@dataclass(frozen=True)
class IncrementBatch:
    """New objects with their intents over old+new attributes, and new
    attributes with their extents over old+new objects."""

    new_objects: tuple[tuple[str, tuple[bool, ...]], ...] = ()
    new_attributes: tuple[tuple[str, tuple[bool, ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "new_objects", tuple((n, tuple(map(bool, r))) for n, r in self.new_objects))
        object.__setattr__(self, "new_attributes", tuple((n, tuple(map(bool, c))) for n, c in self.new_attributes))

    def __bool__(self) -> bool:
        return bool(self.new_objects or self.new_attributes)


@dataclass(frozen=True)
class LearningState:
    context: FormalContext
    space: ConceptSpace
    history: tuple[BatchRecord, ...] = field(default=(), compare=False)

    @property
    def operators(self) -> OperatorPair:
        return OperatorPair(self.context)

    @classmethod
    def initial(cls, context: FormalContext, threads: int = 1) -> "LearningState":
        return cls(context, enumerate_concepts(context, threads=threads))


def insert_object_bits(table: dict[int, int], gbit: int, row: int) -> None:
    """Add one object (bit ``gbit``, intent ``row``) to an intent->extent table in place."""
    fresh: dict[int, int] = {}
    for intent, extent in table.items():
        meet = intent & row
        if meet == intent:
            table[intent] = extent | gbit
        elif meet not in table:
            # the largest old extent among the preimages is the old H(meet)
            fresh[meet] = fresh.get(meet, 0) | extent
    for intent, extent in fresh.items():
        table[intent] = extent | gbit


def insert_attribute_bits(table: dict[int, int], mbit: int, col: int) -> dict[int, int]:
    """Add one attribute (bit ``mbit``, extent ``col``); returns the new table."""
    old_extents = set(table.values())
    out: dict[int, int] = {}
    fresh: dict[int, int] = {}
    for intent, extent in table.items():
        meet = extent & col
        if meet == extent:
            out[intent | mbit] = extent
        else:
            out[intent] = extent
            if meet not in old_extents:
                fresh[meet] = fresh.get(meet, 0) | intent
    for extent, intent in fresh.items():
        out[intent | mbit] = extent
    return out


def incremental_object_insert(space: ConceptSpace, name: str, intent: Sequence[bool]) -> ConceptSpace:
    """Concept space of ``space.context`` plus one object."""
    ctx = space.context
    if len(intent) != ctx.n_attributes:
        raise BatchError(f"intent has {len(intent)} cells, context has {ctx.n_attributes} attributes")
    row = sum(1 << m for m, v in enumerate(intent) if v)
    new_ctx = ctx.with_objects([name], [row])
    table = dict(space.table)
    insert_object_bits(table, 1 << ctx.n_objects, row)
    return ConceptSpace(new_ctx, table)


def incremental_attribute_insert(space: ConceptSpace, name: str, extent: Sequence[bool]) -> ConceptSpace:
    """Concept space of ``space.context`` plus one attribute."""
    ctx = space.context
    if len(extent) != ctx.n_objects:
        raise BatchError(f"extent has {len(extent)} cells, context has {ctx.n_objects} objects")
    col = sum(1 << g for g, v in enumerate(extent) if v)
    new_ctx = ctx.with_attributes([name], [col])
    table = insert_attribute_bits(space.table, 1 << ctx.n_attributes, col)
    return ConceptSpace(new_ctx, table)


def _validate(state: LearningState, batch: IncrementBatch) -> None:
    ctx = state.context
    n_obj = ctx.n_objects + len(batch.new_objects)
    n_att = ctx.n_attributes + len(batch.new_attributes)
    for kind, existing, items in (("object", ctx.objects, batch.new_objects),
                                  ("attribute", ctx.attributes, batch.new_attributes)):
        taken = set(existing)
        for name, _ in items:
            if name in taken:
                raise BatchError(f"{kind} identifier {name!r} already in use")
            taken.add(name)
    for name, intent in batch.new_objects:
        if len(intent) != n_att:
            raise BatchError(f"object {name!r}: intent has {len(intent)} cells, expected {n_att}")
    for name, extent in batch.new_attributes:
        if len(extent) != n_obj:
            raise BatchError(f"attribute {name!r}: extent has {len(extent)} cells, expected {n_obj}")
    # both sides describe the new-object x new-attribute block; they must agree
    for k, (aname, extent) in enumerate(batch.new_attributes):
        for j, (oname, intent) in enumerate(batch.new_objects):
            if extent[ctx.n_objects + j] != intent[ctx.n_attributes + k]:
                raise BatchError(f"incidence of ({oname!r}, {aname!r}) differs between object row and attribute column")


def extend(state: LearningState, batch: IncrementBatch, method: str = "incremental",
           verify: bool = False) -> LearningState:
    """Apply ``batch`` (attributes first, then objects) and return the new state.

    ``state`` is never modified; a rejected batch raises :class:`BatchError`.
    ``method="rebuild"`` re-enumerates the grown context instead of updating.
    """
    if method not in ("incremental", "rebuild"):
        raise ValueError(f"unknown method {method!r}")
    _validate(state, batch)
    if not batch:
        return state
    started = time.perf_counter()
    ctx = state.context
    n_old = ctx.n_objects
    att_names = [name for name, _ in batch.new_attributes]
    old_cols = [sum(1 << g for g in range(n_old) if ext[g]) for _, ext in batch.new_attributes]
    obj_names = [name for name, _ in batch.new_objects]
    rows = [sum(1 << m for m, v in enumerate(intent) if v) for _, intent in batch.new_objects]

    mid = ctx.with_attributes(att_names, old_cols) if att_names else ctx
    final = mid.with_objects(obj_names, rows) if obj_names else mid
    if method == "rebuild":
        space = enumerate_concepts(final)
    else:
        table = dict(state.space.table)
        for k, col in enumerate(old_cols):
            table = insert_attribute_bits(table, 1 << (ctx.n_attributes + k), col)
        for j, row in enumerate(rows):
            insert_object_bits(table, 1 << (n_old + j), row)
        space = ConceptSpace(final, table)
    elapsed = time.perf_counter() - started
    if verify:
        reference = enumerate_concepts(final)
        if reference.pairs() != space.pairs():
            raise AssertionError("incremental concept space differs from re-enumeration")
    log.debug("batch +%d objects +%d attributes -> %d concepts in %.4fs",
              len(rows), len(att_names), len(space), elapsed)
    record = BatchRecord(len(rows), len(att_names), elapsed, time.time())
    return LearningState(final, space, state.history + (record,))


def extend_with_objects(state: LearningState, rows: Iterable[tuple[str, Sequence[bool]]],
                        method: str = "incremental") -> LearningState:
    """Object-only increment: the new attribute side is empty."""
    return extend(state, IncrementBatch(new_objects=tuple(rows)), method=method)


def extend_with_attributes(state: LearningState, columns: Iterable[tuple[str, Sequence[bool]]],
                           method: str = "incremental") -> LearningState:
    return extend(state, IncrementBatch(new_attributes=tuple(columns)), method=method)


def without_history(state: LearningState) -> LearningState:
    return replace(state, history=())

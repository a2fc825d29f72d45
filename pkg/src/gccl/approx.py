"""Concept application: learning one exact or two approximate concepts from a
clue (an object set, an attribute set, or a pair of both).

For an object clue A the upper concept is the least concept whose extent
contains A, ``(HF(A), F(A))``. The lower concept is the greatest concept whose
extent lies inside A. It is the join of the object granules inside A when that
join still fits in A; otherwise no greatest such concept exists and ``lower``
is ``None``. Attribute clues are handled dually on intents.
"""
from __future__ import annotations

from dataclasses import dataclass

from gccl.context import AttributeSet, ObjectSet, iter_bits
from gccl.errors import GenerationError
from gccl.operators import common_attributes_bits, common_objects_bits
from gccl.space import Concept, ConceptSpace


@dataclass(frozen=True)
class ObjectClue:
    objects: ObjectSet


@dataclass(frozen=True)
class AttributeClue:
    attributes: AttributeSet


@dataclass(frozen=True)
class PairClue:
    objects: ObjectSet
    attributes: AttributeSet


ConceptClue = ObjectClue | AttributeClue | PairClue


@dataclass(frozen=True)
class ApproximationResult:
    """Either ``exact`` is set, or ``upper`` is set and ``lower`` may be.

    For object clues ``lower.extent <= clue <= upper.extent``; for attribute
    clues the same holds for intents.
    """

    exact: Concept | None = None
    lower: Concept | None = None
    upper: Concept | None = None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def concepts(self) -> list[tuple[str, Concept]]:
        if self.exact is not None:
            return [("exact", self.exact)]
        tagged = [("upper", self.upper)]
        if self.lower is not None:
            tagged.append(("lower", self.lower))
        return tagged


def _check(space: ConceptSpace, s) -> int:
    if s.generation != space.generation:
        raise GenerationError(f"clue from generation {s.generation}, space is generation {space.generation}")
    return s.bits


def _concept(space: ConceptSpace, extent: int, intent: int) -> Concept:
    ctx = space.context
    return Concept(ctx.objects_from_bits(extent), ctx.attributes_from_bits(intent))


def _lower_from_objects(space: ConceptSpace, a: int) -> Concept | None:
    ctx = space.context
    intent = ctx.attribute_mask
    for g in iter_bits(a):
        row = ctx.rows[g]
        if common_objects_bits(ctx, row) & ~a == 0:
            intent &= row
    extent = common_objects_bits(ctx, intent)
    if extent & ~a:
        return None
    return _concept(space, extent, intent)


def _lower_from_attributes(space: ConceptSpace, b: int) -> Concept | None:
    ctx = space.context
    extent = ctx.object_mask
    for m in iter_bits(b):
        col = ctx.columns[m]
        if common_attributes_bits(ctx, col) & ~b == 0:
            extent &= col
    intent = common_attributes_bits(ctx, extent)
    if intent & ~b:
        return None
    return _concept(space, extent, intent)


def learn_from_objects(space: ConceptSpace, objects: ObjectSet) -> ApproximationResult:
    a = _check(space, objects)
    ctx = space.context
    intent = common_attributes_bits(ctx, a)
    closed = common_objects_bits(ctx, intent)
    if closed == a:
        return ApproximationResult(exact=_concept(space, a, intent))
    return ApproximationResult(lower=_lower_from_objects(space, a), upper=_concept(space, closed, intent))


def learn_from_attributes(space: ConceptSpace, attributes: AttributeSet) -> ApproximationResult:
    """Attribute clue B: ``upper`` has the closed intent FH(B) containing B,
    ``lower`` the largest closed intent inside B (if there is a greatest one)."""
    b = _check(space, attributes)
    ctx = space.context
    extent = common_objects_bits(ctx, b)
    closed = common_attributes_bits(ctx, extent)
    if closed == b:
        return ApproximationResult(exact=_concept(space, extent, b))
    return ApproximationResult(lower=_lower_from_attributes(space, b), upper=_concept(space, extent, closed))


def learn_from_pair(space: ConceptSpace, objects: ObjectSet, attributes: AttributeSet) -> ApproximationResult:
    """Pair clue (A, B): exact when it is a concept; otherwise ``upper`` is the
    meet of the two single-clue upper concepts and ``lower`` the join of the
    single-clue lower concepts that exist."""
    a = _check(space, objects)
    b = _check(space, attributes)
    ctx = space.context
    if common_attributes_bits(ctx, a) == b and common_objects_bits(ctx, b) == a:
        return ApproximationResult(exact=_concept(space, a, b))
    by_objects = learn_from_objects(space, objects)
    by_attributes = learn_from_attributes(space, attributes)
    upper = space.meet(_as_upper(by_objects), _as_upper(by_attributes))
    lowers = [c for c in (_as_lower(by_objects), _as_lower(by_attributes)) if c is not None]
    lower = space.join_all(lowers) if lowers else None
    return ApproximationResult(lower=lower, upper=upper)


def _as_upper(result: ApproximationResult) -> Concept:
    return result.exact if result.exact is not None else result.upper


def _as_lower(result: ApproximationResult) -> Concept | None:
    return result.exact if result.exact is not None else result.lower


def learn(space: ConceptSpace, clue: ConceptClue) -> ApproximationResult:
    if isinstance(clue, ObjectClue):
        return learn_from_objects(space, clue.objects)
    if isinstance(clue, AttributeClue):
        return learn_from_attributes(space, clue.attributes)
    if isinstance(clue, PairClue):
        return learn_from_pair(space, clue.objects, clue.attributes)
    raise TypeError(f"unknown clue {clue!r}")

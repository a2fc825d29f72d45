"""Cognitive operators: F maps an object set to its shared attributes, H maps an
attribute set to the objects having all of them.

The ``*_bits`` functions are the int-level kernels used by the enumeration and
update code; :class:`OperatorPair` wraps them with generation checks.
"""
from __future__ import annotations

from gccl.context import AttributeSet, FormalContext, ObjectSet, iter_bits
from gccl.errors import GenerationError


def common_attributes_bits(ctx: FormalContext, extent: int) -> int:
    """F on raw bits. F(empty) is every attribute."""
    rows = ctx.rows
    if extent.bit_count() > ctx.n_attributes:
        # wide extents: test each column instead of folding many rows
        intent = 0
        for m, col in enumerate(ctx.columns):
            if extent & ~col == 0:
                intent |= 1 << m
        return intent
    intent = ctx.attribute_mask
    for g in iter_bits(extent):
        intent &= rows[g]
        if not intent:
            break
    return intent


def common_objects_bits(ctx: FormalContext, intent: int) -> int:
    """H on raw bits. H(empty) is every object."""
    cols = ctx.columns
    extent = ctx.object_mask
    for m in iter_bits(intent):
        extent &= cols[m]
        if not extent:
            break
    return extent


class OperatorPair:
    """F and H bound to one context generation."""

    def __init__(self, context: FormalContext):
        self.context = context

    @property
    def generation(self) -> int:
        return self.context.generation

    def _check(self, s, kind) -> int:
        if not isinstance(s, kind):
            raise TypeError(f"expected {kind.__name__}, got {type(s).__name__}")
        if s.generation != self.context.generation:
            raise GenerationError(
                f"{kind.__name__} from generation {s.generation} used with operators of "
                f"generation {self.context.generation}"
            )
        return s.bits

    def F(self, objects: ObjectSet) -> AttributeSet:
        return self.context.attributes_from_bits(
            common_attributes_bits(self.context, self._check(objects, ObjectSet)))

    def H(self, attributes: AttributeSet) -> ObjectSet:
        return self.context.objects_from_bits(
            common_objects_bits(self.context, self._check(attributes, AttributeSet)))

    def closure_extent(self, objects: ObjectSet) -> ObjectSet:
        """H(F(A)): the smallest concept extent containing A."""
        return self.H(self.F(objects))

    def closure_intent(self, attributes: AttributeSet) -> AttributeSet:
        """F(H(B)): the smallest concept intent containing B."""
        return self.F(self.H(attributes))

    def is_concept(self, objects: ObjectSet, attributes: AttributeSet) -> bool:
        return self.F(objects) == attributes and self.H(attributes) == objects

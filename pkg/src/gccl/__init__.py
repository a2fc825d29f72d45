"""Concept-lattice engine: formal contexts, cognitive operators, concept
spaces, incremental updates and approximate concept learning."""

from gccl.approx import ApproximationResult, learn_from_attributes, learn_from_objects, learn_from_pair
from gccl.context import AttributeSet, FormalContext, ManyValuedContext, ObjectSet, parse_context, serialize_context
from gccl.operators import OperatorPair
from gccl.process import IncrementBatch, LearningState, extend, extend_with_objects
from gccl.space import Concept, ConceptSpace, enumerate_concepts, granular_concepts

__all__ = [
    "ApproximationResult",
    "AttributeSet",
    "Concept",
    "ConceptSpace",
    "FormalContext",
    "IncrementBatch",
    "LearningState",
    "ManyValuedContext",
    "ObjectSet",
    "OperatorPair",
    "enumerate_concepts",
    "extend",
    "extend_with_objects",
    "granular_concepts",
    "learn_from_attributes",
    "learn_from_objects",
    "learn_from_pair",
    "parse_context",
    "serialize_context",
]

from pathlib import Path

import pytest

from gccl.context import FormalContext

DATA = Path(__file__).resolve().parent.parent / "data"


def k1() -> FormalContext:
    return FormalContext.from_intents(
        ["a", "b", "c"], {"g1": ["a", "b"], "g2": ["b", "c"], "g3": ["a", "b", "c"]}
    )


def k0() -> FormalContext:
    return FormalContext.from_intents(["a", "b", "c"], {"g1": ["a", "b"], "g2": ["b", "c"]})


@pytest.fixture
def K1():
    return k1()


@pytest.fixture
def K0():
    return k0()


def concept_names(ctx, concept):
    return set(ctx.object_names(concept.extent)), set(ctx.attribute_names(concept.intent))

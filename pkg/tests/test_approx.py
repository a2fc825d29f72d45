import random

import pytest
from hypothesis import given, settings

from gccl import oracle
from gccl.approx import (
    AttributeClue,
    ObjectClue,
    PairClue,
    learn,
    learn_from_attributes,
    learn_from_objects,
    learn_from_pair,
)
from gccl.context import FormalContext
from gccl.errors import GenerationError
from gccl.space import enumerate_concepts

from conftest import concept_names
from strategies import contexts


def test_exact_object_clue(K1):
    space = enumerate_concepts(K1)
    result = learn_from_objects(space, K1.object_set(["g1", "g3"]))
    assert result.is_exact
    assert concept_names(K1, result.exact) == ({"g1", "g3"}, {"a", "b"})


def test_object_clue_without_lower(K1):
    space = enumerate_concepts(K1)
    result = learn_from_objects(space, K1.object_set(["g1", "g2"]))
    assert not result.is_exact
    assert concept_names(K1, result.upper) == ({"g1", "g2", "g3"}, {"b"})
    assert result.lower is None


def test_whole_object_set_is_top(K1):
    space = enumerate_concepts(K1)
    assert learn_from_objects(space, K1.all_objects()).exact == space.top


def test_attribute_clues(K1):
    space = enumerate_concepts(K1)
    exact = learn_from_attributes(space, K1.attribute_set("b"))
    assert concept_names(K1, exact.exact) == ({"g1", "g2", "g3"}, {"b"})
    approx = learn_from_attributes(space, K1.attribute_set("a"))
    assert concept_names(K1, approx.upper) == ({"g1", "g3"}, {"a", "b"})
    assert approx.lower is None
    assert learn_from_attributes(space, space.top.intent).exact == space.top


def test_pair_clues(K1):
    space = enumerate_concepts(K1)
    assert learn_from_pair(space, K1.object_set(["g1", "g3"]), K1.attribute_set("ab")).is_exact
    result = learn_from_pair(space, K1.all_objects(), K1.attribute_set("abc"))
    assert not result.is_exact
    # upper: meet of (G,{b}) and ({g3},{a,b,c}); lower: join of the two lower concepts (both top)
    assert concept_names(K1, result.upper) == ({"g3"}, {"a", "b", "c"})
    assert concept_names(K1, result.lower) == ({"g1", "g2", "g3"}, {"b"})


def test_boundary_pair_is_exact():
    ctx = FormalContext(["x", "y"], ["a", "b"], [0b01, 0b10])
    space = enumerate_concepts(ctx)
    assert learn_from_pair(space, ctx.object_set(), ctx.all_attributes()).is_exact


def test_dispatch_and_generation(K1):
    space = enumerate_concepts(K1)
    a = K1.object_set(["g3"])
    assert learn(space, ObjectClue(a)) == learn_from_objects(space, a)
    assert learn(space, AttributeClue(K1.attribute_set("a"))).upper is not None
    assert learn(space, PairClue(a, K1.attribute_set("abc"))).is_exact
    other = FormalContext(K1.objects, K1.attributes, K1.rows)
    with pytest.raises(GenerationError):
        learn_from_objects(space, other.object_set(["g1"]))


def scan_object_brackets(concepts, a):
    above = [c for c in concepts if a <= c[0]]
    below = [c for c in concepts if c[0] <= a]
    least = [c for c in above if all(c[0] <= d[0] for d in above)]
    greatest = [c for c in below if all(d[0] <= c[0] for d in below)]
    return least, greatest


def as_sets(concept):
    return frozenset(concept.extent), frozenset(concept.intent)


def check_object_clue(ctx, space, concepts, a_bits):
    a = ctx.objects_from_bits(a_bits)
    result = learn_from_objects(space, a)
    members = frozenset(a)
    least, greatest = scan_object_brackets(concepts, members)
    closed = any(e == members for e, _ in concepts)
    assert result.is_exact == closed
    if closed:
        assert as_sets(result.exact) == least[0]
        return
    assert [as_sets(result.upper)] == least
    assert frozenset(result.lower.extent) <= members if result.lower else True
    if greatest:
        assert as_sets(result.lower) == greatest[0]
    else:
        assert result.lower is None


@settings(max_examples=200)
@given(contexts(max_objects=7, max_attributes=7))
def test_object_brackets_against_scan(ctx):
    space = enumerate_concepts(ctx)
    concepts = oracle.all_concepts(ctx)
    for a_bits in range(1 << ctx.n_objects):
        check_object_clue(ctx, space, concepts, a_bits)


@settings(max_examples=200)
@given(contexts(max_objects=7, max_attributes=7))
def test_attribute_brackets_against_scan(ctx):
    space = enumerate_concepts(ctx)
    concepts = oracle.all_concepts(ctx)
    for b_bits in range(1 << ctx.n_attributes):
        b = frozenset(ctx.attributes_from_bits(b_bits))
        result = learn_from_attributes(space, ctx.attributes_from_bits(b_bits))
        closed = any(i == b for _, i in concepts)
        assert result.is_exact == closed
        if closed:
            continue
        containing = [c for c in concepts if b <= c[1]]
        smallest = [c for c in containing if all(c[1] <= d[1] for d in containing)]
        assert [as_sets(result.upper)] == smallest
        inside = [c for c in concepts if c[1] <= b]
        largest = [c for c in inside if all(d[1] <= c[1] for d in inside)]
        if largest:
            assert as_sets(result.lower) == largest[0]
        else:
            assert result.lower is None


@settings(max_examples=100)
@given(contexts(max_objects=5, max_attributes=5))
def test_pair_brackets_against_scan(ctx):
    space = enumerate_concepts(ctx)
    concepts = oracle.all_concepts(ctx)
    for a_bits in range(1 << ctx.n_objects):
        for b_bits in range(1 << ctx.n_attributes):
            a, b = ctx.objects_from_bits(a_bits), ctx.attributes_from_bits(b_bits)
            result = learn_from_pair(space, a, b)
            pair = (frozenset(a), frozenset(b))
            assert result.is_exact == (pair in concepts)
            if result.is_exact:
                continue
            by_a, by_b = learn_from_objects(space, a), learn_from_attributes(space, b)
            ua = by_a.exact or by_a.upper
            ub = by_b.exact or by_b.upper
            bound = frozenset(ua.extent) & frozenset(ub.extent)
            below = [c for c in concepts if c[0] <= bound]
            assert [as_sets(result.upper)] == [c for c in below if all(d[0] <= c[0] for d in below)]
            lowers = [r.exact or r.lower for r in (by_a, by_b) if (r.exact or r.lower) is not None]
            if not lowers:
                assert result.lower is None
                continue
            need = frozenset().union(*(frozenset(c.extent) for c in lowers))
            above = [c for c in concepts if need <= c[0]]
            assert [as_sets(result.lower)] == [c for c in above if all(c[0] <= d[0] for d in above)]


def test_exact_results_are_idempotent():
    rng = random.Random(8)
    for _ in range(30):
        ctx = oracle.random_context(rng, 8, 8)
        space = enumerate_concepts(ctx)
        for c in space:
            assert learn_from_objects(space, c.extent).exact == c
            assert learn_from_attributes(space, c.intent).exact == c
            assert learn_from_pair(space, c.extent, c.intent).exact == c

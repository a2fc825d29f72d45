from hypothesis import strategies as st

from gccl.context import FormalContext


@st.composite
def contexts(draw, max_objects=10, max_attributes=10, min_objects=0, min_attributes=0):
    n = draw(st.integers(min_objects, max_objects))
    m = draw(st.integers(min_attributes, max_attributes))
    rows = draw(st.lists(st.integers(0, (1 << m) - 1), min_size=n, max_size=n))
    return FormalContext([f"g{i}" for i in range(n)], [f"m{j}" for j in range(m)], rows)


@st.composite
def context_with_object_sets(draw, k=2, **kw):
    ctx = draw(contexts(**kw))
    sets = [ctx.objects_from_bits(draw(st.integers(0, ctx.object_mask))) for _ in range(k)]
    return ctx, sets


@st.composite
def context_with_attribute_sets(draw, k=2, **kw):
    ctx = draw(contexts(**kw))
    sets = [ctx.attributes_from_bits(draw(st.integers(0, ctx.attribute_mask))) for _ in range(k)]
    return ctx, sets

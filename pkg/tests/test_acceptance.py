"""Acceptance criteria, one test each. Every test prints a single
``ACCEPTANCE <name>: PASS|FAIL <detail>`` line and then asserts."""
import random
import time

import pytest

from gccl import oracle
from gccl.approx import learn_from_objects
from gccl.bench import REFERENCE, BenchReport, emit_report, object_batch, run_formation, run_incremental, standard_suite
from gccl.operators import OperatorPair
from gccl.process import extend
from gccl.space import enumerate_concepts, object_granule
from gccl.storage import dumps_state, loads_state

from conftest import DATA
from test_process import permuted, random_mixed_growth


@pytest.fixture
def report_line(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        return ok
    return emit


def _subset_masks(n):
    return range(1 << n)


def test_galois_laws(report_line):
    rng = random.Random(500)
    failures = []
    for k in range(500):
        ctx = oracle.random_context(rng, 10, 10)
        ops = OperatorPair(ctx)
        all_g, all_m = ctx.all_objects(), ctx.all_attributes()
        obj_sets = [ctx.objects_from_bits(rng.getrandbits(ctx.n_objects) if ctx.n_objects else 0) for _ in range(6)]
        att_sets = [ctx.attributes_from_bits(rng.getrandbits(ctx.n_attributes) if ctx.n_attributes else 0)
                    for _ in range(6)]
        obj_sets += [ctx.object_set(), all_g]
        att_sets += [ctx.attribute_set(), all_m]
        for a1 in obj_sets:
            fa1 = ops.F(a1)
            if set(fa1) != oracle.derive_intent(ctx, set(a1)):
                failures.append((k, "F differs from brute force"))
            for a2 in obj_sets:
                if a1 <= a2 and not ops.F(a2) <= fa1:
                    failures.append((k, "F not antitone"))
                if not ops.F(a1 | a2) >= fa1 & ops.F(a2):
                    failures.append((k, "F(A1 u A2) not above F(A1) n F(A2)"))
            hfa = ops.H(fa1)
            if set(hfa) != {g for g in range(ctx.n_objects) if fa1 <= ctx.object_intent(g)}:
                failures.append((k, "H differs from the single-object definition"))
            if not a1 <= hfa or ops.closure_extent(hfa) != hfa or ops.F(hfa) != fa1:
                failures.append((k, "extent closure not extensive, idempotent or FHF=F"))
        for b1 in att_sets:
            hb1 = ops.H(b1)
            if set(hb1) != oracle.derive_extent(ctx, set(b1)):
                failures.append((k, "H differs from brute force"))
            for b2 in att_sets:
                if b1 <= b2 and not ops.H(b2) <= hb1:
                    failures.append((k, "H not antitone"))
                if not ops.H(b1 | b2) >= hb1 & ops.H(b2):
                    failures.append((k, "H(B1 u B2) not above H(B1) n H(B2)"))
            fhb = ops.F(hb1)
            if not b1 <= fhb or ops.closure_intent(fhb) != fhb or ops.H(fhb) != hb1:
                failures.append((k, "intent closure not extensive, idempotent or HFH=H"))
            for a in obj_sets:
                if (a <= hb1) != (b1 <= ops.F(a)):
                    failures.append((k, "Galois adjunction A <= H(B) iff B <= F(A) fails"))
    ok = report_line("galois-laws", not failures, f"500 contexts, {len(failures)} violations")
    assert ok, failures[:5]


def test_enumeration_oracle(report_line):
    rng = random.Random(200)
    started = time.perf_counter()
    bad = [k for k in range(200)
           if oracle.as_index_pairs(enumerate_concepts(ctx := oracle.random_context(rng, 12, 10)).pairs())
           != oracle.all_concepts(ctx)]
    elapsed = time.perf_counter() - started
    ok = report_line("enumeration-oracle", not bad and elapsed < 60, f"200 contexts, {len(bad)} mismatches, {elapsed:.1f}s")
    assert ok, bad


def test_incremental_equivalence(report_line):
    rng = random.Random(201)
    started = time.perf_counter()
    bad = []
    for k in range(200):
        target = oracle.random_context(rng, 12, 10, min_objects=4, min_attributes=4)
        state, objs, atts = random_mixed_growth(rng, target)
        final = permuted(target, objs, atts)
        if state.context != final or state.space.pairs() != enumerate_concepts(final).pairs():
            bad.append(k)
    elapsed = time.perf_counter() - started
    ok = report_line("incremental-equivalence", not bad and elapsed < 120,
                     f"200 mixed insertion orders, {len(bad)} mismatches, {elapsed:.1f}s")
    assert ok, bad


def test_granular_generation(report_line):
    rng = random.Random(202)
    checked, bad = 0, []
    for k in range(200):
        ctx = oracle.random_context(rng, 12, 10, min_objects=4, min_attributes=4)
        space = enumerate_concepts(ctx)
        granules = [object_granule(ctx, g) for g in range(ctx.n_objects)]
        for concept in space:
            if not concept.extent:
                continue
            checked += 1
            if space.join_all([granules[g] for g in concept.extent]) != concept:
                bad.append((k, concept))
    ok = report_line("granular-generation", not bad, f"{checked} concepts, {len(bad)} mismatches")
    assert ok, bad[:5]


def test_approximation_brackets(report_line):
    rng = random.Random(203)
    clues, bad = 0, []
    for k in range(60):
        ctx = oracle.random_context(rng, 10, 8)
        space = enumerate_concepts(ctx)
        concepts = list(space.pairs())
        for a in _subset_masks(ctx.n_objects):
            clues += 1
            result = learn_from_objects(space, ctx.objects_from_bits(a))
            above = [(e, i) for e, i in concepts if e & a == a]
            below = [(e, i) for e, i in concepts if e & ~a == 0]
            least = [c for c in above if all(c[0] & o[0] == c[0] for o in above)]
            greatest = [c for c in below if all(c[0] & o[0] == o[0] for o in below)]
            if result.is_exact:
                if least != [(a, result.exact.intent.bits)]:
                    bad.append((k, a, "exact answer is not the concept with this extent"))
                continue
            if any(e == a for e, _ in concepts):
                bad.append((k, a, "clue is an extent but was not answered exactly"))
            upper = (result.upper.extent.bits, result.upper.intent.bits)
            if least != [upper]:
                bad.append((k, a, "upper is not the least concept above the clue"))
            lower = None if result.lower is None else (result.lower.extent.bits, result.lower.intent.bits)
            if greatest != ([lower] if lower else []):
                bad.append((k, a, "lower is not the greatest concept below the clue"))
    ok = report_line("approximation-brackets", not bad, f"{clues} object clues, {len(bad)} violations")
    assert ok, bad[:5]


@pytest.fixture(scope="module")
def bench_run():
    """The full standard suite, formation once per row and each batch once."""
    report, states = BenchReport(), []
    suite = standard_suite(DATA)
    for dataset, counts in suite:
        for n in counts:
            state, row = run_formation(dataset, n, repeats=1)
            row.batch_seconds = run_incremental(state, dataset, repeats=1)
            report.rows.append(row)
            states.append((dataset, state))
    return report, states


@pytest.mark.slow
def test_lattice_size_report_structure(bench_run, report_line):
    report, _ = bench_run
    lines = emit_report(report, "tsv").splitlines()
    counts = {}
    for row in report.rows:
        counts.setdefault(row.label, []).append(row.concepts)
    monotone = all(a <= b for seq in counts.values() for a, b in zip(seq, seq[1:]))
    ok = report_line("lattice-size-structure", len(lines) == 8 and monotone,
                     f"{len(lines) - 1} rows, counts {counts}")
    assert ok


@pytest.mark.slow
def test_lattice_sizes_within_20_percent_of_reference(bench_run, report_line):
    report, _ = bench_run
    deltas = {}
    for row in report.rows:
        ref = REFERENCE[(row.label, row.instances)][1]
        deltas[(row.label, row.instances)] = (row.concepts, ref, 100.0 * (row.concepts - ref) / ref)
    worst = max(abs(d) for _, _, d in deltas.values())
    detail = ", ".join(f"{label} {n}: {c} vs {r} ({d:+.0f}%)" for (label, n), (c, r, d) in deltas.items())
    ok = report_line("lattice-size-within-20pct", worst <= 20.0, detail)
    assert ok, detail


@pytest.mark.slow
def test_timing_feasibility(bench_run, report_line):
    report, states = bench_run
    rows = {(r.label, r.instances): r for r in report.rows}
    formation = rows[("mushroom", 2000)].initial_seconds
    batch = rows[("mushroom", 1000)].batch_seconds[1000]
    slower = []
    for dataset, state in states:
        n = state.context.n_objects
        incremental, rebuild = [], []
        final = dataset.context(0, n + 10)
        batch10 = object_batch(dataset, n, 10)
        for _ in range(3):
            t = time.perf_counter()
            extend(state, batch10)
            incremental.append(time.perf_counter() - t)
            t = time.perf_counter()
            enumerate_concepts(final)
            rebuild.append(time.perf_counter() - t)
        inc, reb = sorted(incremental)[1], sorted(rebuild)[1]
        if not inc < reb:
            slower.append((dataset.label, n, inc, reb))
    ok = report_line("timing-feasibility", formation < 120 and batch is not None and batch < 60 and not slower,
                     f"mushroom 2000 formation {formation:.2f}s, 1000-batch on 1000 {batch:.2f}s, "
                     f"10-batch slower than rebuild in {len(slower)} of {len(states)} rows")
    assert ok, slower


@pytest.mark.slow
def test_persistence_round_trip(bench_run, report_line):
    _, states = bench_run
    checked, bad = 0, []
    for dataset, state in states:
        n = state.context.n_objects
        grown = extend(state, object_batch(dataset, n, 10))
        for s in (state, grown):
            checked += 1
            text = dumps_state(s)
            again = dumps_state(loads_state(text))
            if again != text:
                bad.append((dataset.label, s.context.n_objects))
    ok = report_line("persistence-round-trip", not bad, f"{checked} bench states, {len(bad)} differ")
    assert ok, bad


def test_degenerate_zero_object_state_round_trips():
    state = run_formation(standard_suite(DATA)[0][0], 0, repeats=1)[0]
    assert loads_state(dumps_state(state)).space.pairs() == state.space.pairs()

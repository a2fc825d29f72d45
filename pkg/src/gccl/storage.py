"""Saving and loading learning states.

A state file is the line ``GCCL-STATE 1``, the context in Burmeister layout,
then the canonical concept-space listing. Batch history is not stored.
"""
from __future__ import annotations

from pathlib import Path

from gccl.context import FormalContext, parse_context, serialize_context, string_to_bits
from gccl.errors import ParseError
from gccl.process import LearningState
from gccl.space import ConceptSpace

MAGIC = "GCCL-STATE 1"


def dumps_state(state: LearningState) -> str:
    return f"{MAGIC}\n{serialize_context(state.context)}{state.space.serialize()}"


def save_state(state: LearningState, path) -> None:
    Path(path).write_bytes(dumps_state(state).encode("utf-8"))


def _line_offset(data: bytes, lineno: int) -> int:
    """Byte offset of the start of 1-based line ``lineno``."""
    offset = 0
    for _ in range(lineno - 1):
        nl = data.find(b"\n", offset)
        if nl < 0:
            return len(data)
        offset = nl + 1
    return offset


def loads_state(data: bytes | str, check: bool = False) -> LearningState:
    """Parse a state file. Errors carry the 1-based line and the byte offset of
    that line. ``check`` re-derives every stored concept from the context."""
    if isinstance(data, str):
        data = data.encode("utf-8")

    def fail(message, lineno):
        raise ParseError(message, line=lineno, offset=_line_offset(data, lineno))

    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"state file is not UTF-8: {exc.reason}", offset=exc.start) from None
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    else:
        fail("state file does not end with a newline (truncated?)", len(lines))
    if not lines or lines[0] != MAGIC:
        fail(f"expected {MAGIC!r} header", 1)
    if len(lines) < 4:
        fail("context header incomplete", len(lines) + 1)
    try:
        n_obj, n_att = int(lines[2]), int(lines[3])
    except ValueError:
        fail("context counts are not integers", 3)
    ctx_end = 1 + 3 + n_obj + n_att + n_obj
    if len(lines) < ctx_end:
        fail("state file ends inside the context block", len(lines) + 1)
    try:
        context = parse_context("\n".join(lines[1:ctx_end]) + "\n")
    except ParseError as exc:
        lineno = (exc.line or 1) + 1
        fail(str(exc).split(" (line")[0], lineno)
    except ValueError as exc:
        fail(str(exc), 2)
    return _parse_space(context, lines, ctx_end, fail, check)


def _parse_space(context: FormalContext, lines, start, fail, check) -> LearningState:
    header_no = start + 1
    if len(lines) <= start:
        fail("missing concept-space header", header_no)
    parts = lines[start].split()
    if len(parts) != 4 or parts[0] != "CS":
        fail(f"bad concept-space header {lines[start]!r}", header_no)
    try:
        n_obj, n_att, count = (int(p) for p in parts[1:])
    except ValueError:
        fail("concept-space header counts are not integers", header_no)
    if (n_obj, n_att) != (context.n_objects, context.n_attributes):
        fail("concept-space dimensions differ from the context", header_no)
    body = lines[start + 1:]
    if len(body) != count:
        fail(f"{len(body)} concept lines, header declares {count}", header_no + min(len(body), count) + 1)
    table: dict[int, int] = {}
    for k, line in enumerate(body):
        lineno = header_no + 1 + k
        fields = line.split(" ")
        if len(fields) != 2 or len(fields[0]) != n_obj or len(fields[1]) != n_att:
            fail("concept line must be '<extent bits> <intent bits>' of the context widths", lineno)
        try:
            extent, intent = string_to_bits(fields[0]), string_to_bits(fields[1])
        except ValueError as exc:
            fail(str(exc), lineno)
        if intent in table:
            fail("duplicate intent", lineno)
        table[intent] = extent
    space = ConceptSpace(context, table)
    if check:
        from gccl.operators import common_attributes_bits, common_objects_bits
        for k, (intent, extent) in enumerate(table.items()):
            if common_attributes_bits(context, extent) != intent or common_objects_bits(context, intent) != extent:
                fail("stored pair is not a concept of the stored context", header_no + 1 + k)
    return LearningState(context, space)


def load_state(path, check: bool = False) -> LearningState:
    return loads_state(Path(path).read_bytes(), check=check)

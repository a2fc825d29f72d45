"""Formal contexts, position-aligned object/attribute sets and the context file format.

Incidence is kept as one Python ``int`` per object: bit ``m`` of ``rows[g]`` is
set iff object ``g`` has attribute ``m``. Object and attribute sets are ints
as well, bit ``i`` standing for the object/attribute at index ``i``. Appending
objects or attributes never moves an existing bit, so a set built against an
older context keeps its meaning; the generation tag on :class:`ObjectSet` and
:class:`AttributeSet` still refuses to mix them silently.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from gccl.errors import DataError, GenerationError, ParseError

_generation_counter = itertools.count(1)


_NON_BIT = re.compile("[^01]")


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``bits`` in ascending order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def bits_to_string(bits: int, width: int) -> str:
    """Render ``bits`` as a ``0``/``1`` string, index 0 first."""
    if width == 0:
        return ""
    return format(bits, f"0{width}b")[::-1][:width]


def string_to_bits(text: str) -> int:
    bad = _NON_BIT.search(text)
    if bad:
        raise ValueError(f"illegal bit character {bad.group()!r}")
    return int(text[::-1], 2) if text else 0


class _IndexSet:
    """Fixed-width bit vector tied to one context generation."""

    __slots__ = ("bits", "width", "generation")

    def __init__(self, bits: int, width: int, generation: int):
        if bits < 0 or bits >> width:
            raise ValueError(f"bits 0x{bits:x} do not fit width {width}")
        self.bits = bits
        self.width = width
        self.generation = generation

    def _aligned(self, other) -> int:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.generation != self.generation or other.width != self.width:
            raise GenerationError(
                f"{type(self).__name__} of generation {self.generation} (width {self.width}) "
                f"mixed with generation {other.generation} (width {other.width})"
            )
        return other.bits

    def _new(self, bits: int):
        return type(self)(bits, self.width, self.generation)

    def __or__(self, other):
        return self._new(self.bits | self._aligned(other))

    def __and__(self, other):
        return self._new(self.bits & self._aligned(other))

    def __sub__(self, other):
        return self._new(self.bits & ~self._aligned(other))

    def __invert__(self):
        return self._new(~self.bits & ((1 << self.width) - 1))

    def __le__(self, other) -> bool:
        return self.bits & ~self._aligned(other) == 0

    def __ge__(self, other) -> bool:
        return self._aligned(other) & ~self.bits == 0

    def __lt__(self, other) -> bool:
        return self <= other and self.bits != other.bits

    def __gt__(self, other) -> bool:
        return self >= other and self.bits != other.bits

    def issubset(self, other) -> bool:
        return self <= other

    union = __or__
    intersection = __and__
    difference = __sub__

    def complement(self):
        return ~self

    def __contains__(self, index: int) -> bool:
        return 0 <= index < self.width and bool(self.bits >> index & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    # equality ignores the generation tag: two sets with the same members are equal
    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.bits == other.bits and self.width == other.width

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.bits, self.width))

    def to_bitstring(self) -> str:
        return bits_to_string(self.bits, self.width)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({sorted(self)!r}, width={self.width})"


class ObjectSet(_IndexSet):
    """Set of object positions of one context generation."""

    __slots__ = ()


class AttributeSet(_IndexSet):
    """Set of attribute positions of one context generation."""

    __slots__ = ()


def _check_names(names: Sequence[str], kind: str) -> tuple[str, ...]:
    names = tuple(names)
    seen = set()
    for name in names:
        if not isinstance(name, str):
            raise TypeError(f"{kind} identifier {name!r} is not a string")
        if "\n" in name or "\r" in name:
            raise ValueError(f"{kind} identifier {name!r} contains a line break")
        if name in seen:
            raise ValueError(f"duplicate {kind} identifier {name!r}")
        seen.add(name)
    return names


class FormalContext:
    """Objects, attributes and a binary incidence relation between them.

    Instances are treated as immutable. :meth:`with_objects` and
    :meth:`with_attributes` return a new context (a new generation) whose
    existing indices are unchanged.
    """

    def __init__(self, objects: Sequence[str], attributes: Sequence[str], rows: Iterable[int]):
        self._objects = _check_names(objects, "object")
        self._attributes = _check_names(attributes, "attribute")
        self._rows = tuple(rows)
        if len(self._rows) != len(self._objects):
            raise ValueError(f"{len(self._rows)} incidence rows for {len(self._objects)} objects")
        width = len(self._attributes)
        for g, row in enumerate(self._rows):
            if row < 0 or row >> width:
                raise ValueError(f"row {g} has bits outside {width} attributes")
        self._object_index = {name: i for i, name in enumerate(self._objects)}
        self._attribute_index = {name: i for i, name in enumerate(self._attributes)}
        self._columns: tuple[int, ...] | None = None
        self.generation = next(_generation_counter)

    @classmethod
    def from_matrix(cls, objects, attributes, matrix) -> "FormalContext":
        rows = []
        for g, values in enumerate(matrix):
            values = list(values)
            if len(values) != len(attributes):
                raise ValueError(f"matrix row {g} has {len(values)} cells, expected {len(attributes)}")
            rows.append(sum(1 << m for m, v in enumerate(values) if v))
        return cls(objects, attributes, rows)

    @classmethod
    def from_intents(cls, attributes: Sequence[str], intents: dict[str, Iterable[str]]) -> "FormalContext":
        """Build a context from ``{object: attribute names}`` (insertion order kept)."""
        index = {name: i for i, name in enumerate(attributes)}
        rows = [sum(1 << index[a] for a in set(names)) for names in intents.values()]
        return cls(list(intents), attributes, rows)

    @property
    def objects(self) -> tuple[str, ...]:
        return self._objects

    @property
    def attributes(self) -> tuple[str, ...]:
        return self._attributes

    @property
    def n_objects(self) -> int:
        return len(self._objects)

    @property
    def n_attributes(self) -> int:
        return len(self._attributes)

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def columns(self) -> tuple[int, ...]:
        """Attribute-major mirror of the incidence, built on first use."""
        if self._columns is None:
            cols = [0] * self.n_attributes
            for g, row in enumerate(self._rows):
                gbit = 1 << g
                for m in iter_bits(row):
                    cols[m] |= gbit
            self._columns = tuple(cols)
        return self._columns

    @property
    def incidence(self) -> list[list[bool]]:
        return [[bool(row >> m & 1) for m in range(self.n_attributes)] for row in self._rows]

    @property
    def object_mask(self) -> int:
        return (1 << self.n_objects) - 1

    @property
    def attribute_mask(self) -> int:
        return (1 << self.n_attributes) - 1

    def object_index(self, name: str) -> int:
        try:
            return self._object_index[name]
        except KeyError:
            raise KeyError(f"unknown object {name!r}") from None

    def attribute_index(self, name: str) -> int:
        try:
            return self._attribute_index[name]
        except KeyError:
            raise KeyError(f"unknown attribute {name!r}") from None

    def object_set(self, members: Iterable[str | int] = ()) -> ObjectSet:
        """Object set from names or indices."""
        bits = 0
        for item in members:
            g = item if isinstance(item, int) else self.object_index(item)
            self._check_object(g)
            bits |= 1 << g
        return ObjectSet(bits, self.n_objects, self.generation)

    def attribute_set(self, members: Iterable[str | int] = ()) -> AttributeSet:
        """Attribute set from names or indices."""
        bits = 0
        for item in members:
            m = item if isinstance(item, int) else self.attribute_index(item)
            self._check_attribute(m)
            bits |= 1 << m
        return AttributeSet(bits, self.n_attributes, self.generation)

    def objects_from_bits(self, bits: int) -> ObjectSet:
        return ObjectSet(bits, self.n_objects, self.generation)

    def attributes_from_bits(self, bits: int) -> AttributeSet:
        return AttributeSet(bits, self.n_attributes, self.generation)

    def all_objects(self) -> ObjectSet:
        return self.objects_from_bits(self.object_mask)

    def all_attributes(self) -> AttributeSet:
        return self.attributes_from_bits(self.attribute_mask)

    def object_names(self, objects: ObjectSet | int) -> list[str]:
        bits = objects if isinstance(objects, int) else objects.bits
        return [self._objects[g] for g in iter_bits(bits)]

    def attribute_names(self, attributes: AttributeSet | int) -> list[str]:
        bits = attributes if isinstance(attributes, int) else attributes.bits
        return [self._attributes[m] for m in iter_bits(bits)]

    def _check_object(self, g: int) -> None:
        if not 0 <= g < self.n_objects:
            raise IndexError(f"object index {g} out of range 0..{self.n_objects - 1}")

    def _check_attribute(self, m: int) -> None:
        if not 0 <= m < self.n_attributes:
            raise IndexError(f"attribute index {m} out of range 0..{self.n_attributes - 1}")

    def object_intent(self, g: int) -> AttributeSet:
        """Attributes of the single object ``g`` (its incidence row)."""
        self._check_object(g)
        return self.attributes_from_bits(self._rows[g])

    def attribute_extent(self, m: int) -> ObjectSet:
        """Objects having the single attribute ``m`` (its incidence column)."""
        self._check_attribute(m)
        return self.objects_from_bits(self.columns[m])

    def with_attributes(self, names: Sequence[str], columns: Sequence[int]) -> "FormalContext":
        """New generation with attributes appended; ``columns`` are extents over the current objects."""
        if len(names) != len(columns):
            raise ValueError("one extent per new attribute required")
        rows = list(self._rows)
        base = self.n_attributes
        for k, col in enumerate(columns):
            if col < 0 or col >> self.n_objects:
                raise DataError(f"extent of new attribute {names[k]!r} is wider than {self.n_objects} objects")
            bit = 1 << (base + k)
            for g in iter_bits(col):
                rows[g] |= bit
        return FormalContext(self._objects, self._attributes + tuple(names), rows)

    def with_objects(self, names: Sequence[str], rows: Sequence[int]) -> "FormalContext":
        """New generation with objects appended; ``rows`` are intents over the current attributes."""
        if len(names) != len(rows):
            raise ValueError("one intent per new object required")
        for name, row in zip(names, rows):
            if row < 0 or row >> self.n_attributes:
                raise DataError(f"intent of new object {name!r} is wider than {self.n_attributes} attributes")
        return FormalContext(self._objects + tuple(names), self._attributes, self._rows + tuple(rows))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalContext):
            return NotImplemented
        return (
            self._objects == other._objects
            and self._attributes == other._attributes
            and self._rows == other._rows
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"FormalContext({self.n_objects} objects x {self.n_attributes} attributes, generation {self.generation})"


def serialize_context(ctx: FormalContext) -> str:
    """Render ``ctx`` in the Burmeister layout (``B``, counts, names, ``X``/``.`` rows)."""
    lines = ["B", str(ctx.n_objects), str(ctx.n_attributes)]
    lines.extend(ctx.objects)
    lines.extend(ctx.attributes)
    width = ctx.n_attributes
    for row in ctx.rows:
        lines.append("".join("X" if row >> m & 1 else "." for m in range(width)))
    return "\n".join(lines) + "\n"


def parse_context(text: str | bytes) -> FormalContext:
    """Parse the Burmeister layout written by :func:`serialize_context`."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"context file is not UTF-8: {exc}", offset=exc.start) from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [line[:-1] if line.endswith("\r") else line for line in lines]
    if not any(line.strip() for line in lines):
        raise ParseError("empty context file", line=1)
    if lines[0].strip() != "B":
        raise ParseError(f"expected 'B' header, found {lines[0]!r}", line=1)
    counts = []
    for lineno in (2, 3):
        if len(lines) < lineno:
            raise ParseError("missing object/attribute count", line=lineno)
        try:
            value = int(lines[lineno - 1].strip())
        except ValueError:
            raise ParseError(f"count {lines[lineno - 1]!r} is not an integer", line=lineno) from None
        if value < 0:
            raise ParseError(f"negative count {value}", line=lineno)
        counts.append(value)
    n_obj, n_att = counts
    expected = 3 + n_obj + n_att + n_obj
    for k in range(len(lines) - 1, expected - 1, -1):
        if lines[k].strip():
            raise ParseError("unexpected content after the incidence rows", line=k + 1)
    del lines[expected:]
    if n_att == 0 and len(lines) >= expected - n_obj:
        # rows of a zero-attribute context are empty lines, possibly trimmed away
        lines.extend([""] * (expected - len(lines)))
    if len(lines) < expected:
        raise ParseError(f"file ends after {len(lines)} lines, {expected} expected", line=len(lines) + 1)
    objects = lines[3:3 + n_obj]
    attributes = lines[3 + n_obj:3 + n_obj + n_att]
    for kind, names, first in (("object", objects, 4), ("attribute", attributes, 4 + n_obj)):
        seen = {}
        for k, name in enumerate(names):
            if name in seen:
                raise ParseError(f"duplicate {kind} identifier {name!r} (first on line {seen[name]})", line=first + k)
            seen[name] = first + k
    rows = []
    first_row = 4 + n_obj + n_att
    for k, line in enumerate(lines[first_row - 1:]):
        lineno = first_row + k
        if len(line) != n_att:
            raise ParseError(f"row has {len(line)} cells, expected {n_att}", line=lineno)
        row = 0
        for m, ch in enumerate(line):
            if ch == "X":
                row |= 1 << m
            elif ch != ".":
                raise ParseError(f"illegal incidence character {ch!r} at column {m + 1}", line=lineno)
        rows.append(row)
    return FormalContext(objects, attributes, rows)


@dataclass(frozen=True)
class Column:
    """One many-valued column: its name, declared value domain and missing marker."""

    name: str
    domain: tuple[str, ...]
    missing: str = "?"


@dataclass
class ManyValuedContext:
    """Raw categorical table: one row of value strings per object."""

    objects: list[str]
    columns: list[Column]
    cells: list[tuple[str, ...]] = field(repr=False)

    def __post_init__(self):
        if len(self.cells) != len(self.objects):
            raise DataError(f"{len(self.cells)} rows for {len(self.objects)} objects")
        domains = [set(c.domain) for c in self.columns]
        for r, row in enumerate(self.cells):
            if len(row) != len(self.columns):
                raise DataError(f"row {r} has {len(row)} cells, expected {len(self.columns)}")
            for c, value in enumerate(row):
                if value != self.columns[c].missing and value not in domains[c]:
                    raise DataError(
                        f"row {r}, column {c} ({self.columns[c].name!r}): "
                        f"value {value!r} outside declared domain"
                    )

    def head(self, n: int) -> "ManyValuedContext":
        return ManyValuedContext(self.objects[:n], self.columns, self.cells[:n])

    def rows_between(self, start: int, stop: int) -> "ManyValuedContext":
        return ManyValuedContext(self.objects[start:stop], self.columns, self.cells[start:stop])

    def __len__(self) -> int:
        return len(self.objects)

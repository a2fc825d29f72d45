"""Nominal scaling of many-valued tables into formal contexts.

Also reads the two input formats the scaler consumes: the schema file
(``name : v1,v2,... : missing``) and comma-separated data.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from pathlib import Path

from gccl.context import Column, FormalContext, ManyValuedContext
from gccl.errors import DataError, ParseError, SchemaError


class MissingPolicy(enum.Enum):
    NO_ATTRIBUTE = "none"  # a missing cell sets no bit in its column block
    OWN_ATTRIBUTE = "own"  # a missing cell sets a dedicated "col=<marker>" bit


@dataclass(frozen=True)
class NominalScale:
    """Per-column value-to-attribute mapping, in column then declared-domain order."""

    blocks: tuple[tuple[str, tuple[tuple[str, str], ...]], ...]
    policy: MissingPolicy = MissingPolicy.NO_ATTRIBUTE

    @property
    def attributes(self) -> list[str]:
        return [name for _, pairs in self.blocks for _, name in pairs]

    def __len__(self) -> int:
        return sum(len(pairs) for _, pairs in self.blocks)


def build_scale(mvc: ManyValuedContext, policy: MissingPolicy = MissingPolicy.NO_ATTRIBUTE) -> NominalScale:
    """Derive the nominal scale of ``mvc``'s declared schema.

    One attribute ``col=value`` per declared domain value; under
    ``OWN_ATTRIBUTE`` one extra ``col=<marker>`` attribute for each column in
    which a missing cell actually occurs.
    """
    seen: set[str] = set()
    blocks = []
    for c, column in enumerate(mvc.columns):
        if not column.domain:
            raise SchemaError(f"column {column.name!r} has an empty value domain")
        values = list(column.domain)
        if policy is MissingPolicy.OWN_ATTRIBUTE and any(row[c] == column.missing for row in mvc.cells):
            values.append(column.missing)
        pairs = []
        for value in values:
            name = f"{column.name}={value}"
            if name in seen:
                raise SchemaError(f"scaled attribute name {name!r} is produced twice")
            seen.add(name)
            pairs.append((value, name))
        blocks.append((column.name, tuple(pairs)))
    return NominalScale(tuple(blocks), policy)


def scale_rows(mvc: ManyValuedContext, scale: NominalScale, offset: int = 0) -> list[int]:
    """Scaled incidence rows (bit per scaled attribute) of every row of ``mvc``.

    ``offset`` is only used to report absolute row numbers in errors.
    """
    names = [name for name, _ in scale.blocks]
    if names != [c.name for c in mvc.columns]:
        raise SchemaError("scale was built for a different column layout")
    lookups = []
    base = 0
    for (_, pairs), column in zip(scale.blocks, mvc.columns):
        lookup = {value: 1 << (base + k) for k, (value, _) in enumerate(pairs)}
        if column.missing not in lookup:
            lookup[column.missing] = 0
        lookups.append(lookup)
        base += len(pairs)
    rows = []
    for r, cells in enumerate(mvc.cells):
        row = 0
        for c, value in enumerate(cells):
            try:
                row |= lookups[c][value]
            except KeyError:
                raise DataError(
                    f"row {offset + r}, column {c} ({mvc.columns[c].name!r}): value {value!r} not in scale"
                ) from None
        rows.append(row)
    return rows


def apply_scale(mvc: ManyValuedContext, scale: NominalScale) -> FormalContext:
    return FormalContext(mvc.objects, scale.attributes, scale_rows(mvc, scale))


def parse_schema(text: str) -> list[Column]:
    columns = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split(":")
        if len(parts) != 3:
            raise ParseError(f"expected 'name : v1,...,vk : missing', got {line!r}", line=lineno)
        name, values, missing = (p.strip() for p in parts)
        domain = tuple(v.strip() for v in values.split(",") if v.strip())
        if not name:
            raise ParseError("empty column name", line=lineno)
        if len(set(domain)) != len(domain):
            raise ParseError(f"column {name!r} repeats a domain value", line=lineno)
        if missing in domain:
            raise ParseError(f"column {name!r}: missing marker {missing!r} is also a domain value", line=lineno)
        columns.append(Column(name, domain, missing))
    if not columns:
        raise ParseError("schema declares no columns", line=1)
    if len({c.name for c in columns}) != len(columns):
        raise ParseError("duplicate column name in schema")
    return columns


def read_schema(path) -> list[Column]:
    return parse_schema(Path(path).read_text(encoding="utf-8"))


def parse_table(text: str, columns: list[Column], header: bool = True, limit: int | None = None,
                id_prefix: str = "o") -> ManyValuedContext:
    """Parse CSV rows against ``columns``.

    With a header row, schema columns are located by name and any other CSV
    column (e.g. a class label) is ignored. Without one, every row must have
    exactly one cell per schema column. Objects are named ``<prefix><row>``,
    numbering from 1 in file order.
    """
    reader = csv.reader(io.StringIO(text))
    positions = list(range(len(columns)))
    width = len(columns)
    first_line = 1
    if header:
        try:
            names = next(reader)
        except StopIteration:
            raise ParseError("CSV file is empty", line=1) from None
        names = [n.strip() for n in names]
        try:
            positions = [names.index(c.name) for c in columns]
        except ValueError:
            missing = [c.name for c in columns if c.name not in names]
            raise ParseError(f"CSV header lacks schema columns {missing}", line=1) from None
        width = len(names)
        first_line = 2
    objects, cells = [], []
    for k, record in enumerate(reader):
        if limit is not None and len(cells) >= limit:
            break
        lineno = first_line + k
        if not record or all(not v.strip() for v in record):
            continue
        if len(record) != width:
            raise ParseError(f"row has {len(record)} fields, expected {width}", line=lineno)
        row = tuple(record[p].strip() for p in positions)
        for c, value in enumerate(row):
            column = columns[c]
            if value != column.missing and value not in column.domain:
                raise DataError(f"line {lineno}, column {column.name!r}: value {value!r} outside declared domain")
        objects.append(f"{id_prefix}{len(cells) + 1}")
        cells.append(row)
    return ManyValuedContext(objects, list(columns), cells)


def read_table(path, columns: list[Column], header: bool = True, limit: int | None = None) -> ManyValuedContext:
    return parse_table(Path(path).read_text(encoding="utf-8"), columns, header=header, limit=limit)

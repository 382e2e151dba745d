"""CSV / JSON-schema loading, group-wise normalization and fuzzification."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .dea_core import Dataset, DmuRecord
from .errors import DomainError, ParseError
from .fuzzy import TriangularFuzzyNumber

ROLES = ("id", "group", "input", "output")
KINDS = ("crisp", "fuzzify", "fuzzy3")
FUZZY_SUFFIXES = ("_r", "_s", "_u")
SCALE_LOW, SCALE_HIGH = 1.0, 9.0
DEFAULT_GROUP = "all"


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    role: str
    kind: str = "crisp"

    def csv_columns(self) -> tuple:
        if self.kind == "fuzzy3":
            return tuple(self.name + sfx for sfx in FUZZY_SUFFIXES)
        return (self.name,)


@dataclass(frozen=True)
class SchemaConfig:
    columns: tuple

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        for col in self.columns:
            if col.role not in ROLES:
                raise DomainError(f"column {col.name!r}: unknown role {col.role!r}")
            if col.kind not in KINDS:
                raise DomainError(f"column {col.name!r}: unknown kind {col.kind!r}")
            if col.role in ("id", "group") and col.kind != "crisp":
                raise DomainError(f"column {col.name!r}: {col.role} columns cannot be fuzzy")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise DomainError("duplicate column names in schema")
        if sum(c.role == "id" for c in self.columns) != 1:
            raise DomainError("schema needs exactly one id column")
        if sum(c.role == "group" for c in self.columns) > 1:
            raise DomainError("schema allows at most one group column")
        if not self.inputs:
            raise DomainError("schema needs at least one input column")
        if not self.outputs:
            raise DomainError("schema needs at least one output column")

    @classmethod
    def from_mapping(cls, mapping: dict) -> "SchemaConfig":
        """Build from ``{"columns": {name: {"role": ..., "kind": ...}}}``."""
        if not isinstance(mapping, dict):
            raise DomainError("schema must be a JSON object")
        cols = mapping.get("columns", mapping)
        if not isinstance(cols, dict):
            raise DomainError("schema 'columns' must map names to descriptors")
        specs = []
        for name, desc in cols.items():
            if not isinstance(desc, dict) or "role" not in desc:
                raise DomainError(f"column {name!r}: descriptor needs a 'role'")
            specs.append(ColumnSpec(name, desc["role"], desc.get("kind", "crisp")))
        return cls(tuple(specs))

    def to_mapping(self) -> dict:
        cols = {}
        for c in self.columns:
            desc = {"role": c.role}
            if c.role in ("input", "output"):
                desc["kind"] = c.kind
            cols[c.name] = desc
        return {"columns": cols}

    @property
    def id_column(self) -> ColumnSpec:
        return next(c for c in self.columns if c.role == "id")

    @property
    def group_column(self):
        return next((c for c in self.columns if c.role == "group"), None)

    @property
    def inputs(self) -> tuple:
        return tuple(c for c in self.columns if c.role == "input")

    @property
    def outputs(self) -> tuple:
        return tuple(c for c in self.columns if c.role == "output")

    @property
    def attributes(self) -> tuple:
        return self.inputs + self.outputs

    def normalized(self) -> "SchemaConfig":
        """Schema of the data after :func:`normalize` (fuzzify columns become fuzzy3)."""
        return SchemaConfig(
            tuple(
                ColumnSpec(c.name, c.role, "fuzzy3" if c.kind == "fuzzify" else c.kind)
                for c in self.columns
            )
        )


def load_schema(path) -> SchemaConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FileNotFoundError(f"schema not found: {path}") from None
    try:
        mapping = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"schema is not valid JSON: {exc}") from None
    return SchemaConfig.from_mapping(mapping)


def _number(text: str, row: int, column: str) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise ParseError(f"non-numeric value {text!r}", row, column) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {text!r}", row, column)
    return value


def _positive(value: float, row: int, column: str) -> float:
    if value <= 0:
        raise ParseError(f"attribute must be strictly positive, got {value:g}", row, column)
    return value


def parse_dataset(csv_text: str, schema: SchemaConfig) -> dict:
    """Parse CSV text into ``{group: Dataset}``, keeping file order.

    Groups keep the order of their first appearance.
    """
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("no records") from None
    position = {name: k for k, name in enumerate(header)}
    for col in schema.columns:
        for name in col.csv_columns():
            if name not in position:
                raise ParseError("missing column", 1, name)

    id_col = schema.id_column.name
    group_col = schema.group_column.name if schema.group_column else None
    by_group: dict = {}
    seen = set()
    for line, cells in enumerate(reader, start=2):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} cells, found {len(cells)}", line)
        name = cells[position[id_col]].strip()
        if not name:
            raise ParseError("empty identifier", line, id_col)
        if name in seen:
            raise ParseError(f"duplicate DMU {name!r}", line, id_col)
        seen.add(name)
        group = cells[position[group_col]].strip() if group_col else DEFAULT_GROUP
        values = {}
        for col in schema.attributes:
            if col.kind == "fuzzy3":
                r, s, u = (
                    _positive(_number(cells[position[c]], line, c), line, c)
                    for c in col.csv_columns()
                )
                try:
                    values[col.name] = TriangularFuzzyNumber(r, s, u)
                except DomainError as exc:
                    raise ParseError(str(exc), line, col.name) from None
            else:
                raw = _number(cells[position[col.name]], line, col.name)
                values[col.name] = _positive(raw, line, col.name)
        rec = DmuRecord(
            name,
            group,
            tuple(values[c.name] for c in schema.inputs),
            tuple(values[c.name] for c in schema.outputs),
        )
        by_group.setdefault(group, []).append(rec)

    if not by_group:
        raise ParseError("no records")
    input_names = tuple(c.name for c in schema.inputs)
    output_names = tuple(c.name for c in schema.outputs)
    datasets = {}
    for group, records in by_group.items():
        try:
            datasets[group] = Dataset(tuple(records), input_names, output_names)
        except DomainError as exc:
            raise ParseError(f"group {group!r}: {exc}") from None
    return datasets


def read_dataset(path, schema: SchemaConfig) -> dict:
    return parse_dataset(Path(path).read_text(encoding="utf-8"), schema)


def _columns(ds: Dataset):
    """Yield ``(side, index, values)`` for every attribute column."""
    for i in range(ds.m):
        yield "inputs", i, [rec.inputs[i] for rec in ds.records]
    for j in range(ds.n):
        yield "outputs", j, [rec.outputs[j] for rec in ds.records]


def _group_max(values, column: str) -> float:
    top = max(values)
    if not top > 0:
        raise DomainError(f"column {column!r}: group maximum must be positive, got {top:g}")
    return top


def _saaty(v: float, top: float) -> float:
    return SCALE_LOW + (SCALE_HIGH - SCALE_LOW) * v / top


def _with_column(ds: Dataset, side: str, index: int, new_values) -> Dataset:
    records = []
    for rec, value in zip(ds.records, new_values):
        vals = list(getattr(rec, side))
        vals[index] = value
        if side == "inputs":
            records.append(DmuRecord(rec.name, rec.group, tuple(vals), rec.outputs))
        else:
            records.append(DmuRecord(rec.name, rec.group, rec.inputs, tuple(vals)))
    return ds.replace_records(records)


def _column_name(ds: Dataset, side: str, index: int) -> str:
    return (ds.input_names if side == "inputs" else ds.output_names)[index]


def _locate(ds: Dataset, column: str):
    if column in ds.input_names:
        return "inputs", ds.input_names.index(column)
    if column in ds.output_names:
        return "outputs", ds.output_names.index(column)
    raise KeyError(column)


def normalize_group(ds: Dataset, skip=()) -> Dataset:
    """Map every crisp value ``v`` to ``1 + 8 v / M`` with ``M`` the group column maximum.

    Columns holding fuzzy numbers, and columns named in ``skip``, are left as is.
    """
    for side, index, values in _columns(ds):
        name = _column_name(ds, side, index)
        if name in skip or any(isinstance(v, TriangularFuzzyNumber) for v in values):
            continue
        top = _group_max(values, name)
        ds = _with_column(ds, side, index, [_saaty(v, top) for v in values])
    return ds


def _round_half_up(x: float) -> int:
    return int(Decimal(repr(x)).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def fuzzify_column(ds: Dataset, column: str) -> Dataset:
    """Replace a raw crisp column by Saaty-scale triangles ``(c-1, c, c+1)`` clipped to [1, 9].

    ``c`` is ``1 + 8 v / M`` rounded half-up to the nearest integer.
    """
    side, index = _locate(ds, column)
    values = [getattr(rec, side)[index] for rec in ds.records]
    if any(isinstance(v, TriangularFuzzyNumber) for v in values):
        raise DomainError(f"column {column!r} is already fuzzy")
    top = _group_max(values, column)
    fuzzy = []
    for v in values:
        c = _round_half_up(_saaty(v, top))
        fuzzy.append(
            TriangularFuzzyNumber(max(c - 1, SCALE_LOW), c, min(c + 1, SCALE_HIGH))
        )
    return _with_column(ds, side, index, fuzzy)


def normalize(ds: Dataset, schema: SchemaConfig) -> Dataset:
    """Full raw-to-scale pipeline: normalize crisp columns, fuzzify designated ones."""
    fuzzify = [c.name for c in schema.attributes if c.kind == "fuzzify"]
    ds = normalize_group(ds, skip=fuzzify)
    for name in fuzzify:
        ds = fuzzify_column(ds, name)
    return ds


def _format(value: float, decimals) -> str:
    if decimals is None:
        return repr(float(value))
    return f"{value:.{decimals}f}"


def serialize_datasets(datasets, schema: SchemaConfig, decimals=None) -> str:
    """Write datasets back to CSV under ``schema`` (fuzzy cells as ``_r,_s,_u`` columns).

    With ``decimals=None`` floats are written with ``repr`` so that parsing the
    output reproduces the datasets exactly.
    """
    if isinstance(datasets, Dataset):
        datasets = [datasets]
    elif isinstance(datasets, dict):
        datasets = list(datasets.values())
    header = [name for col in schema.columns for name in col.csv_columns()]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for ds in datasets:
        for rec in ds.records:
            values = dict(zip(ds.input_names, rec.inputs))
            values.update(zip(ds.output_names, rec.outputs))
            row = []
            for col in schema.columns:
                if col.role == "id":
                    row.append(rec.name)
                elif col.role == "group":
                    row.append(rec.group)
                elif col.kind == "fuzzy3":
                    f = values[col.name]
                    if not isinstance(f, TriangularFuzzyNumber):
                        f = TriangularFuzzyNumber.crisp(f)
                    row.extend(_format(x, decimals) for x in f)
                else:
                    v = values[col.name]
                    if isinstance(v, TriangularFuzzyNumber):
                        raise DomainError(f"column {col.name!r} is fuzzy; schema says {col.kind}")
                    row.append(_format(v, decimals))
            writer.writerow(row)
    return buf.getvalue()

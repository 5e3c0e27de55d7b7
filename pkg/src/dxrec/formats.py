"""On-disk codecs: the strict matrix CSV dialect and the generator-spec JSON
schema, both with located diagnostics and canonical round-tripping serializers.

The CSV dialect is deliberately rigid (comma separator, no quoting, no
embedded commas) because the matrix is a data-exchange contract, not a
spreadsheet. Every parse failure names its 1-based row/column or JSON path.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .generators import (
    DisjointPairs,
    DisorderSpec,
    FixedSet,
    GeneratorSpec,
    MultiSetChoice,
    SpecValidationError,
    SubsetChoice,
    TieredChoice,
    validate_disorder,
)
from .matrix import ProfileMatrix
from .model import (
    DomainError,
    InvalidLabelError,
    InvalidSymptomError,
    SymptomSpace,
    validate_label,
    validate_symptom_name,
)

LABEL_COLUMN = "disorder"


class FormatError(DomainError):
    """Base for all parse failures; subclasses carry a precise location."""


class EncodingError(FormatError):
    def __init__(self, offset: int):
        self.offset = offset
        super().__init__(f"input is not valid UTF-8 (byte {offset + 1})")


class EmptyFileError(FormatError):
    def __init__(self) -> None:
        super().__init__("file is empty (row 1)")


class NonRectangularError(FormatError):
    def __init__(self, row: int, got: int, expected: int):
        self.row = row
        self.got = got
        self.expected = expected
        super().__init__(f"row {row} has {got} cells, expected {expected}")


class BadCellError(FormatError):
    def __init__(self, row: int, col: int, text: str, reason: str = "expected 0 or 1"):
        self.row = row
        self.col = col
        self.text = text
        super().__init__(f"row {row}, col {col}: bad cell {text!r} ({reason})")


class DuplicateSymptomColumnError(FormatError):
    def __init__(self, name: str, col: int):
        self.name = name
        self.col = col
        super().__init__(f"row 1, col {col}: duplicate symptom column {name!r}")


class SchemaError(FormatError):
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


def _decode(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise EncodingError(e.start) from None


# ---------------------------------------------------------------------------
# matrix CSV

def parse_matrix(data: bytes | str) -> tuple[ProfileMatrix, tuple[str, ...]]:
    """Parse the strict matrix CSV; returns the matrix and dedupe warnings.

    Line 1 is `<label-column>,<sym1>,...`; every further line is a disorder
    label followed by 0/1 cells. Duplicate (label, profile) rows are dropped
    with a warning because a disorder is a set of profiles.
    """
    text = _decode(data)
    if text == "":
        raise EmptyFileError()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()  # canonical trailing newline
    if not lines or lines[0] == "":
        raise EmptyFileError()

    header = lines[0].split(",")
    if header[0] == "":
        raise BadCellError(1, 1, "", reason="label column name must be non-empty")
    symptoms: list[str] = []
    seen: set[str] = set()
    for col, name in enumerate(header[1:], start=2):
        try:
            validate_symptom_name(name)
        except InvalidSymptomError as e:
            raise BadCellError(1, col, name, reason=str(e)) from None
        if name in seen:
            raise DuplicateSymptomColumnError(name, col)
        seen.add(name)
        symptoms.append(name)
    space = SymptomSpace(symptoms)
    width = len(header)

    labels: list[str] = []
    bits = np.zeros((max(len(lines) - 1, 0), len(symptoms)), dtype=np.uint8)
    warnings: list[str] = []
    seen_rows: set[tuple[str, bytes]] = set()
    kept = 0
    for row_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != width:
            raise NonRectangularError(row_no, len(cells), width)
        label = cells[0]
        try:
            validate_label(label)
        except InvalidLabelError as e:
            raise BadCellError(row_no, 1, label, reason=str(e)) from None
        for col, cell in enumerate(cells[1:], start=2):
            if cell == "0":
                bits[kept, col - 2] = 0
            elif cell == "1":
                bits[kept, col - 2] = 1
            else:
                raise BadCellError(row_no, col, cell)
        key = (label, bits[kept].tobytes())
        if key in seen_rows:
            warnings.append(
                f"row {row_no}: duplicate profile for disorder {label!r} ignored"
            )
            continue
        seen_rows.add(key)
        labels.append(label)
        kept += 1

    matrix = ProfileMatrix(space, labels, bits[:kept], dedupe=False)
    return matrix, tuple(warnings)


def serialize_matrix(matrix: ProfileMatrix) -> bytes:
    """Canonical CSV: LF endings, no quoting, rows in stored order."""
    lines = [",".join([LABEL_COLUMN, *matrix.space.symptoms])]
    for i, label in enumerate(matrix.labels):
        cells = [label]
        cells.extend("1" if b else "0" for b in matrix.bits[i])
        lines.append(",".join(cells))
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# generator-spec JSON

_GENERATOR_KEYS = {
    "G0": {"type", "set"},
    "G1": {"type", "set", "k"},
    "G2": {"type", "sets", "k"},
    "G3": {"type", "lists"},
    "G4": {"type", "lists", "mins"},
}


def _expect_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {value!r}")
    return value


def _symptom_array(value: Any, path: str) -> frozenset[str]:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected an array of symptom strings, got {type(value).__name__}")
    out: set[str] = set()
    for i, item in enumerate(value):
        if not isinstance(item, str):
            raise SchemaError(f"{path}[{i}]", f"expected a string, got {type(item).__name__}")
        try:
            validate_symptom_name(item)
        except InvalidSymptomError as e:
            raise SchemaError(f"{path}[{i}]", str(e)) from None
        if item in out:
            raise SchemaError(f"{path}[{i}]", f"duplicate symptom {item!r}")
        out.add(item)
    return frozenset(out)


def _set_array(value: Any, path: str) -> tuple[frozenset[str], ...]:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected an array of symptom arrays, got {type(value).__name__}")
    return tuple(_symptom_array(item, f"{path}[{i}]") for i, item in enumerate(value))


def _parse_generator(record: Any, path: str) -> GeneratorSpec:
    if not isinstance(record, dict):
        raise SchemaError(path, f"expected an object, got {type(record).__name__}")
    kind = record.get("type")
    if kind not in _GENERATOR_KEYS:
        raise SchemaError(f"{path}.type", f"unknown generator type {kind!r}")
    extra = set(record) - _GENERATOR_KEYS[kind]
    if extra:
        raise SchemaError(path, f"unexpected keys {sorted(extra)} for type {kind}")
    missing = _GENERATOR_KEYS[kind] - set(record)
    if missing:
        raise SchemaError(path, f"missing keys {sorted(missing)} for type {kind}")

    if kind == "G0":
        return FixedSet(_symptom_array(record["set"], f"{path}.set"))
    if kind == "G1":
        return SubsetChoice(
            _symptom_array(record["set"], f"{path}.set"),
            _expect_int(record["k"], f"{path}.k"),
        )
    if kind == "G2":
        return MultiSetChoice(
            _set_array(record["sets"], f"{path}.sets"),
            _expect_int(record["k"], f"{path}.k"),
        )
    lists = record["lists"]
    if not isinstance(lists, list) or len(lists) != 2:
        raise SchemaError(f"{path}.lists", "expected exactly two lists of symptom sets")
    list_a = _set_array(lists[0], f"{path}.lists[0]")
    list_b = _set_array(lists[1], f"{path}.lists[1]")
    if kind == "G3":
        return DisjointPairs(list_a, list_b)
    mins = record["mins"]
    if not isinstance(mins, list) or len(mins) != 3:
        raise SchemaError(f"{path}.mins", "expected a triple [r, s, t]")
    r, s, t = (_expect_int(v, f"{path}.mins[{i}]") for i, v in enumerate(mins))
    return TieredChoice(list_a, list_b, r, s, t)


def parse_spec_object(obj: Any, path: str = "$") -> DisorderSpec:
    """Build and fully validate a DisorderSpec from decoded JSON."""
    if not isinstance(obj, dict):
        raise SchemaError(path, f"expected an object, got {type(obj).__name__}")
    extra = set(obj) - {"name", "generators"}
    if extra:
        raise SchemaError(path, f"unexpected keys {sorted(extra)}")
    if "name" not in obj:
        raise SchemaError(f"{path}.name", "missing")
    if "generators" not in obj:
        raise SchemaError(f"{path}.generators", "missing")
    name = obj["name"]
    if not isinstance(name, str):
        raise SchemaError(f"{path}.name", f"expected a string, got {type(name).__name__}")
    try:
        validate_label(name)
    except InvalidLabelError as e:
        raise SchemaError(f"{path}.name", str(e)) from None
    gens_raw = obj["generators"]
    if not isinstance(gens_raw, list):
        raise SchemaError(f"{path}.generators", "expected an array")
    if not gens_raw:
        raise SpecValidationError("at least one generator required", f"{path}.generators")
    generators = tuple(
        _parse_generator(g, f"{path}.generators[{i}]") for i, g in enumerate(gens_raw)
    )
    spec = DisorderSpec(name, generators)
    validate_disorder(spec, path)
    return spec


def parse_spec(data: bytes | str) -> DisorderSpec:
    text = _decode(data)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("$", f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})") from None
    return parse_spec_object(obj)


def spec_to_object(spec: DisorderSpec) -> dict:
    """Canonical JSON form: sorted symptom arrays, surface G0 kept as G0."""
    records: list[dict] = []
    for g in spec.generators:
        if isinstance(g, FixedSet):
            records.append({"type": "G0", "set": sorted(g.symptoms)})
        elif isinstance(g, SubsetChoice):
            records.append({"type": "G1", "set": sorted(g.symptoms), "k": g.min_size})
        elif isinstance(g, MultiSetChoice):
            records.append(
                {"type": "G2", "sets": [sorted(s) for s in g.sets], "k": g.min_sets}
            )
        elif isinstance(g, DisjointPairs):
            records.append(
                {
                    "type": "G3",
                    "lists": [
                        [sorted(s) for s in g.list_a],
                        [sorted(s) for s in g.list_b],
                    ],
                }
            )
        elif isinstance(g, TieredChoice):
            records.append(
                {
                    "type": "G4",
                    "lists": [
                        [sorted(s) for s in g.list_a],
                        [sorted(s) for s in g.list_b],
                    ],
                    "mins": [g.min_a, g.min_b, g.min_total],
                }
            )
        else:
            raise SpecValidationError(f"unknown generator type {type(g).__name__}")
    return {"name": spec.label, "generators": records}


def serialize_spec(spec: DisorderSpec) -> bytes:
    return (json.dumps(spec_to_object(spec), indent=2, ensure_ascii=False) + "\n").encode("utf-8")

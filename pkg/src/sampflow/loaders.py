"""Build the initial sampling frame from CSV or JSON files.

CSV follows RFC 4180 (comma, double-quote escaping, UTF-8, header row
required). JSON is a top-level array of flat objects. An empty CSV cell,
a JSON ``null`` or an absent JSON key is a missing value. Duplicate key
values abort the load.
"""
from __future__ import annotations

import csv
import datetime as dt
import json
import math
import os
import re
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import (DuplicateKeyError, DuplicateRegistrationError, LoaderError,
                     MissingColumnError, NotAnArrayError, UnknownLoaderKindError,
                     UnparsableValueError)
from .model import Artifact, DataSet, FieldKind, MetadataSchema, Value

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

_INT_RE = re.compile(r"[+-]?\d+")
_DATE_RE = re.compile(r"(\d{4})-(\d{2})-(\d{2})")
_BOOLS = {"true": True, "false": False, "1": True, "0": False}


@dataclass(frozen=True)
class LoaderSpec:
    kind: str
    path: str
    schema: MetadataSchema

    def __post_init__(self):
        if not self.path:
            raise ValueError("loader path must be non-empty")


def parse_cell(kind: FieldKind, raw: str, row: int, column: str) -> Value:
    """Parse one CSV cell. Empty text is a missing value."""
    if raw == "":
        return None
    if kind is FieldKind.TEXT:
        return raw
    text = raw.strip()
    if kind is FieldKind.INT:
        if not _INT_RE.fullmatch(text):
            raise UnparsableValueError(row, column, raw, "not an integer")
        value = int(text)
        if not INT64_MIN <= value <= INT64_MAX:
            raise UnparsableValueError(row, column, raw, "outside the 64-bit range")
        return value
    if kind is FieldKind.REAL:
        try:
            value = float(text)
        except ValueError:
            raise UnparsableValueError(row, column, raw, "not a number") from None
        if not math.isfinite(value):
            raise UnparsableValueError(row, column, raw, "not finite")
        return value
    if kind is FieldKind.DATE:
        m = _DATE_RE.fullmatch(text)
        if m is None:
            raise UnparsableValueError(row, column, raw, "expected YYYY-MM-DD")
        try:
            return dt.date(int(m[1]), int(m[2]), int(m[3]))
        except ValueError as exc:
            raise UnparsableValueError(row, column, raw, str(exc)) from None
    if kind is FieldKind.BOOL:
        try:
            return _BOOLS[text.lower()]
        except KeyError:
            raise UnparsableValueError(row, column, raw, "expected true or false") from None
    raise AssertionError(kind)  # pragma: no cover


def parse_json_value(kind: FieldKind, raw: object, row: int, column: str) -> Value:
    if raw is None:
        return None
    if isinstance(raw, (dict, list)):
        raise UnparsableValueError(row, column, raw, "nested values are not supported")
    if kind is FieldKind.TEXT:
        if not isinstance(raw, str):
            raise UnparsableValueError(row, column, raw, "expected a string")
        return raw if raw != "" else None
    if kind is FieldKind.BOOL:
        if not isinstance(raw, bool):
            raise UnparsableValueError(row, column, raw, "expected true or false")
        return raw
    if kind is FieldKind.INT:
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise UnparsableValueError(row, column, raw, "expected an integer")
        if not INT64_MIN <= raw <= INT64_MAX:
            raise UnparsableValueError(row, column, raw, "outside the 64-bit range")
        return raw
    if kind is FieldKind.REAL:
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise UnparsableValueError(row, column, raw, "expected a number")
        value = float(raw)
        if not math.isfinite(value):
            raise UnparsableValueError(row, column, raw, "not finite")
        return value
    if kind is FieldKind.DATE:
        if not isinstance(raw, str):
            raise UnparsableValueError(row, column, raw, "expected a YYYY-MM-DD string")
        return parse_cell(kind, raw, row, column)
    raise AssertionError(kind)  # pragma: no cover


def build_dataset(rows: Iterable[dict[str, Value]], schema: MetadataSchema,
                  label: str) -> DataSet:
    """Wrap parsed rows as artifacts, enforcing unique non-empty keys."""
    key = schema.key_field
    seen: set[str] = set()
    members = []
    for i, values in enumerate(rows, start=1):
        raw_key = values[key]
        if raw_key is None:
            raise UnparsableValueError(i, key, "", "the key field cannot be empty")
        aid = str(raw_key)
        if aid in seen:
            raise DuplicateKeyError(aid)
        seen.add(aid)
        members.append(Artifact(aid, values))
    return DataSet(label, 0, tuple(members), schema)


def read_csv_rows(path: str, schema: MetadataSchema) -> Iterable[dict[str, Value]]:
    names = schema.names
    kinds = schema.kinds
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh, strict=True)
        try:
            header = next(reader)
        except StopIteration:
            raise LoaderError(f"{path}: missing header row") from None
        except csv.Error as exc:
            raise LoaderError(f"{path}: {exc}") from None
        positions = {}
        for name in names:
            if name not in header:
                raise MissingColumnError(name, path)
            positions[name] = header.index(name)
        width = len(header)
        try:
            for lineno, row in enumerate(reader, start=1):
                if not row:
                    continue
                if len(row) != width:
                    raise LoaderError(
                        f"{path}: data row {lineno} has {len(row)} cells, header has {width}")
                yield {n: parse_cell(kinds[n], row[positions[n]], lineno, n) for n in names}
        except csv.Error as exc:
            raise LoaderError(f"{path}: {exc}") from None


def read_json_rows(path: str, schema: MetadataSchema) -> Iterable[dict[str, Value]]:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LoaderError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, list):
        raise NotAnArrayError(f"{path}: top level is not an array")
    kinds = schema.kinds
    for i, obj in enumerate(data, start=1):
        if not isinstance(obj, dict):
            raise NotAnArrayError(f"{path}: element {i} is not an object")
        yield {n: parse_json_value(k, obj.get(n), i, n) for n, k in kinds.items()}


def load_csv(spec: LoaderSpec) -> DataSet:
    return build_dataset(read_csv_rows(spec.path, spec.schema), spec.schema,
                         os.path.basename(spec.path))


def load_json(spec: LoaderSpec) -> DataSet:
    return build_dataset(read_json_rows(spec.path, spec.schema), spec.schema,
                         os.path.basename(spec.path))


def csv_columns(path: str) -> list[str]:
    with open(path, newline="", encoding="utf-8-sig") as fh:
        try:
            return next(csv.reader(fh))
        except StopIteration:
            raise LoaderError(f"{path}: missing header row") from None


def json_columns(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise NotAnArrayError(f"{path}: top level is not an array")
    cols: dict[str, None] = {}
    for obj in data:
        if isinstance(obj, dict):
            cols.update(dict.fromkeys(obj))
    return list(cols)


Loader = Callable[[LoaderSpec], DataSet]


class LoaderRegistry:
    def __init__(self):
        self._factories: dict[str, Loader] = {}

    def register(self, kind: str, factory: Loader) -> None:
        if kind in self._factories:
            raise DuplicateRegistrationError(f"loader kind {kind!r} is already registered")
        self._factories[kind] = factory

    def resolve(self, spec: LoaderSpec | str) -> Loader:
        kind = spec if isinstance(spec, str) else spec.kind
        try:
            return self._factories[kind]
        except KeyError:
            raise UnknownLoaderKindError(f"no loader registered for {kind!r}") from None

    def load(self, spec: LoaderSpec) -> DataSet:
        return self.resolve(spec)(spec)

    def kinds(self) -> list[str]:
        return sorted(self._factories)


def default_registry() -> LoaderRegistry:
    reg = LoaderRegistry()
    reg.register("csv", load_csv)
    reg.register("json", load_json)
    return reg


registry = default_registry()

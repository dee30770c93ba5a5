"""Domain types: metadata schemas, artifacts and (nested) data sets.

Metadata values are plain Python objects: ``int``, ``float``, ``str``,
``datetime.date``, ``bool``, with ``None`` standing for a missing value.
Which Python type is legal for a field is decided by the field's
:class:`FieldKind`.
"""
from __future__ import annotations

import datetime as dt
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import UnknownFieldError

Value = Union[int, float, str, dt.date, bool, None]

MISSING = None


class FieldKind(str, Enum):
    INT = "int"
    REAL = "real"
    TEXT = "text"
    DATE = "date"
    BOOL = "bool"

    @property
    def is_numeric(self) -> bool:
        return self in (FieldKind.INT, FieldKind.REAL)

    @property
    def is_orderable(self) -> bool:
        return self in (FieldKind.INT, FieldKind.REAL, FieldKind.DATE)


def value_matches(kind: FieldKind, value: Value) -> bool:
    """True when ``value`` is a legal (non-missing) value for ``kind``."""
    if kind is FieldKind.BOOL:
        return isinstance(value, bool)
    if kind is FieldKind.INT:
        return isinstance(value, int) and not isinstance(value, bool)
    if kind is FieldKind.REAL:
        return (isinstance(value, (int, float)) and not isinstance(value, bool)
                and math.isfinite(value))
    if kind is FieldKind.TEXT:
        return isinstance(value, str)
    if kind is FieldKind.DATE:
        return isinstance(value, dt.date) and not isinstance(value, dt.datetime)
    return False


@dataclass(frozen=True)
class MetadataSchema:
    entries: tuple[tuple[str, FieldKind], ...]
    key_field: str

    def __post_init__(self):
        object.__setattr__(self, "entries",
                           tuple((n, FieldKind(k)) for n, k in self.entries))
        names = [n for n, _ in self.entries]
        if any(not n for n in names):
            raise ValueError("field names must be non-empty")
        if len(set(names)) != len(names):
            dupes = sorted(n for n, c in Counter(names).items() if c > 1)
            raise ValueError(f"duplicate field names: {', '.join(dupes)}")
        kinds = dict(self.entries)
        if self.key_field not in kinds:
            raise ValueError(f"key field {self.key_field!r} is not declared")
        if kinds[self.key_field] not in (FieldKind.TEXT, FieldKind.INT):
            raise ValueError("key field must be of kind text or int")

    @cached_property
    def kinds(self) -> dict[str, FieldKind]:
        return dict(self.entries)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.entries]

    def kind(self, name: str) -> FieldKind:
        try:
            return self.kinds[name]
        except KeyError:
            raise UnknownFieldError(name) from None

    def __contains__(self, name: object) -> bool:
        return name in self.kinds

    def extend(self, entries: Iterable[tuple[str, FieldKind]]) -> "MetadataSchema":
        return MetadataSchema(self.entries + tuple(entries), self.key_field)


@dataclass(frozen=True, slots=True)
class Artifact:
    """One identified record. ``values`` holds every schema field."""

    id: str
    values: dict[str, Value]

    def __getitem__(self, name: str) -> Value:
        return self.values[name]


@dataclass(frozen=True, eq=False)
class DataSet:
    """Ordered, duplicate-free collection of artifacts (depth 0) or of
    data sets one level shallower (depth >= 1).

    ``set_id`` is the execution-trace ordinal; nested sets produced by
    grouping operators are not trace nodes and carry ``None``, with
    ``origin`` naming the traced set they were derived from.
    """

    label: str
    depth: int
    members: tuple
    schema: MetadataSchema
    set_id: int | None = None
    origin: int | None = None

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator:
        return iter(self.members)

    @property
    def artifacts(self) -> tuple[Artifact, ...]:
        if self.depth != 0:
            raise TypeError("artifacts are only defined on depth-0 sets")
        return self.members

    def ids(self) -> list[str]:
        return [a.id for a in self.artifacts]

    @cached_property
    def id_index(self) -> dict[str, int]:
        return {a.id: i for i, a in enumerate(self.artifacts)}

    def values(self, name: str) -> list[Value]:
        self.schema.kind(name)
        return [a.values[name] for a in self.artifacts]

    def leaves(self) -> list["DataSet"]:
        """Depth-0 descendants in order."""
        if self.depth == 0:
            return [self]
        out = []
        for child in self.members:
            out.extend(child.leaves())
        return out

    def same_content(self, other: "DataSet") -> bool:
        """Structural equality ignoring label and set_id."""
        if (self.depth, self.schema) != (other.depth, other.schema):
            return False
        if len(self) != len(other):
            return False
        if self.depth == 0:
            return all(a.id == b.id and a.values == b.values
                       for a, b in zip(self.members, other.members))
        return all(a.same_content(b) for a, b in zip(self.members, other.members))

    def with_identity(self, set_id: int | None, label: str | None = None) -> "DataSet":
        return DataSet(label if label is not None else self.label, self.depth,
                       self.members, self.schema, set_id, self.origin)


def member_key(member) -> object:
    """Identity used for dedup and set algebra."""
    if isinstance(member, Artifact):
        return member.id
    if member.set_id is not None:
        return ("set", member.set_id)
    return ("obj", id(member))


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


def validate_dataset(d: DataSet) -> list[Violation]:
    """Return one violation per broken DataSet invariant (empty when valid)."""
    out: list[Violation] = []
    if d.depth < 0:
        out.append(Violation("depth-mismatch", f"negative depth {d.depth}"))
        return out
    if d.depth == 0:
        seen: set[str] = set()
        reported: set[str] = set()
        for a in d.members:
            if not isinstance(a, Artifact):
                out.append(Violation("depth-mismatch", "depth-0 set holds a non-artifact"))
                continue
            if not a.id:
                out.append(Violation("empty-id", "artifact with empty id"))
            if a.id in seen and a.id not in reported:
                out.append(Violation("duplicate-id", a.id))
                reported.add(a.id)
            seen.add(a.id)
            missing = [n for n in d.schema.names if n not in a.values]
            if missing:
                out.append(Violation("missing-field", f"{a.id}: {', '.join(missing)}"))
        return out
    for i, child in enumerate(d.members):
        if not isinstance(child, DataSet):
            out.append(Violation("depth-mismatch", f"child {i} is not a set"))
            continue
        if child.depth != d.depth - 1:
            out.append(Violation("depth-mismatch",
                                 f"child {i} has depth {child.depth}, expected {d.depth - 1}"))
        if child.schema != d.schema:
            out.append(Violation("schema-mismatch", f"child {i} has a different schema"))
        out.extend(validate_dataset(child))
    return out


# -- descriptive statistics --------------------------------------------------


@dataclass(frozen=True)
class DescriptiveSummary:
    field: str
    kind: FieldKind
    count: int  # non-missing values
    missing: int
    mean: Value = None
    median: Value = None
    std: float | None = None
    mode: Value = None
    min: Value = None
    max: Value = None
    q1: Value = None
    q3: Value = None
    frequencies: dict | None = None

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"field": self.field, "kind": self.kind.value,
                             "count": self.count, "missing": self.missing}
        if self.frequencies is not None:
            d["frequencies"] = {str(k) if not isinstance(k, bool) else str(k).lower(): v
                                for k, v in self.frequencies.items()}
            m = self.mode
            d["mode"] = str(m).lower() if isinstance(m, bool) else m
            return d
        for name in ("mean", "median", "std", "mode", "min", "max", "q1", "q3"):
            v = getattr(self, name)
            d[name] = v.isoformat() if isinstance(v, dt.date) else v
        return d


def _from_ordinal(x: float) -> dt.date:
    return dt.date.fromordinal(int(math.floor(x + 0.5)))


def smallest_mode(values: Sequence) -> Value:
    """Most frequent value; ties go to the smallest value."""
    if not values:
        return None
    counts = Counter(values)
    top = max(counts.values())
    return min(v for v, c in counts.items() if c == top)


def summarize_values(name: str, kind: FieldKind, values: Sequence[Value]) -> DescriptiveSummary:
    present = [v for v in values if v is not None]
    missing = len(values) - len(present)
    if not kind.is_orderable:
        freq = Counter(present)
        # sorted by value so the table does not depend on member order
        table = dict(sorted(freq.items(), key=lambda kv: (str(type(kv[0])), kv[0])))
        return DescriptiveSummary(name, kind, len(present), missing,
                                  mode=smallest_mode(present), frequencies=table)
    if not present:
        return DescriptiveSummary(name, kind, 0, missing)
    is_date = kind is FieldKind.DATE
    nums = [v.toordinal() for v in present] if is_date else present
    arr = np.sort(np.asarray(nums, dtype=np.float64))
    mean = float(arr.mean())
    median = float(np.median(arr))
    q1, q3 = (float(q) for q in np.quantile(arr, [0.25, 0.75]))
    std = float(arr.std(ddof=1)) if arr.size > 1 else None
    mode = smallest_mode(nums)
    lo, hi = min(nums), max(nums)
    if is_date:
        conv = _from_ordinal
        return DescriptiveSummary(name, kind, len(present), missing,
                                  mean=conv(mean), median=conv(median), std=std,
                                  mode=dt.date.fromordinal(mode),
                                  min=dt.date.fromordinal(lo), max=dt.date.fromordinal(hi),
                                  q1=conv(q1), q3=conv(q3))
    return DescriptiveSummary(name, kind, len(present), missing, mean=mean, median=median,
                              std=std, mode=mode, min=lo, max=hi, q1=q1, q3=q3)


def dataset_summary(d: DataSet, field: str) -> DescriptiveSummary:
    """Descriptive statistics of one metadata field over a depth-0 set."""
    kind = d.schema.kind(field)
    if d.depth != 0:
        raise TypeError("dataset_summary needs a depth-0 set")
    return summarize_values(field, kind, [a.values[field] for a in d.members])


def numeric_view(kind: FieldKind, values: Iterable[Value]) -> tuple[np.ndarray, int]:
    """Non-missing values as float64 (dates as ordinals) plus the missing count."""
    out = []
    missing = 0
    for v in values:
        if v is None:
            missing += 1
        elif kind is FieldKind.DATE:
            out.append(v.toordinal())
        else:
            out.append(v)
    return np.asarray(out, dtype=np.float64), missing

"""Execution trace: every traced set, its lineage, and per-field summaries."""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterable

from ..model import DataSet, FieldKind, summarize_values
from ..stats.describe import histogram

DEFAULT_BINS = 20


@dataclass
class TraceNode:
    set_id: int
    label: str
    parents: tuple[int, ...]
    kind: str
    params: dict[str, Any]
    size: int
    depth: int
    fields: tuple[tuple[str, FieldKind], ...]
    info: dict[str, Any] = field(default_factory=dict)
    summaries: dict[str, dict] = field(default_factory=dict)
    histograms: dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "set_id": self.set_id,
            "label": self.label,
            "parents": list(self.parents),
            "kind": self.kind,
            "params": self.params,
            "size": self.size,
            "depth": self.depth,
            "fields": [[n, k.value] for n, k in self.fields],
            "info": self.info,
            "summaries": self.summaries,
            "histograms": self.histograms,
        }


@dataclass
class GroupRecord:
    """A fan-out step (group, stratified, cluster, quota) and the traced
    sets that make up its output."""

    kind: str
    label: str
    input: int
    params: dict[str, Any]
    children: list[int]  # every stratum/branch leaf formed
    selected: list[int]  # leaves that belong to the output set

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "label": self.label, "input": self.input,
                "params": self.params, "children": self.children,
                "selected": self.selected}


@dataclass
class ExecutionTrace:
    nodes: list[TraceNode] = field(default_factory=list)
    groups: list[GroupRecord] = field(default_factory=list)
    final: list[int] = field(default_factory=list)
    final_depth: int = 0

    def node(self, set_id: int) -> TraceNode:
        return self.nodes[set_id]

    def edges(self) -> list[tuple[int, int, TraceNode]]:
        """(parent, child, child node) in child set_id order."""
        return [(p, n.set_id, n) for n in self.nodes for p in n.parents]

    def to_dict(self) -> dict[str, Any]:
        return {"nodes": [n.to_dict() for n in self.nodes],
                "groups": [g.to_dict() for g in self.groups],
                "final": {"set_ids": self.final, "depth": self.final_depth}}


class Tracer:
    """Assigns consecutive set ids and records trace nodes as operators run.

    ``summary_fields`` selects the fields summarized on every node; fields
    missing from a node's schema are skipped.
    """

    def __init__(self, summary_fields: Iterable[str] = (), bins: int = DEFAULT_BINS):
        self.trace = ExecutionTrace()
        self.datasets: dict[int, DataSet] = {}
        self.summary_fields = list(summary_fields)
        self.bins = bins
        self._scope: list[str] = []

    @contextmanager
    def scope(self, name: str):
        self._scope.append(name)
        try:
            yield
        finally:
            self._scope.pop()

    def record(self, ds: DataSet, kind: str, params: dict, parents: Iterable[int],
               info: dict | None = None, label: str | None = None) -> DataSet:
        set_id = len(self.trace.nodes)
        name = label or kind
        full = "/".join(self._scope + [name])
        out = ds.with_identity(set_id, full)
        node = TraceNode(set_id, full, tuple(parents), kind, params, len(ds), ds.depth,
                         ds.schema.entries, info or {})
        for name in self.summary_fields:
            if name not in ds.schema:
                continue
            kind_ = ds.schema.kind(name)
            values = [a.values[name] for a in ds.members]
            node.summaries[name] = summarize_values(name, kind_, values).to_dict()
            if kind_.is_orderable:
                node.histograms[name] = histogram(values, self.bins).to_dict()
        self.trace.nodes.append(node)
        self.datasets[set_id] = out
        return out

    def group(self, kind: str, input_id: int | None, params: dict,
              children: list[int], selected: list[int]) -> None:
        label = "/".join(self._scope + [kind])
        self.trace.groups.append(GroupRecord(kind, label, input_id, params, children, selected))


def leaf_ids(ds: DataSet) -> list[int]:
    return [leaf.set_id for leaf in ds.leaves() if leaf.set_id is not None]

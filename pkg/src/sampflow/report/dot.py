"""Graphviz DOT output: the executed trace and the static workflow shape."""
from __future__ import annotations

import json

from ..dsl.printer import format_constraint
from ..operators.trace import ExecutionTrace
from ..workflow import (AddMetadata, Cluster, Filter, Group, Intersection, Manual,
                        Quota, Random, Stratified, Systematic, Union_, Workflow)


def quote(text: str) -> str:
    """DOT double-quoted string; newlines become centred line breaks."""
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _param_text(key: str, value) -> str:
    if key == "ids":
        return f"{len(value)} listed"
    if isinstance(value, str):
        return value
    return json.dumps(value, ensure_ascii=False, sort_keys=True)


def edge_label(kind: str, params: dict) -> str:
    if not params:
        return kind
    if kind in ("filter", "stratum") and "constraint" in params:
        parts = [f"{k}={_param_text(k, v)}" for k, v in params.items() if k != "constraint"]
        return "\n".join([kind + (" " + " ".join(parts) if parts else ""),
                          params["constraint"]])
    return kind + " " + " ".join(f"{k}={_param_text(k, v)}" for k, v in params.items())


def emit_dot(trace: ExecutionTrace, name: str = "workflow") -> str:
    """One node per traced set, one edge per (parent, operator) pair."""
    lines = [f"digraph {quote(name)} {{", "    rankdir=TB;",
             '    node [shape=box, fontname="Helvetica"];',
             '    edge [fontname="Helvetica", fontsize=10];']
    final = set(trace.final)
    for n in trace.nodes:
        label = f"Set #{n.set_id} ({n.size})\n{n.label}"
        attrs = [f"label={quote(label)}"]
        if n.set_id in final:
            attrs.append("peripheries=2")
        lines.append(f"    s{n.set_id} [{', '.join(attrs)}];")
    for parent, child, node in trace.edges():
        lines.append(f"    s{parent} -> s{child} [label={quote(edge_label(node.kind, node.params))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def step_label(step) -> str:
    if isinstance(step, Filter):
        return "filter\n" + format_constraint(step.constraint)
    if isinstance(step, Random):
        return f"random n={step.n} seed={step.seed}"
    if isinstance(step, Systematic):
        return (f"systematic n={step.n}\norder_by {step.order_by} {step.direction} "
                f"seed={step.seed}")
    if isinstance(step, Manual):
        return f"manual ({len(step.ids)} ids)"
    if isinstance(step, Stratified):
        return f"stratified take={step.take} seed={step.seed}"
    if isinstance(step, Cluster):
        return f"cluster pick={step.pick} seed={step.seed}"
    if isinstance(step, Quota):
        return "quota"
    if isinstance(step, Union_):
        return "union"
    if isinstance(step, Intersection):
        return "intersection"
    if isinstance(step, AddMetadata):
        return f"add_metadata {step.kind}\n{step.path} join {step.join}"
    if isinstance(step, Group):
        return "group"
    raise TypeError(type(step).__name__)  # pragma: no cover


class _Static:
    def __init__(self):
        self.nodes: list[str] = []
        self.edges: list[tuple[int, int, str | None]] = []

    def node(self, label: str) -> int:
        self.nodes.append(label)
        return len(self.nodes) - 1

    def link(self, sources: list[int], target: int, label: str | None = None) -> None:
        for s in sources:
            self.edges.append((s, target, label))

    def chain(self, steps, sources: list[int], first_label: str | None = None) -> list[int]:
        """Append ``steps`` after ``sources``; return the tail node ids."""
        for step in steps:
            target = self.node(step_label(step))
            self.link(sources, target, first_label)
            first_label = None
            sources = [target]
            if isinstance(step, Group):
                ends = []
                for b in step.branches:
                    if b.steps:
                        ends.extend(self.chain(b.steps, [target], b.label))
                    else:
                        ends.append(target)
                sources = ends
            elif isinstance(step, (Stratified, Cluster, Quota)):
                ends = []
                for st in step.strata:
                    text = f"stratum {st.label}\n{format_constraint(st.constraint)}"
                    if isinstance(step, Quota):
                        text += f"\ntake {len(st.ids)} ids"
                    t = self.node(text)
                    self.link([target], t)
                    ends.append(t)
                sources = ends
        return sources


def emit_workflow_dot(w: Workflow, name: str = "workflow") -> str:
    """Pre-execution shape: operator nodes only, no set sizes."""
    g = _Static()
    root = g.node(f"input {w.input.kind}\n{w.input.path}")
    g.chain(w.steps, [root])
    lines = [f"digraph {quote(name)} {{", "    rankdir=TB;",
             '    node [shape=box, style=rounded, fontname="Helvetica"];',
             '    edge [fontname="Helvetica", fontsize=10];']
    for i, label in enumerate(g.nodes):
        lines.append(f"    op{i} [label={quote(label)}];")
    for s, t, label in g.edges:
        extra = f" [label={quote(label)}]" if label else ""
        lines.append(f"    op{s} -> op{t}{extra};")
    lines.append("}")
    return "\n".join(lines) + "\n"

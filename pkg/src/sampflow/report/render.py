"""JSON and Markdown reports for an executed workflow.

Both documents are pure functions of the trace and indicator list, so
emitting twice gives byte-identical output.
"""
from __future__ import annotations

import json
from typing import Any, Sequence

from ..operators.trace import ExecutionTrace
from .dot import edge_label
from .indicators import Indicator

SCHEMA_VERSION = 1
MAX_FREQUENCIES = 10


def report_object(trace: ExecutionTrace, indicators: Sequence[Indicator] = ()) -> dict[str, Any]:
    nodes = []
    histograms = []
    for n in trace.nodes:
        d = n.to_dict()
        for name, h in d.pop("histograms").items():
            histograms.append({"set_id": n.set_id, "field": name, **h})
        nodes.append(d)
    edges = [{"from": p, "to": c, "kind": node.kind, "params": node.params}
             for p, c, node in trace.edges()]
    return {
        "schema_version": SCHEMA_VERSION,
        "nodes": nodes,
        "edges": edges,
        "groups": [g.to_dict() for g in trace.groups],
        "final": {"set_ids": list(trace.final), "depth": trace.final_depth},
        "indicators": [i.to_dict() for i in indicators],
        "histograms": histograms,
    }


def emit_json(trace: ExecutionTrace, indicators: Sequence[Indicator] = ()) -> str:
    return json.dumps(report_object(trace, indicators), indent=2, sort_keys=True,
                      ensure_ascii=False, allow_nan=False) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v).replace("|", "\\|")


def _row(cells) -> str:
    return "| " + " | ".join(_cell(c) for c in cells) + " |"


NUMERIC_COLS = ("count", "missing", "mean", "median", "std", "mode", "min", "max", "q1", "q3")


def _stage(node) -> list[str]:
    out = [f"### Set #{node.set_id}: {node.label} ({node.size})", ""]
    op = edge_label(node.kind, node.params).replace("\n", ": ")
    out.append(f"Operator: `{op}`")
    warnings = node.info.get("warnings", [])
    if "missing_excluded" in node.info:
        out.append("")
        out.append(f"Excluded because of missing values: {node.info['missing_excluded']}")
    if "match_rate" in node.info:
        out.append("")
        out.append(f"Join match rate: {node.info['match_rate']:.4g}")
    for w in warnings:
        out.append("")
        out.append(f"Warning: {w}")
    numeric = {k: v for k, v in node.summaries.items() if "frequencies" not in v}
    categorical = {k: v for k, v in node.summaries.items() if "frequencies" in v}
    if numeric:
        out += ["", _row(("field",) + NUMERIC_COLS), _row(["---"] * (len(NUMERIC_COLS) + 1))]
        for name, s in numeric.items():
            out.append(_row([name] + [s.get(c) for c in NUMERIC_COLS]))
    for name, s in categorical.items():
        freqs = sorted(s["frequencies"].items(), key=lambda kv: (-kv[1], kv[0]))
        out += ["", f"{name}: {s['count']} values, {s['missing']} missing, "
                    f"{len(freqs)} distinct", "", _row(("value", "count")), _row(("---", "---"))]
        for value, count in freqs[:MAX_FREQUENCIES]:
            out.append(_row((value, count)))
        if len(freqs) > MAX_FREQUENCIES:
            out.append(_row((f"... {len(freqs) - MAX_FREQUENCIES} more", "")))
    return out


def emit_markdown(trace: ExecutionTrace, indicators: Sequence[Indicator] = ()) -> str:
    lines = ["# Sampling workflow report", "", f"schema_version: {SCHEMA_VERSION}", "",
             "## Sets", "", _row(("set", "label", "operator", "parents", "size")),
             _row(("---",) * 5)]
    for n in trace.nodes:
        lines.append(_row((f"#{n.set_id}", n.label, n.kind,
                           ", ".join(f"#{p}" for p in n.parents), n.size)))
    final = ", ".join(f"#{i}" for i in trace.final)
    lines += ["", f"Final sample: {final} (depth {trace.final_depth})", "", "## Stages", ""]
    for n in trace.nodes:
        lines += _stage(n) + [""]
    lines += ["## Indicators", ""]
    if not indicators:
        lines.append("No indicators.")
    for ind in indicators:
        target = f"Set #{ind.edge[0]} -> Set #{ind.edge[1]}"
        field = f" [{ind.field}]" if ind.field else ""
        lines.append(f"- **{ind.verdict}** {ind.kind} {target}{field}: {ind.explanation}")
        if ind.kind == "cochran-check" and "n_min" in ind.payload:
            p = ind.payload
            lines.append(f"  - N={p['N']}, n0={p['n0']:.6g}, minimum={p['n_min']}, n={p['n']}")
    return "\n".join(lines) + "\n"


def emit_report(trace: ExecutionTrace, indicators: Sequence[Indicator] = (),
                format: str = "json") -> str:
    if format == "json":
        return emit_json(trace, indicators)
    if format in ("markdown", "md"):
        return emit_markdown(trace, indicators)
    raise ValueError(f"unknown report format {format!r}")

"""Canonical text form of workflows and constraints.

``parse_workflow(pretty_print(w)) == w`` for every valid workflow; the
constraint printer inserts the parentheses needed to keep the tree shape.
"""
from __future__ import annotations

import json

from ..workflow import (AddMetadata, Cluster, Filter, Group, Intersection, Manual,
                        Quota, Random, Stratified, Systematic, Union_, Workflow)
from .expr import And, Compare, FieldRef, InList, Literal, Not, Or
from ..model import FieldKind

INDENT = "    "

_LEVEL = {Or: 1, And: 2, Not: 3}


def format_literal(lit: Literal) -> str:
    v = lit.value
    if lit.kind is FieldKind.BOOL:
        return "true" if v else "false"
    if lit.kind is FieldKind.TEXT:
        return json.dumps(v, ensure_ascii=False)
    if lit.kind is FieldKind.DATE:
        return v.isoformat()
    if lit.kind is FieldKind.REAL:
        text = repr(float(v))
        return text if any(c in text for c in ".eE") else text + ".0"
    return str(v)


def _operand(o) -> str:
    return o.name if isinstance(o, FieldRef) else format_literal(o)


def format_constraint(e, min_level: int = 0) -> str:
    level = _LEVEL.get(type(e), 4)
    if isinstance(e, Compare):
        s = f"{_operand(e.left)} {e.op} {_operand(e.right)}"
    elif isinstance(e, InList):
        s = f"{e.field.name} in [{', '.join(format_literal(i) for i in e.items)}]"
    elif isinstance(e, Not):
        s = "not " + format_constraint(e.operand, 3)
    elif isinstance(e, And):
        s = f"{format_constraint(e.left, 2)} and {format_constraint(e.right, 3)}"
    else:
        s = f"{format_constraint(e.left, 1)} or {format_constraint(e.right, 2)}"
    return f"({s})" if level < min_level else s


def _ids(ids) -> str:
    return "[" + ", ".join(json.dumps(i, ensure_ascii=False) for i in ids) + "]"


def _decls(entries, indent: str) -> list[str]:
    inner = indent + INDENT
    lines = [f"{inner}{name}: {kind.value}," for name, kind in entries]
    lines[-1] = lines[-1][:-1]
    return lines


def _steps(steps, indent: str) -> list[str]:
    out: list[str] = []
    for step in steps:
        out.extend(_step(step, indent))
    return out


def _step(step, indent: str) -> list[str]:
    inner = indent + INDENT
    if isinstance(step, Filter):
        return [f"{indent}filter {format_constraint(step.constraint)}"]
    if isinstance(step, Random):
        return [f"{indent}random {step.n} seed {step.seed}"]
    if isinstance(step, Systematic):
        return [f"{indent}systematic {step.n} order_by {step.order_by} "
                f"{step.direction} seed {step.seed}"]
    if isinstance(step, Manual):
        return [f"{indent}manual {_ids(step.ids)}"]
    if isinstance(step, Group):
        lines = [f"{indent}group {{"]
        for b in step.branches:
            lines.append(f"{inner}branch {b.label} {{")
            lines.extend(_steps(b.steps, inner + INDENT))
            lines.append(f"{inner}}}")
        lines.append(f"{indent}}}")
        return lines
    if isinstance(step, (Stratified, Cluster)):
        lines = [f"{indent}{'stratified' if isinstance(step, Stratified) else 'cluster'} {{"]
        for s in step.strata:
            lines.append(f"{inner}stratum {s.label} where {format_constraint(s.constraint)}")
        if isinstance(step, Stratified):
            lines.append(f"{indent}}} take {step.take} seed {step.seed}")
        else:
            lines.append(f"{indent}}} pick {step.pick} seed {step.seed}")
        return lines
    if isinstance(step, Quota):
        lines = [f"{indent}quota {{"]
        for s in step.strata:
            lines.append(f"{inner}stratum {s.label} where {format_constraint(s.constraint)}"
                         f" take {_ids(s.ids)}")
        lines.append(f"{indent}}}")
        return lines
    if isinstance(step, Union_):
        return [f"{indent}union"]
    if isinstance(step, Intersection):
        return [f"{indent}intersection"]
    if isinstance(step, AddMetadata):
        head = (f"{indent}add_metadata {step.kind} {json.dumps(step.path, ensure_ascii=False)}"
                f" join {step.join}")
        if step.fields is None:
            return [head]
        return [head + " {", *_decls(step.fields, indent), f"{indent}}}"]
    raise TypeError(f"unknown step {step!r}")


def pretty_print(w: Workflow) -> str:
    inp = w.input
    lines = [f"input {inp.kind} {json.dumps(inp.path, ensure_ascii=False)} "
             f"key {inp.schema.key_field} {{"]
    lines.extend(_decls(inp.schema.entries, ""))
    lines.append("}")
    if w.steps:
        lines.append("")
        lines.extend(_steps(w.steps, ""))
    return "\n".join(lines) + "\n"

"""Execute a parsed workflow against its input, building the trace."""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from typing import Iterable

from ..errors import OperatorError
from ..loaders import LoaderRegistry, LoaderSpec, csv_columns, json_columns
from ..loaders import registry as default_loaders
from ..model import DataSet, FieldKind
from ..rng import mix
from ..workflow import (SEEDED, AddMetadata, Cluster, Filter, Group, Intersection,
                        Manual, Quota, Random, Stratified, Systematic, Union_, Workflow)
from .grouping import cluster_op, grouping_op, quota_op, stratified_random_op
from .selection import filter_op, manual_op, random_op, systematic_op
from .setops import add_metadata_op, intersection_op, join_schema, union_op
from .trace import DEFAULT_BINS, ExecutionTrace, Tracer, leaf_ids


@dataclass
class ExecutionResult:
    trace: ExecutionTrace
    final: DataSet
    datasets: dict[int, DataSet]
    workflow: Workflow


def apply_seed_override(w: Workflow, override: int) -> Workflow:
    """Replace the seed of the i-th seeded step (pre-order) by mix(override, i)."""
    counter = iter(range(1 << 62))

    def rewrite(steps):
        out = []
        for step in steps:
            if isinstance(step, SEEDED):
                step = dataclasses.replace(step, seed=mix(override, next(counter)))
            elif isinstance(step, Group):
                step = Group(tuple(dataclasses.replace(b, steps=rewrite(b.steps))
                                   for b in step.branches))
            out.append(step)
        return tuple(out)

    return Workflow(w.input, rewrite(w.steps))


def default_summary_fields(w: Workflow) -> list[str]:
    """Non-key fields of the input that are not free text."""
    s = w.input.schema
    return [n for n, k in s.entries if n != s.key_field and k is not FieldKind.TEXT]


def resolve_path(path: str, base_dir: str | None) -> str:
    if base_dir is None or os.path.isabs(path):
        return path
    return os.path.join(base_dir, path)


class Runner:
    def __init__(self, tracer: Tracer, base_dir: str | None, loaders: LoaderRegistry):
        self.tracer = tracer
        self.base_dir = base_dir
        self.loaders = loaders

    def load_input(self, w: Workflow) -> DataSet:
        decl = w.input
        spec = LoaderSpec(decl.kind, resolve_path(decl.path, self.base_dir), decl.schema)
        frame = self.loaders.load(spec)
        return self.tracer.record(frame, "input", {"loader": decl.kind, "path": decl.path},
                                  (), {"output_size": len(frame)}, label="input")

    def run_steps(self, d: DataSet, steps) -> DataSet:
        for step in steps:
            d = self.run_step(d, step)
        return d

    def run_step(self, d: DataSet, step) -> DataSet:
        t = self.tracer
        if isinstance(step, Filter):
            return filter_op(d, step.constraint, t)
        if isinstance(step, Random):
            return random_op(d, step.n, step.seed, t)
        if isinstance(step, Systematic):
            return systematic_op(d, step.n, step.order_by, step.direction, step.seed, t)
        if isinstance(step, Manual):
            return manual_op(d, step.ids, t)
        if isinstance(step, Group):
            branches = [(b.label, lambda x, b=b: self.run_steps(x, b.steps))
                        for b in step.branches]
            return grouping_op(d, branches, t)
        if isinstance(step, Stratified):
            return stratified_random_op(d, [(s.label, s.constraint) for s in step.strata],
                                        step.take, step.seed, t)
        if isinstance(step, Cluster):
            return cluster_op(d, [(s.label, s.constraint) for s in step.strata],
                              step.pick, step.seed, t)
        if isinstance(step, Quota):
            return quota_op(d, [(s.label, s.constraint, s.ids) for s in step.strata], t)
        if isinstance(step, Union_):
            return union_op(d, t)
        if isinstance(step, Intersection):
            return intersection_op(d, t)
        if isinstance(step, AddMetadata):
            return self.add_metadata(d, step)
        raise OperatorError(f"unsupported step {type(step).__name__}")  # pragma: no cover

    def add_metadata(self, d: DataSet, step: AddMetadata) -> DataSet:
        path = resolve_path(step.path, self.base_dir)
        if step.fields is not None:
            fields = step.fields
        else:
            cols = csv_columns(path) if step.kind == "csv" else json_columns(path)
            if step.join not in cols:
                raise OperatorError(f"{step.path}: join column {step.join!r} not found")
            fields = tuple((c, FieldKind.TEXT) for c in cols if c != step.join)
        spec = LoaderSpec(step.kind, path, join_schema(d, step.join, fields))
        # the trace shows the path as written so reports do not depend on cwd
        return add_metadata_op(d, spec, step.join, self.tracer, self.loaders,
                               shown_path=step.path)


def execute(w: Workflow, base_dir: str | None = None, seed_override: int | None = None,
            summary_fields: Iterable[str] | None = None,
            loaders: LoaderRegistry | None = None, bins: int = DEFAULT_BINS
            ) -> ExecutionResult:
    """Run ``w``; relative paths resolve against ``base_dir``."""
    if seed_override is not None:
        w = apply_seed_override(w, seed_override)
    fields = default_summary_fields(w) if summary_fields is None else list(summary_fields)
    tracer = Tracer(fields, bins)
    runner = Runner(tracer, base_dir, loaders or default_loaders)
    d = runner.load_input(w)
    final = runner.run_steps(d, w.steps)
    tracer.trace.final = leaf_ids(final) if final.depth else [final.set_id]
    tracer.trace.final_depth = final.depth
    return ExecutionResult(tracer.trace, final, tracer.datasets, w)

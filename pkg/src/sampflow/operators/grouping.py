"""Fan-out operators producing a set of sets (depth + 1).

Plain grouping runs each branch from the same input snapshot. The
composite operators form one traced "stratum" subset per constraint and
then sample inside it (stratified), pick whole groups (cluster) or take
hand-listed ids (quota).
"""
from __future__ import annotations

from typing import Callable, Sequence

from .. import accel
from ..dsl.expr import compile_constraint
from ..errors import IdOutsideStratumError, NotAPartitionError, TooManyClustersError
from ..model import DataSet
from ..rng import mix
from .selection import filter_op, manual_op, random_op, require_artifacts
from .trace import Tracer, leaf_ids

MAX_WITNESSES = 5


def check_partition(d: DataSet, constraints: Sequence) -> None:
    """Raise NotAPartitionError unless every artifact satisfies exactly one
    constraint. At most five witness ids of each failure are reported."""
    preds = [compile_constraint(c) for c in constraints]
    overlaps: list[str] = []
    uncovered: list[str] = []
    for a in d.members:
        hits = sum(1 for p in preds if p(a.values))
        if hits == 0 and len(uncovered) < MAX_WITNESSES:
            uncovered.append(a.id)
        elif hits > 1 and len(overlaps) < MAX_WITNESSES:
            overlaps.append(a.id)
    if overlaps or uncovered:
        raise NotAPartitionError(overlaps, uncovered)


def nest(d: DataSet, children: list[DataSet], label: str) -> DataSet:
    depth = children[0].depth + 1 if children else d.depth + 1
    schema = children[0].schema if children else d.schema
    return DataSet(label, depth, tuple(children), schema, None, d.set_id)


def grouping_op(d: DataSet, branches: Sequence[tuple[str, Callable[[DataSet], DataSet]]],
                trace: Tracer | None = None) -> DataSet:
    """Run every ``(label, run)`` branch on ``d`` and nest the results.

    ``run`` maps the shared input to the branch result; the engine passes
    the branch step list, tests may pass a filter directly.
    """
    require_artifacts(d, "group")
    children = []
    for label, run in branches:
        if trace is None:
            children.append(run(d))
        else:
            with trace.scope(label):
                children.append(run(d))
    out = nest(d, children, "group")
    if trace is not None:
        ids = [i for c in children for i in leaf_ids(c)]
        trace.group("group", d.set_id, {"branches": [b[0] for b in branches]}, ids, ids)
    return out


def _strata_nodes(d: DataSet, strata: Sequence[tuple[str, object]],
                  trace: Tracer | None, kind: str) -> list[DataSet]:
    out = []
    for label, constraint in strata:
        if trace is None:
            out.append(filter_op(d, constraint, None, kind="stratum"))
        else:
            with trace.scope(kind):
                out.append(filter_op(d, constraint, trace, kind="stratum",
                                     label=label, extra_params={"stratum": label}))
    return out


def stratum_seed(seed: int, index: int) -> int:
    return mix(seed, index)


def stratified_random_op(d: DataSet, strata: Sequence[tuple[str, object]], take: int,
                         seed: int, trace: Tracer | None = None) -> DataSet:
    """Partition ``d`` by ``strata`` and draw ``take`` artifacts from each
    stratum with seed ``mix(seed, ordinal)``."""
    require_artifacts(d, "stratified")
    check_partition(d, [c for _, c in strata])
    subsets = _strata_nodes(d, strata, trace, "stratified")
    children = []
    for i, ((label, _), sub) in enumerate(zip(strata, subsets)):
        s = stratum_seed(seed, i)
        if trace is None:
            children.append(random_op(sub, take, s))
        else:
            with trace.scope("stratified"), trace.scope(label):
                children.append(random_op(sub, take, s, trace))
    out = nest(d, children, "stratified")
    if trace is not None:
        trace.group("stratified", d.set_id,
                    {"strata": [l for l, _ in strata], "take": take, "seed": seed},
                    [c.set_id for c in children], [c.set_id for c in children])
    return out


def cluster_op(d: DataSet, strata: Sequence[tuple[str, object]], pick: int, seed: int,
               trace: Tracer | None = None) -> DataSet:
    """Form one group per constraint (overlap allowed) and keep ``pick``
    whole groups chosen uniformly, in declaration order."""
    require_artifacts(d, "cluster")
    if pick < 0:
        raise ValueError("pick must be non-negative")
    if pick > len(strata):
        raise TooManyClustersError(f"cannot pick {pick} clusters out of {len(strata)}")
    groups = _strata_nodes(d, strata, trace, "cluster")
    chosen = accel.sample_indices(len(groups), pick, seed).tolist()
    children = [groups[i] for i in chosen]
    out = nest(d, children, "cluster")
    if trace is not None:
        trace.group("cluster", d.set_id,
                    {"strata": [l for l, _ in strata], "pick": pick, "seed": seed,
                     "picked": [strata[i][0] for i in chosen]},
                    [g.set_id for g in groups], [c.set_id for c in children])
    return out


def quota_op(d: DataSet, strata: Sequence[tuple[str, object, Sequence[str]]],
             trace: Tracer | None = None) -> DataSet:
    """Partition ``d`` and take the listed ids from each stratum."""
    require_artifacts(d, "quota")
    check_partition(d, [c for _, c, _ in strata])
    subsets = _strata_nodes(d, [(l, c) for l, c, _ in strata], trace, "quota")
    index = d.id_index
    children = []
    for (label, _, ids), sub in zip(strata, subsets):
        inside = sub.id_index
        for aid in ids:
            if aid in index and aid not in inside:
                raise IdOutsideStratumError(aid, label)
        if trace is None:
            children.append(manual_op(sub, ids))
        else:
            with trace.scope("quota"), trace.scope(label):
                children.append(manual_op(sub, ids, trace))
    out = nest(d, children, "quota")
    if trace is not None:
        trace.group("quota", d.set_id, {"strata": [s[0] for s in strata]},
                    [c.set_id for c in children], [c.set_id for c in children])
    return out

"""Selection operators on depth-0 sets: filter, random, systematic, manual.

Every selection keeps the input order of the artifacts it retains.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .. import accel
from ..dsl.expr import compile_constraint, referenced_fields
from ..dsl.printer import format_constraint
from ..errors import DepthError, NonOrderableFieldError, SampleTooLargeError
from ..model import DataSet
from ..rng import SeededRng
from .trace import Tracer


def require_artifacts(d: DataSet, what: str) -> None:
    if d.depth != 0:
        raise DepthError(f"{what} needs a set of artifacts, got depth {d.depth}")


def restrict(d: DataSet, positions: Iterable[int], label: str) -> DataSet:
    members = d.members
    return DataSet(label, 0, tuple(members[i] for i in positions), d.schema)


def _emit(trace: Tracer | None, out: DataSet, kind: str, params: dict, parent: DataSet,
          info: dict, label: str | None = None) -> DataSet:
    if trace is None:
        return out
    parents = (parent.set_id,) if parent.set_id is not None else ()
    return trace.record(out, kind, params, parents, info, label)


def filter_op(d: DataSet, constraint, trace: Tracer | None = None, *,
              kind: str = "filter", label: str | None = None,
              extra_params: dict | None = None) -> DataSet:
    """Artifacts satisfying ``constraint``.

    The trace records how many rejected artifacts had a missing value in
    one of the referenced fields.
    """
    require_artifacts(d, "filter")
    pred = compile_constraint(constraint)
    fields = sorted(referenced_fields(constraint))
    keep = []
    missing_excluded = 0
    for i, a in enumerate(d.members):
        vals = a.values
        if pred(vals):
            keep.append(i)
        elif any(vals[f] is None for f in fields):
            missing_excluded += 1
    out = restrict(d, keep, kind)
    params = dict(extra_params or {})
    params["constraint"] = format_constraint(constraint)
    info = {"input_size": len(d), "output_size": len(out),
            "missing_excluded": missing_excluded}
    return _emit(trace, out, kind, params, d, info, label)


def random_op(d: DataSet, n: int, seed: int, trace: Tracer | None = None) -> DataSet:
    """Uniform sample of exactly ``n`` artifacts without replacement."""
    require_artifacts(d, "random")
    if n < 0:
        raise ValueError("sample size must be non-negative")
    if n > len(d):
        raise SampleTooLargeError(n, len(d))
    idx = accel.sample_indices(len(d), n, seed)
    out = restrict(d, idx.tolist(), "random")
    info = {"input_size": len(d), "output_size": n}
    return _emit(trace, out, "random", {"n": n, "seed": seed}, d, info)


def systematic_order(d: DataSet, order_field: str, direction: str) -> list[int]:
    """Input positions sorted by ``order_field``; stable, missing last."""
    vals = [a.values[order_field] for a in d.members]
    present = [i for i, v in enumerate(vals) if v is not None]
    missing = [i for i, v in enumerate(vals) if v is None]
    present.sort(key=vals.__getitem__, reverse=(direction == "desc"))
    return present + missing


def systematic_op(d: DataSet, n: int, order_field: str, direction: str = "asc",
                  seed: int = 0, trace: Tracer | None = None) -> DataSet:
    """Every k-th element (k = |d| // n) of the ordered set from a random start."""
    require_artifacts(d, "systematic")
    if not d.schema.kind(order_field).is_orderable:
        raise NonOrderableFieldError(
            f"cannot order by {order_field!r} of kind {d.schema.kind(order_field).value}")
    if direction not in ("asc", "desc"):
        raise ValueError(f"direction must be asc or desc, got {direction!r}")
    if n < 1:
        raise ValueError("systematic sample size must be >= 1")
    if n > len(d):
        raise SampleTooLargeError(n, len(d))
    order = systematic_order(d, order_field, direction)
    k = len(d) // n
    start = SeededRng(seed).below(k)
    picked = sorted(order[start + i * k] for i in range(n))
    out = restrict(d, picked, "systematic")
    params = {"n": n, "order_by": order_field, "direction": direction, "seed": seed}
    info = {"input_size": len(d), "output_size": n, "interval": k, "start": start}
    return _emit(trace, out, "systematic", params, d, info)


def manual_op(d: DataSet, ids: Sequence[str], trace: Tracer | None = None, *,
              label: str | None = None) -> DataSet:
    """Artifacts whose id is listed; unknown ids are reported, not fatal."""
    require_artifacts(d, "manual")
    wanted = set(ids)
    index = d.id_index
    unresolved = list(dict.fromkeys(i for i in ids if i not in index))
    keep = sorted(index[i] for i in wanted if i in index)
    out = restrict(d, keep, "manual")
    info = {"input_size": len(d), "output_size": len(out), "unresolved_ids": unresolved}
    if unresolved:
        info["warnings"] = [f"{len(unresolved)} listed id(s) not found in the input set"]
    return _emit(trace, out, "manual", {"ids": list(ids)}, d, info, label)

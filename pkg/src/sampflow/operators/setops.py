"""Set operators folding a set of sets back down, and the metadata join."""
from __future__ import annotations

from ..errors import DepthError, DuplicateJoinKeyError, DuplicateKeyError, OperatorError
from ..loaders import LoaderRegistry, LoaderSpec, registry as default_loaders
from ..model import Artifact, DataSet, FieldKind, MetadataSchema, member_key
from .trace import Tracer, leaf_ids


def _fold(d: DataSet, kind: str, members: list, trace: Tracer | None) -> DataSet:
    schema = d.members[0].schema if d.members else d.schema
    out = DataSet(kind, d.depth - 1, tuple(members), schema, None, d.origin)
    if trace is None:
        return out
    parents = leaf_ids(d) or ([d.origin] if d.origin is not None else [])
    if out.depth == 0:
        info = {"input_sizes": [len(c) for c in d.members], "output_size": len(out)}
        return trace.record(out, kind, {}, parents, info)
    trace.group(kind, d.origin, {}, parents, leaf_ids(out))
    return out


def union_op(d: DataSet, trace: Tracer | None = None) -> DataSet:
    """Concatenate the children, dropping repeated members (first wins)."""
    if d.depth < 1:
        raise DepthError("union needs a set of sets")
    seen = set()
    members = []
    for child in d.members:
        for m in child.members:
            k = member_key(m)
            if k not in seen:
                seen.add(k)
                members.append(m)
    return _fold(d, "union", members, trace)


def intersection_op(d: DataSet, trace: Tracer | None = None) -> DataSet:
    """Members present in every child, in the first child's order."""
    if d.depth < 1:
        raise DepthError("intersection needs a set of sets")
    if not d.members:
        members = []
    else:
        keep = set(member_key(m) for m in d.members[0].members)
        for child in d.members[1:]:
            keep &= set(member_key(m) for m in child.members)
        members = [m for m in d.members[0].members if member_key(m) in keep]
    return _fold(d, "intersection", members, trace)


def join_schema(d: DataSet, join: str, new_fields) -> MetadataSchema:
    """Schema of the right-hand source: the join key plus the new fields."""
    key_kind = d.schema.kind(join)
    if key_kind not in (FieldKind.TEXT, FieldKind.INT):
        raise OperatorError(f"join field {join!r} must be text or int, not {key_kind.value}")
    return MetadataSchema(((join, key_kind),) + tuple(new_fields), join)


def add_metadata_op(d: DataSet, spec: LoaderSpec, join: str, trace: Tracer | None = None,
                    loaders: LoaderRegistry | None = None,
                    shown_path: str | None = None) -> DataSet:
    """Left join of ``d`` with the rows of ``spec`` on ``join``.

    ``spec.schema`` names the join key (as key field) and the new fields.
    Unmatched artifacts get missing values for every new field.
    """
    if d.depth != 0:
        raise DepthError("add_metadata needs a set of artifacts")
    loaders = loaders or default_loaders
    new = [(n, k) for n, k in spec.schema.entries if n != join]
    clash = [n for n, _ in new if n in d.schema]
    if clash:
        raise OperatorError(f"add_metadata would overwrite existing field(s): {', '.join(clash)}")
    try:
        right = loaders.load(spec)
    except DuplicateKeyError as exc:
        raise DuplicateJoinKeyError(exc.key) from None
    index = right.id_index
    blank = {n: None for n, _ in new}
    members = []
    matched = 0
    for a in d.members:
        key = a.values[join]
        pos = index.get(str(key)) if key is not None else None
        if pos is None:
            extra = blank
        else:
            matched += 1
            row = right.members[pos].values
            extra = {n: row[n] for n, _ in new}
        members.append(Artifact(a.id, {**a.values, **extra}))
    out = DataSet("add_metadata", 0, tuple(members), d.schema.extend(new))
    if trace is None:
        return out
    info = {"input_size": len(d), "output_size": len(out), "matched": matched,
            "match_rate": matched / len(d) if len(d) else 0.0,
            "right_rows": len(right)}
    params = {"loader": spec.kind, "path": shown_path or spec.path, "join": join,
              "fields": [n for n, _ in new]}
    parents = (d.set_id,) if d.set_id is not None else ()
    return trace.record(out, "add_metadata", params, parents, info)

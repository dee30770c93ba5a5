"""Hypothesis strategies for schemas, constraints and whole workflows.

Generated workflows respect the static rules of the language (fields in
scope, depth tracking, branch agreement) so that every one of them is a
valid document once printed.
"""
import datetime as dt
import string

from hypothesis import strategies as st

from sampflow.dsl.expr import CMP_OPS, And, Compare, FieldRef, InList, Literal, Not, Or
from sampflow.dsl.parser import RESERVED
from sampflow.model import FieldKind, MetadataSchema
from sampflow.workflow import (AddMetadata, Branch, Cluster, Filter, Group, InputDecl,
                               Intersection, Manual, Quota, QuotaStratum, Random, Stratified,
                               Stratum, Systematic, Union_, Workflow)

INT64 = (-(1 << 63), (1 << 63) - 1)
KINDS = list(FieldKind)

# step keywords are legal field names and are mixed in on purpose
identifiers = st.one_of(
    st.sampled_from(["year", "numPages", "lang", "stars", "filter", "seed", "take", "where",
                     "branch", "date", "group", "x_1", "_y"]),
    st.text(string.ascii_letters + "_", min_size=1, max_size=3).flatmap(
        lambda head: st.text(string.ascii_letters + string.digits + "_", max_size=6).map(
            lambda tail: head + tail)),
).filter(lambda s: s not in RESERVED)

reals = st.floats(allow_nan=False, allow_infinity=False, width=64)
texts = st.text(st.characters(blacklist_categories=("Cs",)), max_size=12)
dates = st.dates(dt.date(1, 1, 1), dt.date(9999, 12, 31))


def literal_of(kind: FieldKind):
    if kind is FieldKind.INT:
        return st.integers(*INT64).map(lambda v: Literal(v, kind))
    if kind is FieldKind.REAL:
        # real fields may be tested against int or real literals
        return st.one_of(reals.map(lambda v: Literal(v, FieldKind.REAL)),
                         st.integers(-1000, 1000).map(lambda v: Literal(v, FieldKind.INT)))
    if kind is FieldKind.TEXT:
        return texts.map(lambda v: Literal(v, kind))
    if kind is FieldKind.DATE:
        return dates.map(lambda v: Literal(v, kind))
    return st.booleans().map(lambda v: Literal(v, kind))


def _int_or_real_kinds(kind):
    return literal_of(FieldKind.REAL if kind.is_numeric else kind)


@st.composite
def leaf(draw, schema: MetadataSchema):
    name, kind = draw(st.sampled_from(schema.entries))
    ops = CMP_OPS if kind.is_orderable else ("==", "!=")
    lits = _int_or_real_kinds(kind)
    shape = draw(st.sampled_from(["field-lit", "lit-field", "in", "chain", "lit-lit"]))
    f = FieldRef(name)
    if shape == "field-lit":
        return Compare(draw(st.sampled_from(ops)), f, draw(lits))
    if shape == "lit-field":
        return Compare(draw(st.sampled_from(ops)), draw(lits), f)
    if shape == "in":
        return InList(f, tuple(draw(st.lists(lits, max_size=4))))
    if shape == "chain":
        return And(Compare(draw(st.sampled_from(ops)), draw(lits), f),
                   Compare(draw(st.sampled_from(ops)), f, draw(lits)))
    a = draw(literal_of(FieldKind.INT))
    return Compare(draw(st.sampled_from(CMP_OPS)), a, draw(literal_of(FieldKind.INT)))


def constraints(schema: MetadataSchema, max_leaves: int = 6):
    return st.recursive(
        leaf(schema),
        lambda inner: st.one_of(
            st.builds(And, inner, inner), st.builds(Or, inner, inner), st.builds(Not, inner)),
        max_leaves=max_leaves)


@st.composite
def schemas(draw, min_fields=1, max_fields=5):
    names = draw(st.lists(identifiers, min_size=min_fields, max_size=max_fields, unique=True)
                 .filter(lambda ns: "id" not in ns))
    entries = [("id", FieldKind.TEXT)] + [(n, draw(st.sampled_from(KINDS))) for n in names]
    return MetadataSchema(tuple(entries), "id")


seeds = st.integers(*INT64)
labels = identifiers
ids = st.lists(texts, max_size=4).map(tuple)


@st.composite
def strata(draw, schema, with_ids=False):
    names = draw(st.lists(labels, min_size=1, max_size=3, unique=True))
    if with_ids:
        return tuple(QuotaStratum(n, draw(constraints(schema, 3)), draw(ids)) for n in names)
    return tuple(Stratum(n, draw(constraints(schema, 3))) for n in names)


@st.composite
def flat_step(draw, schema):
    """A step that keeps depth 0 and the schema."""
    kind = draw(st.sampled_from(["filter", "random", "systematic", "manual"]))
    orderable = [n for n, k in schema.entries if k.is_orderable]
    if kind == "systematic" and orderable:
        return Systematic(draw(st.integers(1, 10**6)), draw(st.sampled_from(orderable)),
                          draw(st.sampled_from(["asc", "desc"])), draw(seeds))
    if kind == "random":
        return Random(draw(st.integers(0, 10**6)), draw(seeds))
    if kind == "manual":
        return Manual(draw(ids))
    return Filter(draw(constraints(schema)))


@st.composite
def fan_out(draw, schema, depth):
    """A step that raises depth from 0 to exactly ``depth``."""
    kinds = ["stratified", "cluster", "quota"] if depth == 1 else ["group"]
    kind = draw(st.sampled_from(kinds))
    if kind == "stratified":
        return Stratified(draw(strata(schema)), draw(st.integers(0, 1000)), draw(seeds))
    if kind == "cluster":
        ss = draw(strata(schema))
        return Cluster(ss, draw(st.integers(0, len(ss))), draw(seeds))
    if kind == "quota":
        return Quota(draw(strata(schema, with_ids=True)))
    return draw(groups(schema, depth - 1, exact=True))


@st.composite
def groups(draw, schema, depth_budget=2, exact=False):
    """A group whose branches all end at the same depth.

    With ``exact`` the branches end at ``depth_budget``; otherwise at a
    drawn depth no larger than it.
    """
    names = draw(st.lists(labels, min_size=1, max_size=3, unique=True))
    inner = depth_budget if exact else draw(st.integers(0, depth_budget))
    branches = []
    for n in names:
        body = draw(st.lists(flat_step(schema), max_size=2))
        if inner:
            body.append(draw(fan_out(schema, inner)))
        branches.append(Branch(n, tuple(body)))
    return Group(tuple(branches))


def _depth_after(step) -> int:
    if isinstance(step, (Stratified, Cluster, Quota)):
        return 1
    if isinstance(step, Group):
        tails = [b.steps[-1] for b in step.branches if b.steps]
        inner = _depth_after(tails[0]) if tails and isinstance(
            tails[0], (Stratified, Cluster, Quota, Group)) else 0
        return inner + 1
    return 0


@st.composite
def workflows(draw, max_steps=6):
    schema = draw(schemas())
    decl = InputDecl(draw(st.sampled_from(["csv", "json"])), draw(texts.filter(bool)), schema)
    steps = []
    depth = 0
    for _ in range(draw(st.integers(0, max_steps))):
        if depth > 0:
            steps.append(draw(st.sampled_from([Union_(), Intersection()])))
            depth -= 1
            continue
        choice = draw(st.sampled_from(["flat", "flat", "fan", "group", "meta"]))
        if choice == "flat":
            steps.append(draw(flat_step(schema)))
        elif choice == "fan":
            steps.append(draw(fan_out(schema, 1)))
        elif choice == "group":
            steps.append(draw(groups(schema)))
        else:
            join = draw(st.sampled_from([n for n, k in schema.entries
                                         if k in (FieldKind.TEXT, FieldKind.INT)]))
            fields = None
            if draw(st.booleans()):
                new = draw(st.lists(identifiers.filter(lambda s: s not in schema),
                                    min_size=1, max_size=2, unique=True))
                fields = tuple((n, draw(st.sampled_from(KINDS))) for n in new)
                schema = schema.extend(fields)
            steps.append(AddMetadata(draw(st.sampled_from(["csv", "json"])),
                                     draw(texts.filter(bool)), join, fields))
        depth = _depth_after(steps[-1])
    return Workflow(decl, tuple(steps))


# -- construct coverage -------------------------------------------------------

ALL_CONSTRUCTS = frozenset(
    ["input:csv", "input:json", "filter", "random", "systematic:asc", "systematic:desc",
     "manual", "stratified", "cluster", "quota", "group", "group:nested", "branch:empty",
     "union", "intersection", "add_metadata:csv", "add_metadata:json",
     "add_metadata:fields", "add_metadata:inferred", "and", "or", "not", "in"]
    + [f"cmp:{op}" for op in CMP_OPS] + [f"lit:{k.value}" for k in KINDS])


def _expr_constructs(e, out):
    if isinstance(e, Compare):
        out.add(f"cmp:{e.op}")
        for side in (e.left, e.right):
            if isinstance(side, Literal):
                out.add(f"lit:{side.kind.value}")
    elif isinstance(e, InList):
        out.add("in")
        out.update(f"lit:{i.kind.value}" for i in e.items)
    elif isinstance(e, Not):
        out.add("not")
        _expr_constructs(e.operand, out)
    else:
        out.add("and" if isinstance(e, And) else "or")
        _expr_constructs(e.left, out)
        _expr_constructs(e.right, out)


def _step_constructs(step, out, inside_group=False):
    if isinstance(step, Filter):
        out.add("filter")
        _expr_constructs(step.constraint, out)
    elif isinstance(step, Systematic):
        out.add(f"systematic:{step.direction}")
    elif isinstance(step, AddMetadata):
        out.add(f"add_metadata:{step.kind}")
        out.add("add_metadata:fields" if step.fields is not None else "add_metadata:inferred")
    elif isinstance(step, (Stratified, Cluster, Quota)):
        out.add(type(step).__name__.lower())
        for s in step.strata:
            _expr_constructs(s.constraint, out)
    elif isinstance(step, Group):
        out.add("group:nested" if inside_group else "group")
        for b in step.branches:
            if not b.steps:
                out.add("branch:empty")
            for s in b.steps:
                _step_constructs(s, out, True)
    else:
        out.add({Random: "random", Manual: "manual", Union_: "union",
                 Intersection: "intersection"}[type(step)])


def constructs(w: Workflow) -> set:
    """Names of the grammar constructs used anywhere in ``w``."""
    out = {f"input:{w.input.kind}"}
    for s in w.steps:
        _step_constructs(s, out)
    return out


def run_roundtrip(examples=500):
    """Check parse(print(w)) == w over generated workflows.

    Returns (number checked, constructs seen).
    """
    from hypothesis import HealthCheck, given, settings

    from sampflow.dsl import parse_workflow, pretty_print

    seen, count = set(), [0]

    @settings(max_examples=examples, derandomize=True, deadline=None, database=None,
              suppress_health_check=list(HealthCheck))
    @given(workflows())
    def check(w):
        text = pretty_print(w)
        again = parse_workflow(text)
        assert again == w, text
        assert pretty_print(again) == text
        assert parse_workflow(pretty_print(again)) == again
        seen.update(constructs(w))
        count[0] += 1

    check()
    return count[0], seen

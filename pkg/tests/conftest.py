import os
import sys

import pytest

from sampflow.model import Artifact, DataSet, FieldKind, MetadataSchema

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEMO = os.path.join(ROOT, "demo")

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))


def schema(**fields) -> MetadataSchema:
    """Schema with an ``id`` text key followed by ``fields`` (name=kind)."""
    entries = [("id", FieldKind.TEXT)]
    entries += [(n, FieldKind(k)) for n, k in fields.items()]
    return MetadataSchema(tuple(entries), "id")


def make_set(rows, sch=None, label="frame", set_id=0) -> DataSet:
    """Depth-0 set from dicts; missing keys become missing values."""
    if sch is None:
        names = {k: "int" for r in rows for k in r if k != "id"}
        sch = schema(**names)
    members = []
    for r in rows:
        values = {n: r.get(n) for n in sch.names}
        members.append(Artifact(str(r["id"]), values))
    return DataSet(label, 0, tuple(members), sch, set_id)


def int_set(xs, name="x", set_id=0) -> DataSet:
    return make_set([{"id": f"a{i}", name: x} for i, x in enumerate(xs)],
                    schema(**{name: "int"}), set_id=set_id)


@pytest.fixture
def demo_dir():
    return DEMO


def run_demo(name, **kw):
    from sampflow.dsl import parse_workflow
    from sampflow.operators import execute

    with open(os.path.join(DEMO, name), encoding="utf-8") as fh:
        w = parse_workflow(fh.read())
    return execute(w, base_dir=DEMO, **kw)


@pytest.fixture(scope="session")
def running_result():
    return run_demo("running_example.sfw")


@pytest.fixture(scope="session")
def case_result():
    return run_demo("case_study.sfw")

import os

import pytest

from conftest import DEMO, run_demo
from sampflow.dsl import parse_workflow
from sampflow.errors import DepthError, OperatorError, SampleTooLargeError
from sampflow.model import validate_dataset
from sampflow.operators import apply_seed_override, default_summary_fields, execute
from sampflow.report import emit_json
from sampflow.rng import mix
from sampflow.workflow import Random, Stratified


def test_running_example_trace(running_result):
    t = running_result.trace
    assert [n.size for n in t.nodes] == [100000, 44131, 27839, 10000, 16292, 10000, 20000]
    assert [n.set_id for n in t.nodes] == list(range(7))
    edges = [(p, c) for p, c, _ in t.edges()]
    assert edges == [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (3, 6), (5, 6)]
    assert [n.kind for n in t.nodes] == ["input", "filter", "filter", "random",
                                         "filter", "random", "union"]
    assert t.nodes[2].label == "small_teams/filter" and t.nodes[5].label == "large_teams/random"
    assert t.final == [6] and t.final_depth == 0
    (g,) = t.groups
    assert g.kind == "group" and g.input == 1 and g.children == [3, 5]


def test_running_example_strata_partition_set1(running_result):
    ds = running_result.datasets
    s1 = {a.id for a in ds[1].members}
    small, large = ({a.id for a in ds[i].members} for i in (2, 4))
    assert small | large == s1 and not small & large
    for a in ds[1].members:
        cc = a["committer_count"]
        assert (a.id in small) == (cc is not None and cc < 5)
    assert len(ds[6]) == len(ds[3]) + len(ds[5]) - len({a.id for a in ds[3]} & {a.id for a in ds[5]})


def test_every_traced_set_validates(running_result):
    for d in running_result.datasets.values():
        assert validate_dataset(d) == []


def test_case_study_sizes(case_result):
    t = case_result.trace
    assert [n.size for n in t.nodes] == [1206, 460, 192, 192, 65]
    assert t.nodes[3].kind == "add_metadata"
    assert 0 < t.nodes[3].info["match_rate"] < 1
    assert "ieee_keyword_list" in case_result.final.schema


def test_repeat_runs_identical(case_result):
    again = run_demo("case_study.sfw")
    assert emit_json(again.trace) == emit_json(case_result.trace)


def test_summaries_follow_default_fields(case_result):
    w = case_result.workflow
    assert default_summary_fields(w) == ["year", "numPages"]
    node = case_result.trace.nodes[0]
    assert set(node.summaries) == {"year", "numPages"} and set(node.histograms) == {"year", "numPages"}


def test_seed_override_derivation():
    w = parse_workflow('input csv "a.csv" key id { id: text, x: int }\n'
                       "random 5 seed 1\n"
                       "group { branch a { random 2 seed 3 stratified { stratum t where x > 0 } take 1 seed 9 }"
                       " branch b { "
                       "stratified { stratum s where x > 0 } take 1 seed 4 } }\n")
    o = apply_seed_override(w, 99)
    assert o.steps[0].seed == mix(99, 0)
    a, b = o.steps[1].branches
    assert isinstance(a.steps[0], Random) and a.steps[0].seed == mix(99, 1)
    assert a.steps[1].seed == mix(99, 2)
    assert isinstance(b.steps[0], Stratified) and b.steps[0].seed == mix(99, 3)


def write_frame(tmp_path, n=20):
    p = tmp_path / "f.csv"
    p.write_text("id,x\n" + "".join(f"r{i},{i}\n" for i in range(n)), encoding="utf-8")
    return tmp_path


def test_seed_override_changes_sample(tmp_path):
    base = write_frame(tmp_path, 200)
    w = parse_workflow('input csv "f.csv" key id { id: text, x: int }\nrandom 10 seed 1\n')
    plain = execute(w, base_dir=str(base)).final
    over = execute(w, base_dir=str(base), seed_override=5).final
    assert execute(w, base_dir=str(base), seed_override=5).final.members == over.members
    assert plain.members != over.members


def test_identity_workflow(tmp_path):
    base = write_frame(tmp_path)
    r = execute(parse_workflow('input csv "f.csv" key id { id: text, x: int }'), str(base))
    assert len(r.trace.nodes) == 1 and r.trace.edges() == [] and r.trace.final == [0]


def test_final_depth_one_and_nested_fold(tmp_path):
    base = write_frame(tmp_path)
    w = parse_workflow('input csv "f.csv" key id { id: text, x: int }\n'
                       "stratified { stratum lo where x < 10 stratum hi where x >= 10 }"
                       " take 3 seed 8\n")
    r = execute(w, str(base))
    assert r.trace.final_depth == 1 and len(r.trace.final) == 2
    assert [r.trace.nodes[i].size for i in r.trace.final] == [3, 3]
    w2 = parse_workflow('input csv "f.csv" key id { id: text, x: int }\n'
                        "group { branch a { stratified { stratum lo where x < 10 stratum hi "
                        "where x >= 10 } take 3 seed 8 } branch b { cluster { stratum lo where "
                        "x < 5 stratum hi where x >= 5 } pick 1 seed 2 } }\nunion\nunion\n")
    r2 = execute(w2, str(base))
    assert r2.trace.final_depth == 0 and r2.trace.nodes[-1].kind == "union"
    assert r2.trace.nodes[-1].size == len({a.id for a in r2.final.members})


def test_runtime_errors_propagate(tmp_path):
    base = write_frame(tmp_path)
    w = parse_workflow('input csv "f.csv" key id { id: text, x: int }\nrandom 50 seed 1\n')
    with pytest.raises(SampleTooLargeError):
        execute(w, str(base))
    w = parse_workflow('input csv "f.csv" key id { id: text, x: int }\n'
                       'add_metadata csv "f.csv" join x\n')
    with pytest.raises(OperatorError):  # inferred columns clash: id would be overwritten
        execute(w, str(base))


def test_add_metadata_inferred_fields(tmp_path):
    base = write_frame(tmp_path)
    (tmp_path / "m.csv").write_text("key,note,score\nr1,hello,3\nr2,,4\n", encoding="utf-8")
    w = parse_workflow('input csv "f.csv" key id { id: text, x: int }\n'
                       'add_metadata csv "m.csv" join id\n')
    with pytest.raises(OperatorError):  # join column absent from the right file
        execute(w, str(base))
    (tmp_path / "m.csv").write_text("id,note,score\nr1,hello,3\nr2,,4\n", encoding="utf-8")
    r = execute(w, str(base))
    vals = {a.id: (a["note"], a["score"]) for a in r.final.members}
    assert vals["r1"] == ("hello", "3") and vals["r2"] == (None, "4") and vals["r3"] == (None, None)
    assert r.trace.nodes[-1].params["path"] == "m.csv"

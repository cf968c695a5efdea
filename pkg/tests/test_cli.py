from __future__ import annotations

import json
from importlib import resources

import pytest

from helpers import catalog_commands, catalog_transcript
from l2a import catalog as cat
from l2a.cli import run
from l2a.generate import gen_instance
from l2a.serialize import (KINDS, dump_instance, dumps_instance, instance_schema, load_spec,
                           report_schema)


@pytest.fixture
def write(tmp_path):
    def _write(inst, name=None):
        p = tmp_path / f"{name or inst.name}.json"
        dump_instance(inst, str(p))
        return str(p)
    return _write


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_lie2_string_type(capsys, write):
    code, out, _ = _run(capsys, "check-lie2", "--in", write(cat.get("string_type")))
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["violations"] == []


def test_check_lie2_open_omega_fails_v(capsys, write):
    code, out, _ = _run(capsys, "check-lie2", "--in", write(cat.get("open_omega")))
    rep = json.loads(out)
    assert code == 1
    assert {v["axiom"] for v in rep["violations"]} == {"v"}


def test_text_report(capsys, write):
    code, out, _ = _run(capsys, "check-lie2", "--text", "--in", write(cat.get("open_omega")))
    assert code == 1 and "v" in out and not out.lstrip().startswith("{")


def test_bicross_then_extract_round_trip(capsys, tmp_path, write):
    src = cat.get("sl2_matched_pair")
    mid = str(tmp_path / "bx.json")
    assert run(["bicross", "--in", write(src), "--out", mid]) == 0
    out = str(tmp_path / "ex.json")
    assert run(["extract", "--in", mid, "--out", out]) == 0
    assert load_spec(out).payload == src.payload
    assert json.loads(dumps_instance(load_spec(out)))["payload"] == \
        json.loads(dumps_instance(src))["payload"]


@pytest.mark.parametrize("argv,code", [
    (["check-lie2"], 2),
    (["frobnicate"], 2),
    (["gen"], 2),
    (["gen", "--kind", "lie3"], 2),
    (["gen", "--kind", "semidirect", "--seed", "-1"], 2),
    (["gen", "--kind", "semidirect", "--dim", "9"], 2),
    (["catalog", "--name", "nope"], 2),
    (["check-lie2", "--in", "/nonexistent/file.json"], 2),
    (["check-lie2", "--json", "--text"], 2),
])
def test_usage_errors(capsys, argv, code):
    assert _run(capsys, *argv)[0] == code


def test_kind_mismatch_exits_2(capsys, write):
    code, _, err = _run(capsys, "check-courant", "--in", write(cat.get("string_type")))
    assert code == 2 and "expected courant" in err


def test_malformed_poly_exits_2(capsys, tmp_path):
    doc = json.loads(dumps_instance(cat.get("open_omega")))
    doc["payload"]["omega"][0]["value"][0] = "3/x0"
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, _, err = _run(capsys, "check-lie2", "--in", str(p))
    assert code == 2 and "$.payload.omega[0].value[0]" in err


def test_max_degree_guard(capsys, write):
    code, _, err = _run(capsys, "check-lie2", "--max-degree", "0",
                        "--in", write(gen_instance("semidirect", 3, degree=2)))
    assert code == 2 and "--max-degree" in err


def test_gen_is_deterministic(capsys):
    a = _run(capsys, "gen", "--kind", "bicross", "--seed", "9")
    b = _run(capsys, "gen", "--kind", "bicross", "--seed", "9")
    assert a == b and a[0] == 0


def test_gen_mutation_fails_check(capsys, tmp_path):
    p = str(tmp_path / "m.json")
    assert run(["gen", "--kind", "semidirect", "--seed", "2", "--mutate", "omega", "--out", p]) == 0
    code, out, _ = _run(capsys, "check-lie2", "--in", p)
    assert code == 1 and json.loads(out)["violations"]


def test_catalog_listing(capsys):
    code, out, _ = _run(capsys, "catalog")
    assert code == 0 and out.split() == cat.catalog_names()


def test_construction_chain(capsys, tmp_path, write):
    fat = str(tmp_path / "fat.json")
    assert run(["fat", "--in", write(cat.get("string_type")), "--out", fat]) == 0
    assert _run(capsys, "check-courant", "--samples", "2", "--in", fat)[0] == 0
    std = str(tmp_path / "std.json")
    assert run(["standard-courant", "--dim", "2", "--out", std]) == 0
    assert load_spec(std).payload.E.rank == 4


def test_fat_refuses_invalid_input(capsys, write):
    code, out, _ = _run(capsys, "fat", "--in", write(cat.get("open_omega")))
    assert code == 1 and not json.loads(out)["passed"]


def test_drinfeld_and_compose(capsys, tmp_path, write):
    out = str(tmp_path / "d.json")
    g, dual = cat.get("so3"), cat.get("abelian3")
    assert run(["drinfeld", "--in", write(g), "--in", write(dual), "--out", out]) == 0
    assert _run(capsys, "check-courant", "--in", out)[0] == 0
    m = write(cat.get("string_morphism"))
    comp = str(tmp_path / "c.json")
    assert run(["compose", "--in", m, "--in", m, "--out", comp]) == 0
    assert _run(capsys, "check-morphism", "--in", comp)[0] == 0


@pytest.mark.parametrize("name", cat.catalog_names())
def test_construction_outputs_reload(name, tmp_path, write, capsys):
    inst = cat.get(name)
    path = write(inst)
    for cmd in catalog_commands(inst):
        if cmd[0].startswith("check") or cmd[0] == "qsquare":
            continue
        out = str(tmp_path / "out.json")
        code = run(cmd + ["--in", path, "--out", out])
        capsys.readouterr()
        if code == 0:
            back = load_spec(out)
            assert dumps_instance(back) == open(out, encoding="utf-8").read()


def test_shipped_schemas_match_generated():
    root = resources.files("l2a") / "schemas"
    assert json.loads((root / "report.schema.json").read_text()) == report_schema()
    assert json.loads((root / "instance.schema.json").read_text()) == instance_schema()
    for k in KINDS:
        assert json.loads((root / f"instance.{k}.schema.json").read_text()) == instance_schema(k)


def test_transcript_repeatable(tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    assert catalog_transcript(str(tmp_path / "a")) == catalog_transcript(str(tmp_path / "b"))


@pytest.mark.parametrize("seed", range(6))
def test_generated_bicross_extracts_to_its_matched_pair(capsys, tmp_path, seed):
    bx = str(tmp_path / "bx.json")
    assert run(["gen", "--kind", "bicross", "--seed", str(seed), "--out", bx]) == 0
    ex = str(tmp_path / "ex.json")
    assert run(["extract", "--in", bx, "--out", ex]) == 0
    m = gen_instance("matched_pair", seed).payload
    assert load_spec(ex).payload == m

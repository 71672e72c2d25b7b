import io
import json
from pathlib import Path

import jsonschema
import pytest

from chernflow.cli import load_schema, parse_monomial, parse_window, InputError, run

DATA = Path(__file__).resolve().parent.parent / "data"
OUTPUT = load_schema("output")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv)
    doc = json.loads(out) if out else None
    if doc is not None:
        jsonschema.validate(doc, OUTPUT)
    return code, doc, err


CASES = [
    ("homology", str(DATA / "dx_hy.module.json")),
    ("homology", "--bulk", str(DATA / "bulk.json"), "--window=-8..6"),
    ("ss", str(DATA / "bracket_ell4.module.json"), "--compare-bracket", str(DATA / "bracket_ell4.bracket.json")),
    ("flowposet", str(DATA / "poset.json"), "--dot"),
    ("koszul", str(DATA / "koszul.json")),
    ("koszul", "--random", "20", "--seed", "4"),
    ("validate-tables", str(DATA / "bulk.json")),
    ("interpolate", str(DATA / "interpolate.json")),
    ("chern", str(DATA / "cp2.chern.json")),
    ("chern", "--cotangent-cp", "3"),
    ("bordchar", str(DATA / "cp1xcp2.bordchar.json")),
    ("bordchar", "--cp", "2", "--top", "2"),
    ("bracket", "--n", "3", "--a", "H^2", "--b", "w"),
    ("criterion", "--n", "3"),
    ("verify", "--suite", "1,3"),
]


@pytest.mark.parametrize("argv", CASES, ids=[" ".join(a[:2]) for a in CASES])
def test_commands_succeed_and_match_schema(argv):
    code, doc, err = call_json(*argv)
    assert code == 0, err
    assert doc["command"] == argv[0]


@pytest.mark.parametrize("argv", CASES, ids=[" ".join(a[:2]) for a in CASES])
def test_text_format(argv):
    code, out, err = call(*argv, "--format", "text")
    assert code == 0, err
    assert out.strip()


def test_output_is_deterministic():
    a = call("homology", str(DATA / "dx_hy.module.json"))[1]
    b = call("homology", str(DATA / "dx_hy.module.json"))[1]
    assert a == b


def test_values():
    _, doc, _ = call_json("bracket", "--n", "3", "--a", "H^2", "--b", "w")
    assert doc["result"]["text"] == "-2*H^2"
    _, doc, _ = call_json("homology", str(DATA / "dx_hy.module.json"))
    assert [r for r in doc["result"]["homology"] if r["dim"]] == [{"degree": 3, "dim": 1}]
    _, doc, _ = call_json("criterion", "--n", "3")
    assert doc["result"]["witness"] == "w"


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"ring":\n')
    code, out, err = call("homology", str(p))
    assert code == 1 and "line 2" in err and out == ""


def test_schema_violation_has_pointer(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"ring": {"algebra": {"variables": [{"name": "h"}]}}, "generators": []}))
    code, _, err = call("homology", str(p))
    assert code == 1 and "$.ring.algebra.variables[0]" in err


def test_missing_file():
    code, _, err = call("homology", "/nonexistent/file.json")
    assert code == 1 and "cannot read" in err


def test_perturbed_tables(tmp_path):
    doc = json.loads((DATA / "bulk.json").read_text())
    for e in doc["tables"]["entries"]:
        if any(e["word"]):
            e["count"] += 1
            break
    p = tmp_path / "pert.json"
    p.write_text(json.dumps(doc))
    code, out, _ = call_json("validate-tables", str(p))
    assert code == 2 and out["result"]["status"] == "fail"
    code, _, err = call("homology", "--bulk", str(p), "--window=-8..6")
    assert code == 2 and "witness" in err


def test_d_squared_precondition(tmp_path):
    doc = {"ring": {"algebra": {"variables": []}},
           "generators": [{"label": "a", "degree": 0}, {"label": "b", "degree": 1}, {"label": "c", "degree": 2}],
           "differential": [{"from": "a", "to": "b", "coeff": [{"monomial": [], "coeff": 1}]},
                            {"from": "b", "to": "c", "coeff": [{"monomial": [], "coeff": 1}]}],
           "window": [0, 2]}
    p = tmp_path / "m.json"
    p.write_text(json.dumps(doc))
    code, _, err = call("homology", str(p))
    assert code == 2 and "D^2" in err


def test_window_required(tmp_path):
    doc = json.loads((DATA / "dx_hy.module.json").read_text())
    doc.pop("window")
    p = tmp_path / "m.json"
    p.write_text(json.dumps(doc))
    assert call("homology", str(p))[0] == 1
    assert call("homology", str(p), "--window=-4..4")[0] == 0


def test_cache_hit(tmp_path):
    argv = ("homology", str(DATA / "dx_hy.module.json"), "--cache-dir", str(tmp_path))
    c1, o1, e1 = call(*argv)
    c2, o2, e2 = call(*argv)
    assert c1 == c2 == 0 and o1 == o2
    assert "cache" not in e1 and "served from cache" in e2


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("CHERNFLOW_CACHE_DIR", str(tmp_path))
    call("chern", "--cotangent-cp", "2")
    assert "served from cache" in call("chern", "--cotangent-cp", "2")[2]


def test_failures_not_cached(tmp_path):
    doc = json.loads((DATA / "bulk.json").read_text())
    next(e for e in doc["tables"]["entries"] if any(e["word"]))["count"] += 1
    p = tmp_path / "pert.json"
    p.write_text(json.dumps(doc))
    cache = tmp_path / "cache"
    assert call("validate-tables", str(p), "--cache-dir", str(cache))[0] == 2
    assert "served from cache" not in call("validate-tables", str(p), "--cache-dir", str(cache))[2]


def test_parsers():
    assert parse_window("-3..4") == (-3, 4)
    with pytest.raises(InputError):
        parse_window("4..-3")
    with pytest.raises(InputError):
        parse_window("1-2")
    assert parse_monomial("3*H^2*w") == (3, {"H": 2, "w": 1})
    assert parse_monomial("1/2") == (0.5, {})
    with pytest.raises(InputError):
        parse_monomial("H^")


def test_unknown_loop_generator():
    assert call("bracket", "--n", "2", "--a", "q", "--b", "w")[0] == 1


def test_unknown_criterion():
    assert call("verify", "--suite", "99")[0] == 1

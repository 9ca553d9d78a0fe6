import io
import json

import pytest

from tame_params.cli import format_table, run
from tame_params.oracle import bench


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call("--format", "json", *argv)
    assert code == 0, err
    return json.loads(out)


def test_tame_types_counts():
    assert len(call_json("tame-types", "--catalog", "gl", "--n", "1", "--q", "3", "--level", "2")) == 2
    assert len(call_json("tame-types", "--catalog", "gl", "--n", "2", "--q", "3", "--level", "2")) == 3


def test_format_after_subcommand():
    a = call_json("tame-types", "--catalog", "gl", "--n", "2", "--level", "2")
    code, out, _ = call("tame-types", "--catalog", "gl", "--n", "2", "--level", "2", "--format", "json")
    assert code == 0 and json.loads(out) == a


def test_level_divisible_by_p_rejected():
    code, out, err = call("tame-types", "--catalog", "gl", "--n", "2", "--q", "3", "--level", "3")
    assert code == 1 and out == "" and "error" in err


def test_usage_errors_print_schema():
    for argv in ([], ["dl"], ["group", "show"], ["tame-types", "--catalog", "gl", "--n", "2"],
                 ["serre", "reflect", "--catalog", "sl", "--n", "2"]):
        code, _, err = call(*argv)
        assert code == 1
        assert "group spec JSON fields" in err


def test_unknown_catalog_name():
    code, _, err = call("group", "show", "--catalog", "e8", "--n", "2")
    assert code == 1


def test_group_list_and_show():
    names = [r["name"] for r in call_json("group", "list")]
    assert "gl" in names and "u" in names
    shown = call_json("group", "show", "--catalog", "u", "--n", "3", "--q", "3")
    assert shown["coinvariant_rank"] == 3


def test_spec_file_round_trip(tmp_path):
    shown = call_json("group", "show", "--catalog", "sp4", "--q", "5")
    shown.pop("coinvariant_rank")
    shown.pop("omega_theta_order")
    path = tmp_path / "sp4.json"
    path.write_text(json.dumps(shown))
    assert call_json("group", "validate", "--spec", str(path)) == {"name": shown["name"], "valid": True}
    assert call_json("group", "show", "--spec", str(path))["rank"] == 2


def test_bad_spec_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert call("group", "validate", "--spec", str(path))[0] == 1
    path.write_text(json.dumps({"name": "x", "rank": 1}))
    assert call("group", "validate", "--spec", str(path))[0] == 1
    assert call("group", "validate", "--spec", str(tmp_path / "missing.json"))[0] == 1


def test_dl_forward_and_inverse():
    fwd = call_json("dl", "forward", "--catalog", "gl", "--n", "2", "--w", "s1", "--mu", "0,1")
    assert fwd["class"] == ["1/8", "3/8"]
    inv = call_json("dl", "inverse", "--catalog", "gl", "--n", "2", "--class", "1/8,3/8")
    assert len(inv["presentations"]) == 1
    assert inv["presentations"][0]["w"] == "s1"


def test_dl_inverse_unstable_class():
    code, _, err = call("dl", "inverse", "--catalog", "gl", "--n", "2", "--class", "0,1/8")
    assert code == 1 and "Frobenius" in err


def test_serre_commands():
    box = call_json("serre", "box", "--catalog", "sl", "--n", "2", "--q", "5")
    assert [r["lambda"] for r in box] == [[0], [1], [2], [3], [4]]
    assert call_json("serre", "reflect", "--catalog", "sl", "--n", "2", "--q", "5",
                     "--lambda", "1")["reflected"] == [2]
    assert call_json("serre", "restrict", "--catalog", "sl", "--n", "2", "--q", "5",
                     "--lambda", "7")["lambda"] == [3]
    assert call_json("serre", "regular", "--catalog", "sl", "--n", "2", "--q", "5",
                     "--lambda", "4")["regular"] is False
    code, _, err = call("serre", "reflect", "--catalog", "sl", "--n", "2", "--q", "5", "--lambda", "4")
    assert code == 1 and "NotRegular" in err


def test_serre_recipe():
    rec = call_json("serre", "recipe", "--catalog", "gl", "--n", "2", "--q", "3", "--class", "0,1/2")
    assert rec["tags"] == ["GHS-degenerate"]
    assert rec["twist_weight"] == [0, 0]
    code, _, err = call("serre", "recipe", "--catalog", "u", "--n", "2", "--class", "0,0")
    assert code == 1 and "NoTwistingElement" in err


def test_verify_tori_report():
    rep = call_json("verify", "tori")
    assert set(rep) == {"config", "results", "mismatches", "elapsed_ms"}
    assert rep["mismatches"] == []


def test_verify_mismatch_exit_code(monkeypatch):
    def fake(*a, **k):
        return {"config": {}, "results": [{"match": False}], "mismatches": [{"match": False}],
                "elapsed_ms": 0}
    monkeypatch.setattr(bench, "verify_tori", fake)
    assert call("verify", "tori")[0] == 2


def test_verify_metacyclic_seeded_deterministic():
    a = call_json("verify", "metacyclic", "--qfield", "3", "--seed", "5")
    b = call_json("--seed", "5", "verify", "metacyclic", "--qfield", "3")
    for r in (a, b):
        r.pop("elapsed_ms")
    assert a == b
    assert all(r["status"] == "found" for r in a["results"])


def test_output_deterministic():
    argv = ("tame-types", "--catalog", "u", "--n", "3", "--q", "2", "--level", "3")
    assert call(*argv) == call(*argv)
    assert call("--format", "json", *argv) == call("--format", "json", *argv)


@pytest.mark.parametrize("argv", [
    ("group", "show", "--catalog", "res-gl", "--n", "2", "--f", "2"),
    ("tame-types", "--catalog", "u", "--n", "2", "--ramified", "true", "--level", "8"),
    ("serre", "box", "--catalog", "gl", "--n", "2", "--q", "3", "--r", "2"),
])
def test_json_round_trips(argv):
    code, out, _ = call("--format", "json", *argv)
    assert code == 0
    obj = json.loads(out)
    assert json.loads(json.dumps(obj, sort_keys=True, indent=2)) == obj
    assert json.dumps(obj, sort_keys=True, indent=2) + "\n" == out


def test_table_output():
    code, out, _ = call("tame-types", "--catalog", "gl", "--n", "1", "--level", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split()[0] == "class" and set(lines[1]) <= {"-", " "}
    assert format_table([]) == "(empty)"

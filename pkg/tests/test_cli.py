import json

import pytest

from weylres.arrangement import Arrangement
from weylres.cli import main


def _build(tmp_path, *args, name="a.json"):
    out = tmp_path / name
    assert main(["build", *args, "-o", str(out)]) == 0
    return out


def _json(path):
    return json.loads(path.read_text())


def test_build_counts(tmp_path):
    p = _build(tmp_path, "--type", "B2", "--interval", "-1:4", "--cone")
    assert len(Arrangement.loads(p.read_text())) == 25
    p = _build(tmp_path, "--type", "A3", "--interval", "0:2", "--cone")
    assert len(Arrangement.loads(p.read_text())) == 19


def test_build_rejects_bad_interval(tmp_path):
    assert main(["build", "--type", "B2", "--interval", "3:1", "--cone"]) == 2
    assert main(["build", "--type", "E8"]) == 2
    assert main(["build"]) == 2


def test_betti_json(tmp_path):
    p = _build(tmp_path, "--type", "B2", "--interval", "-1:4", "--cone")
    out = tmp_path / "b.json"
    assert main(["betti", str(p), "--format", "json", "-o", str(out)]) == 0
    js = _json(out)
    assert js["pd"] == 1 and not js["free"]
    assert {(e["i"], e["degree"]): e["count"] for e in js["betti"]} == {(0, 13): 2, (0, 14): 2, (1, 15): 2}


def test_betti_oracle(tmp_path):
    p = _build(tmp_path, "--type", "B2", "--interval", "0:3", "--cone")
    out = tmp_path / "b.json"
    assert main(["betti", str(p), "--oracle", "--module", "d", "--format", "json", "-o", str(out)]) == 0
    assert _json(out)["oracle"]["ok"]


def test_free_and_chi_boolean(tmp_path):
    p = _build(tmp_path, "--boolean", "3")
    out = tmp_path / "f.json"
    assert main(["free", str(p), "--format", "json", "-o", str(out)]) == 0
    assert _json(out)["exponents"] == [1, 1, 1]
    assert main(["chi", str(p), "--format", "json", "-o", str(out)]) == 0
    assert _json(out)["chi"] == [1, -3, 3, -1]


def test_non_central_input_rejected(tmp_path):
    p = _build(tmp_path, "--type", "B2", "--interval", "0:1")
    assert main(["betti", str(p)]) == 2
    assert main(["betti", str(tmp_path / "missing.json")]) == 2


def test_finite_field_needs_flag(tmp_path):
    p = _build(tmp_path, "--boolean", "3")
    assert main(["betti", str(p), "--field", "fp:32003"]) == 2
    assert main(["betti", str(p), "--field", "fp:32003", "--probabilistic"]) == 0


def test_jump_and_export(tmp_path):
    p = _build(tmp_path, "--type", "B2", "--interval", "0:3", "--cone")
    out = tmp_path / "j.json"
    assert main(["jump", str(p), "--random-lines", "3", "--format", "json", "-o", str(out)]) == 0
    js = _json(out)
    assert js["lines"] and all(line["normalization"] == "F" for line in js["lines"])
    assert main(["export", str(p), "--format", "json", "-o", str(out)]) == 0
    res = _json(out)
    assert res
    assert main(["export", str(p), "--what", "arrangement", "-o", str(out)]) == 0


def test_verify_tasks(tmp_path):
    out = tmp_path / "v.json"
    code = main(["verify", "b2-betti", "b2-chern", "shi-catalan-free", "--k", "0", "--j", "3",
                 "--format", "json", "-o", str(out)])
    assert code == 0
    assert all(r["pass"] for r in _json(out)["results"])


def test_verify_usage_errors():
    assert main(["verify", "b2-betti", "--k", "0", "--j", "9"]) == 2
    assert main(["verify", "b2-betti", "--k", "0"]) == 2
    assert main(["verify", "nope", "--k", "0"]) == 2
    assert main(["verify", "b2-distinct", "--k", "0", "--kprime", "0", "--j", "3"]) == 2


def test_step_budget_cap(tmp_path):
    p = _build(tmp_path, "--type", "B2", "--interval", "0:3", "--cone")
    from weylres.logder import clear_cache
    clear_cache()
    code = main(["betti", str(p), "--max-gb-steps", "1"])
    clear_cache()
    assert code in (0, 5)


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0
    assert "verify" in capsys.readouterr().out

from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from dfheight import formats as fmt
from dfheight.cli import run
from dfheight.errors import FormatError

EXP = {"m": 1, "equations": [[[[[0], -1]], [[[0], 1]]]], "seeds": {"0": 1}}
GEOM = {"m": 1, "equations": [[[[0, -1]], [[0, 1], [1, -1]]]], "seeds": [1]}


def call(tmp_path, command, doc, *extra, name="in.json"):
    src = tmp_path / name
    src.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    out = tmp_path / f"{name}.out"
    code = run([command, "--input", str(src), "--output", str(out), *extra])
    text = out.read_text() if out.exists() else None
    return code, (json.loads(text) if text else None), text


def test_recur_from_ode(tmp_path):
    code, rep, _ = call(tmp_path, "recur-from-ode", EXP)
    assert code == 0
    assert rep["recurrence"] == {"order": 1, "coeffs": [["-1"], ["1", "1"]], "offset": 0}


def test_generate_and_reconstruction(tmp_path):
    code, rep, _ = call(tmp_path, "generate", EXP, "--T", "6")
    assert code == 0 and rep["terms"] == ["1", "1", "1/2", "1/6", "1/24", "1/120"]
    code, rep, _ = call(tmp_path, "generate", {"char_poly": [-1, -1, 1], "initial": [1, 1]}, "--T", "8", "--num-deg", "0", "--den-deg", "2")
    assert code == 0
    assert rep["reconstruction"] == {"num": [[[0], "1"]], "den": [[[0], "1"], [[1], "-1"], [[2], "-1"]]}


def test_height_profile(tmp_path):
    code, rep, _ = call(tmp_path, "height-profile", EXP, "--T", "300")
    assert code == 0
    assert rep["growth"] == "nlogn" and rep["property_P"] is False
    assert rep["step_violations"] == []


def test_certify(tmp_path):
    code, rep, _ = call(tmp_path, "certify-rational", GEOM)
    assert code == 0 and rep["verdict"] == "certified-rational"
    code, rep, _ = call(tmp_path, "certify-rational", EXP)
    assert code == 0 and rep["verdict"] == "hypothesis-violated"


def test_classify_lrs(tmp_path):
    code, rep, _ = call(tmp_path, "classify-lrs", {"num": [[[0], 1]], "den": [[[0], 1], [[3], -1]]}, "--modulus", "3", "--residue", "1")
    assert code == 0
    assert rep["roots_of_unity"]["all_roots_of_unity"] is True
    assert rep["periodicity"]["period"] == 3
    code, rep, _ = call(tmp_path, "classify-lrs", {"char_poly": [-1, -1, 1], "initial": [0, 1]})
    assert code == 0 and rep["roots_of_unity"]["all_roots_of_unity"] is False
    assert rep["closed_form"] is None


def test_denominator_check(tmp_path):
    G = {"poly": [[[0, 0], 1], [[0, 1], 1], [[1, 1], -1], [[1, 2], -1]]}
    code, rep, _ = call(tmp_path, "denominator-check", G)
    assert code == 0 and rep["is_cyclotomic_form"] is True


def test_theorem2(tmp_path):
    doc = {
        "system": {"m": 1, "equations": [[[[0, -1]], [[0, 1], [1, -1]]]]},
        "witness": {"d": 0, "alphas": [1], "c": {"period": 1, "table": [[[1]]]}},
    }
    code, rep, _ = call(tmp_path, "theorem2-check", doc, "--T", "10")
    assert code == 0 and rep["beta_checked"] == 11
    doc["witness"]["c"]["table"] = [[[2]]]
    doc["witness"]["c"]["period"] = 1
    code, rep, _ = call(tmp_path, "theorem2-check", doc, "--T", "10")
    assert code == 0  # scaled witness is still a solution
    doc["witness"] = {"d": 0, "alphas": [1], "c": {"period": 2, "table": [[[1]], [[2]]]}}
    code, rep, _ = call(tmp_path, "theorem2-check", doc, "--T", "10")
    assert code == 0 and rep["beta_identity"] == "fails" and rep["failing_r"] == 0


def test_substitute(tmp_path):
    doc = {"num": [[[0, 0], 1]], "den": [[[0, 0], 1], [[1, 1], -1]]}
    code, rep, _ = call(tmp_path, "substitute", doc, "--u", "1,2")
    assert code == 0
    assert rep["ratfun"]["den"] == [[[0], "1"], [[3], "-1"]]
    code, _, _ = call(tmp_path, "substitute", doc, "--u", "0,2")
    assert code == 2


def test_exit_codes(tmp_path, capsys):
    code, _, _ = call(tmp_path, "generate", "{not json")
    assert code == 2
    bad = {"m": 1, "equations": [[[[[0], 1.5]]]]}
    code, _, _ = call(tmp_path, "generate", bad)
    assert code == 2
    assert "equations[0][0][0][1]" in capsys.readouterr().err
    # x f' - 3 f = 0 gives (n - 3) a_n = 0, so a_3 needs a seed
    singular = {"m": 1, "equations": [[[[[0], -3]], [[[1], 1]]]], "seeds": {}}
    code, _, _ = call(tmp_path, "generate", singular, "--T", "8")
    assert code == 3
    assert "(index 3)" in capsys.readouterr().err
    singular["seeds"] = {"3": 5}
    code, rep, _ = call(tmp_path, "generate", singular, "--T", "6")
    assert code == 0 and rep["terms"] == ["0", "0", "0", "5", "0", "0"]
    assert run(["generate", "--input", str(tmp_path / "missing.json")]) == 2


def test_output_is_deterministic(tmp_path):
    _, _, first = call(tmp_path, "height-profile", EXP, "--T", "50", name="a.json")
    _, _, second = call(tmp_path, "height-profile", EXP, "--T", "50", name="b.json")
    assert first == second
    meta = tmp_path / "meta.json"
    run(["certify-rational", "--input", str(tmp_path / "a.json"), "--output", str(tmp_path / "c.out"), "--meta", str(meta)])
    assert "elapsed_seconds" in json.loads(meta.read_text())
    assert "elapsed_seconds" not in (tmp_path / "c.out").read_text()


def test_console_entry_point(tmp_path):
    src = tmp_path / "exp.json"
    src.write_text(json.dumps(EXP))
    proc = subprocess.run(
        [sys.executable, "-m", "dfheight.cli", "generate", "--input", str(src), "--T", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["terms"] == ["1", "1", "1/2"]


def test_format_round_trips():
    sysdoc = {"m": 1, "equations": [[[[[0], -1]], [[[0], 1]]]]}
    sys_ = fmt.parse_system(sysdoc)
    assert fmt.parse_system(fmt.dump_system(sys_)).equations == sys_.equations
    z = fmt.parse_scalar({"order": 3, "coords": ["1/2", 0]})
    assert fmt.parse_scalar(fmt.dump_scalar(z)) == z
    assert fmt.parse_scalar("3/4") == Fraction(3, 4)
    with pytest.raises(FormatError) as exc:
        fmt.parse_scalar({"order": 3, "coords": [1]}, "x")
    assert exc.value.field == "x.coords"
    with pytest.raises(FormatError):
        fmt.parse_seeds({"a": 1})

import json
import subprocess
import sys
from pathlib import Path

import pytest

from orbifold import io
from orbifold.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run
from orbifold.config import FIELD_ENV, SessionConfig

ROOT = Path(__file__).resolve().parents[1]
INPUTS = ROOT / "inputs"

KIND_OF = {"algebra": "algebra", "bimodule": "bimodule", "tri": "tri", "fusion": "fusion", "bordism": "bordism"}

# documented outcome of the natural check for each shipped input
EXPECTED = {
    "algebra_z2.json": (["check-frobenius"], EXIT_OK),
    "algebra_z2_unscaled.json": (["check-frobenius"], EXIT_FAIL),
    "algebra_s3.json": (["check-frobenius"], EXIT_OK),
    "algebra_end2.json": (["check-frobenius"], EXIT_OK),
    "bimodule_column_k2.json": (["morita", "qdim"], EXIT_OK),
    "bimodule_row_k2.json": (["morita", "qdim"], EXIT_OK),
    "bimodule_regular_z2.json": (["morita", "qdim"], EXIT_OK),
    "tri_sphere2.json": (["tri", "validate"], EXIT_OK),
    "tri_torus.json": (["tri", "validate"], EXIT_OK),
    "tri_sphere3.json": (["tri", "validate"], EXIT_OK),
    "fusion_vec_z2.json": (["tqft3d", "pentagon", "--fusion"], EXIT_OK),
    "fusion_fibonacci.json": (["tqft3d", "pentagon", "--fusion"], EXIT_OK),
    "fusion_fibonacci_perturbed.json": (["tqft3d", "pentagon", "--fusion"], EXIT_FAIL),
    "bordism_pants.json": (["tqft2d", "orbifold", "--algebra", str(INPUTS / "algebra_z2.json"), "--bordism"], EXIT_OK),
    "bordism_cylinder.json": (["tqft2d", "orbifold", "--algebra", str(INPUTS / "algebra_s3.json"), "--bordism"],
                              EXIT_OK),
}


def call(argv, capsys):
    code = run([str(a) for a in argv])
    out = capsys.readouterr().out
    lines = [ln for ln in out.splitlines() if ln.strip()]
    assert len(lines) == 1, out
    return code, json.loads(lines[0]), lines[0]


def test_every_input_is_covered():
    assert sorted(p.name for p in INPUTS.glob("*.json")) == sorted(EXPECTED)


@pytest.mark.parametrize("fname", sorted(EXPECTED))
def test_inputs_pass_schema(fname):
    kind = KIND_OF[fname.split("_")[0]]
    assert io.schema_validate(INPUTS / fname, kind).ok


@pytest.mark.parametrize("fname", sorted(EXPECTED))
def test_inputs_documented_outcome(fname, capsys):
    prefix, want = EXPECTED[fname]
    code, doc, _ = call(prefix + [INPUTS / fname], capsys)
    assert code == want, doc


def test_output_is_deterministic(capsys):
    argv = ["tqft3d", "tv", "--fusion", INPUTS / "fusion_fibonacci.json", "--tri", INPUTS / "tri_sphere3.json"]
    _, doc, a = call(argv, capsys)
    _, _, b = call(argv, capsys)
    assert a == b
    assert doc["value"] == "1/2-1/10*sqrt(5)"
    assert list(doc) == sorted(doc)


def test_fuzz_reports_walk_invariance(capsys):
    code, doc, _ = call(["tqft2d", "fuzz", "--algebra", "builtin:s3", "--surface", "torus2_7v",
                         "--steps", "20", "--seed", "4"], capsys)
    assert code == EXIT_OK
    assert doc["value"] == "3" and doc["walk_invariant"] is True


def test_morita_compose_from_files(capsys):
    col, row = INPUTS / "bimodule_column_k2.json", INPUTS / "bimodule_row_k2.json"
    code, doc, _ = call(["morita", "compose", row, col], capsys)
    assert code == EXIT_OK and doc["dim"] == 1
    code, doc, _ = call(["morita", "compose", col, row, col], capsys)
    assert code == EXIT_OK and doc["associator_invertible"] is True


def test_euler_and_chi(capsys):
    code, doc, _ = call(["euler", "--psi", "3", "--tri", "library:genus_g(2)"], capsys)
    assert code == EXIT_OK and doc["value"] == "1/9"
    code, doc, _ = call(["tri", "chi", "library:genus_g(2)"], capsys)
    assert doc["chi"] == -2


def test_tv_refuses_invalid_fusion(capsys):
    code, doc, _ = call(["tqft3d", "tv", "--fusion", "builtin:fibonacci_perturbed", "--tri", "library:sphere3"],
                        capsys)
    assert code == EXIT_FAIL and doc["witnesses"]["pentagon"]


@pytest.mark.parametrize("argv", [[], ["nonsense"], ["tri", "chi"], ["tqft2d", "closed", "--algebra", "builtin:z2"],
                                  ["euler", "--tri", "library:sphere2"], ["check-frobenius", "builtin:nope"],
                                  ["tri", "chi", "library:nope"], ["tri", "chi", "/nonexistent.json"]])
def test_usage_and_input_errors_exit_2(argv, capsys):
    code, doc, _ = call(argv, capsys)
    assert code == EXIT_USAGE
    assert "error" in doc


def test_schema_errors_name_the_path(tmp_path, capsys):
    obj = json.loads((INPUTS / "algebra_z2.json").read_text())
    obj["mu"] = obj["mu"][:-1]
    del obj["unit"]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(obj))
    rep = io.schema_validate(p, "algebra")
    assert not rep.ok
    msgs = [e["message"] for e in rep.to_json()["errors"]]
    assert any("unit" in m for m in msgs)
    code, doc, _ = call(["check-frobenius", p], capsys)
    assert code == EXIT_USAGE


def test_length_mismatch_reported(tmp_path):
    obj = json.loads((INPUTS / "algebra_z2.json").read_text())
    obj["mu"] = obj["mu"][:-1]
    p = tmp_path / "short.json"
    p.write_text(json.dumps(obj))
    errs = io.schema_validate(p, "algebra").to_json()["errors"]
    assert any("length" in e["message"] and e["path"] == "$.mu" for e in errs)


def test_malformed_json_reports_position(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text('{"n": 2,\n "simplices": [[0, 1, 2]')
    code, doc, _ = call(["tri", "validate", p], capsys)
    assert code == EXIT_USAGE
    assert "line 2" in doc["message"]


def test_field_override(monkeypatch, capsys):
    code, doc, _ = call(["check-frobenius", INPUTS / "algebra_z2.json", "--field", "C64"], capsys)
    assert code == EXIT_OK and doc["field"] == "C64"
    monkeypatch.setenv(FIELD_ENV, "Q(sqrt:5)")
    assert SessionConfig.from_env().field == "Q(sqrt:5)"
    assert SessionConfig.from_env(field="Q").field == "Q"
    code, doc, _ = call(["check-frobenius", INPUTS / "algebra_z2.json"], capsys)
    assert doc["field"] == "Q(sqrt:5)"


def test_config_validation():
    with pytest.raises(ValueError):
        SessionConfig(epsilon=0)
    with pytest.raises(ValueError):
        SessionConfig(field="R")


def test_loader_roundtrips():
    A = io.load_algebra(INPUTS / "algebra_s3.json")
    assert io.algebra_from_obj(io.algebra_to_obj(A)).mu.equals(A.mu)
    X = io.load_bimodule(INPUTS / "bimodule_column_k2.json")
    Y = io.bimodule_from_obj(io.bimodule_to_obj(X))
    assert Y.left_action.equals(X.left_action)


def test_console_script_subprocess():
    out = subprocess.run([sys.executable, "-m", "orbifold.cli", "tri", "chi", "library:t3"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout) == {"chi": 0, "counts": [1, 7, 12, 6]}

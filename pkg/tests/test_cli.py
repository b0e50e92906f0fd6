import json

import numpy as np
import pytest

from liecurve import io
from liecurve.cli import main
from liecurve.lie_algebra import PRESETS
from liecurve.synthesis import circular_helix, integrate_frame

from conftest import build


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def helix_file(tmp_path, capsys):
    path = tmp_path / "helix.json"
    assert run(capsys, "synthesize", "helix", "--kappa", 0.12, "--tau", 0.16, "--out", path)[0] == 0
    return path


@pytest.fixture
def cosh_file(tmp_path, capsys):
    path = tmp_path / "cosh.json"
    code, _, _ = run(capsys, "synthesize", "slant-mannheim", "--a", 1, "--b", 1, "--lambda", 0.5,
                     "--range", 0.5, 2.5, "--algebra", "abelian", "--out", path)
    assert code == 0
    return path


def test_synthesized_helix_classifies_general(capsys, helix_file):
    code, out, _ = run(capsys, "classify", helix_file)
    assert code == 0
    res = json.loads(out)
    assert res["kind"] == "general_helix"
    assert res["witness"]["c"] == pytest.approx(4 / 3, abs=1e-4)
    prov = json.loads(helix_file.read_text())["provenance"]
    assert prov["kappa"] == 0.12 and prov["h"] == 1e-3


def test_analyze_writes_csv_and_summary(capsys, tmp_path, helix_file):
    csv = tmp_path / "fd.csv"
    code, out, _ = run(capsys, "analyze", helix_file, "--out", csv)
    assert code == 0
    assert csv.read_text().splitlines()[0] == "s,kappa,tau,tau_G,H,H_prime,sigma_N"
    summary = json.loads(out)
    assert summary["csv"] == str(csv)
    assert summary["kappa"]["min"] == pytest.approx(0.12, rel=1e-5)
    assert summary["classification"]["kind"] == "general_helix"


def test_slant_mannheim_file_passes_check(capsys, cosh_file):
    code, out, _ = run(capsys, "mannheim", "check", cosh_file)
    assert code == 0
    res = json.loads(out)
    assert res["is_mannheim"] is True
    assert res["lambda_hat"] == pytest.approx(0.5, abs=1e-4)


def test_partner_reports_constant_H_beta(capsys, tmp_path, cosh_file):
    partner = tmp_path / "beta.json"
    code, out, _ = run(capsys, "mannheim", "partner", cosh_file, "--lambda", 0.5, "--partner-curve", partner)
    assert code == 0
    res = json.loads(out)
    H_beta = np.array(res["tracks"]["H_beta"], dtype=float)
    assert np.nanmax(np.abs(H_beta - 2.0)) <= 1e-3
    assert res["partner_classification"]["kind"] == "general_helix"
    beta = io.read_curve(partner)
    a = io.read_curve(cosh_file)
    d = np.linalg.norm(beta.position - a.position, axis=1)
    np.testing.assert_allclose(d, 0.5, atol=1e-10)


def test_inverse_rebuilds_the_curve(capsys, tmp_path, cosh_file):
    partner, back = tmp_path / "beta.json", tmp_path / "alpha.json"
    run(capsys, "mannheim", "partner", cosh_file, "--partner-curve", partner)
    code, out, _ = run(capsys, "mannheim", "inverse", partner, "--out-curve", back)
    assert code == 0
    res = json.loads(out)
    assert res["fitted"] and res["mu"] == pytest.approx(-0.5, rel=1e-4)
    a, b = io.read_curve(cosh_file), io.read_curve(back)
    assert np.max(np.abs(a.position - b.position)) < 1e-6


def test_circle_partner_exits_4_with_trim_advice(capsys, tmp_path):
    path = tmp_path / "circle.json"
    io.write_curve(path, integrate_frame(circular_helix(0.5, 0.0, "abelian", (0, 6), 1e-2)).curve)
    code, _, err = run(capsys, "mannheim", "partner", path)
    assert code == 4
    assert "--trim" in err


def test_unknown_algebra_lists_presets(capsys):
    code, _, err = run(capsys, "synthesize", "helix", "--kappa", 1, "--tau", 1, "--algebra", "unknown")
    assert code == 2
    for name in PRESETS:
        assert name in err


def test_generator_names_missing_flags(capsys):
    code, _, err = run(capsys, "synthesize", "slant-mannheim", "--a", 1)
    assert code == 2
    assert "--b, --lambda" in err


def test_malformed_curve_names_key(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"algebra": "abelian", "s": [0, 1, 2]}))
    code, _, err = run(capsys, "analyze", path)
    assert code == 2
    assert "'tangent'" in err
    path.write_text('{"algebra": "abelian",\n "s": [0, 1}')
    code, _, err = run(capsys, "analyze", path)
    assert code == 2
    assert "bad.json:2:" in err


def test_vanishing_curvature_exits_3(capsys, tmp_path):
    s = np.linspace(0, 1, 101)
    T = np.tile([1.0, 0.0, 0.0], (101, 1))
    path = tmp_path / "line.json"
    path.write_text(json.dumps({"algebra": "abelian", "s": s.tolist(), "tangent": T.tolist()}))
    code, _, err = run(capsys, "analyze", path)
    assert code == 3
    assert "s=0" in err


def test_failed_command_writes_no_output(capsys, tmp_path):
    out = tmp_path / "fd.csv"
    path = tmp_path / "line.json"
    path.write_text(json.dumps({"algebra": "abelian", "s": [0, 1, 2, 3, 4, 5],
                                "tangent": [[1, 0, 0]] * 6}))
    assert run(capsys, "analyze", path, "--out", out)[0] == 3
    assert not out.exists()


def test_config_precedence(capsys, tmp_path, monkeypatch, cosh_file):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tol": 1e-30}))
    monkeypatch.setenv("LIECURVE_CONFIG", str(cfg))
    # the config's impossible tolerance rejects the curve
    assert json.loads(run(capsys, "mannheim", "check", cosh_file)[1])["is_mannheim"] is False
    # a flag beats the config
    assert json.loads(run(capsys, "mannheim", "check", cosh_file, "--tol", 1e-4)[1])["is_mannheim"] is True
    # an explicit config file beats the environment
    other = tmp_path / "other.json"
    other.write_text(json.dumps({"tol": 1e-4}))
    assert json.loads(run(capsys, "mannheim", "check", cosh_file, "--config", other)[1])["is_mannheim"] is True


def test_config_must_be_an_object(capsys, tmp_path, cosh_file):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("[1]")
    code, _, err = run(capsys, "--config", cfg, "mannheim", "check", cosh_file)
    assert code == 2 and "JSON object" in err


def test_verify_single_entry(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, _, _ = run(capsys, "verify-theorems", "--only", "thm-3.5", "--out", out)
    assert code == 0
    rep = json.loads(out.read_text())
    assert [e["id"] for e in rep["entries"]] == ["thm-3.5"]
    assert "displayed" in rep["entries"][0]["notes"][0]


def test_verify_unknown_id_exits_2(capsys):
    code, _, err = run(capsys, "verify-theorems", "--only", "thm-9")
    assert code == 2 and "thm-3.5" in err


def test_groups(capsys):
    code, out, _ = run(capsys, "groups", "list")
    assert code == 0
    assert {g["name"]: g["lie_torsion"] for g in json.loads(out)} == {"abelian": 0.0, "su2": 1.0, "so3": 0.5}
    code, out, _ = run(capsys, "groups", "show", "su2")
    res = json.loads(out)
    assert code == 0 and res["bi_invariant"] and res["jacobi_residual"] == 0.0


def test_stdout_curve_matches_file(capsys, tmp_path, helix_file):
    code, out, _ = run(capsys, "synthesize", "helix", "--kappa", 0.12, "--tau", 0.16)
    assert code == 0
    assert out == helix_file.read_text()


def test_reparametrized_input_is_flagged(capsys, tmp_path):
    b = build("helix", "abelian", h=1e-2)
    c = b.curve
    path = tmp_path / "slow.json"
    path.write_text(json.dumps({"algebra": "abelian", "s": (2 * c.s).tolist(), "tangent": (c.tangent / 2).tolist()}))
    code, out, _ = run(capsys, "analyze", path)
    assert code == 0
    summary = json.loads(out)
    assert summary["reparametrized"] is True
    assert summary["kappa"]["max"] == pytest.approx(0.12, rel=1e-4)

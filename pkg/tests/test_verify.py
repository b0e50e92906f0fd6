import pytest

from liecurve import verify
from liecurve.errors import ValidationError


@pytest.fixture(scope="module")
def full_report():
    return verify.run()


def test_every_id_once_and_sorted(full_report):
    ids = [e["id"] for e in full_report.to_json()["entries"]]
    assert ids == sorted(verify.THEOREM_IDS)
    assert full_report.passed


def test_environment_is_recorded(full_report):
    env = full_report.to_json()["environment"]
    assert env["seed"] == verify.Config.seed
    assert env["h"] == 1e-3
    assert env["presets"] == ["abelian", "su2", "so3"]
    assert env["tolerances"]["distance_abelian"] == 1e-10


def test_entries_carry_contract_fields(full_report):
    for e in full_report.to_json()["entries"]:
        assert e["status"] in ("pass", "fail", "skipped")
        assert {"max_residual", "tolerance", "notes", "details"} <= set(e)


def test_reported_only_rows_do_not_gate(full_report):
    rows = [d for e in full_report.entries.values() for d in e.details if d.get("reported_only")]
    assert rows, "quaternion positional partner rows are reported"
    assert all(r["fixture"].split("/")[-1] in ("su2", "so3") for r in rows)


def test_round_trip_block(full_report):
    rows = full_report.roundtrip
    assert len(rows) == 6
    assert all(r["passed"] for r in rows)


def test_only_filter():
    rep = verify.run(verify.Config(only=("thm-3.1", "prop-3.1"), presets=("abelian",)))
    assert [e["id"] for e in rep.to_json()["entries"]] == ["prop-3.1", "thm-3.1"]
    assert "roundtrip" not in rep.to_json()


def test_reports_are_byte_identical():
    cfg = verify.Config(only=("thm-3.2", "thm-3.2.5"), presets=("su2",))
    from liecurve.io import dumps
    assert dumps(verify.run(cfg).to_json()) == dumps(verify.run(cfg).to_json())


def test_seed_changes_random_family_only():
    a = verify.run(verify.Config(only=("thm-3.2",), presets=("abelian",))).to_json()
    b = verify.run(verify.Config(only=("thm-3.2",), presets=("abelian",), seed=7)).to_json()
    rows = lambda r: {d["fixture"]: d["lambda_hat"] for d in r["entries"][0]["details"] if "lambda_hat" in d}
    ra, rb = rows(a), rows(b)
    assert ra["helix/abelian"] == rb["helix/abelian"]
    assert ra["random/abelian"] == pytest.approx(rb["random/abelian"], rel=1e-6)


def test_convergence_mode():
    rows = verify.convergence(verify.Config(convergence_h=(4e-3, 2e-3), presets=("so3",)))
    assert {(r["fixture"], r["quantity"]) for r in rows} == {
        ("helix/so3", "kappa"), ("helix/so3", "tau"), ("cosh/so3", "kappa"), ("cosh/so3", "tau")}
    for r in rows:
        assert r["min_ratio"] >= 12, r


@pytest.mark.parametrize("cfg", [verify.Config(only=("thm-9",)), verify.Config(presets=("su3",))])
def test_bad_config_raises(cfg):
    with pytest.raises(ValidationError):
        verify.run(cfg)

"""End-to-end command-line checks: exit codes, JSON schemas, file output."""

import hashlib
import json
import math

import pytest

from conftest import run_cli, validate_payload


# -- eval ---------------------------------------------------------------------


def test_eval_identity_text():
    res = run_cli("eval", "--family", "identity", "--z", "0.5,0")
    assert res.returncode == 0, res.stderr
    assert "0.5" in res.stdout


def test_eval_identity_json_schema():
    res = run_cli("eval", "--family", "identity", "--z", "0.5,0", "--json")
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    validate_payload(payload, "eval.json")
    assert payload["f"] == [0.5, 0.0]
    assert payload["jacobian"] == pytest.approx(1.0)


def test_eval_branched_family_origin():
    res = run_cli("eval", "--family", "counterexample:gamma=1.25",
                  "--z", "0,0", "--json")
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    assert payload["f"] == [0.0, 0.0]


def test_eval_quadratic_shear_value():
    res = run_cli("eval", "--family", "bl:lam=0.3", "--z", "0.5,0", "--json")
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    assert payload["f"][0] == pytest.approx(0.525, abs=1e-12)
    assert payload["f"][1] == pytest.approx(0.0, abs=1e-12)


def test_eval_greek_alias_and_fraction():
    res = run_cli("eval", "--family", "counterexample:γ=5/4", "--z", "0.1,0.2",
                  "--json")
    assert res.returncode == 0, res.stderr
    ref = run_cli("eval", "--family", "counterexample:gamma=1.25",
                  "--z", "0.1,0.2", "--json")
    assert json.loads(res.stdout)["f"] == json.loads(ref.stdout)["f"]


def test_eval_outside_disk_is_domain_error():
    res = run_cli("eval", "--family", "identity", "--z", "1.5,0")
    assert res.returncode == 2
    assert "error:" in res.stderr


def test_eval_unknown_family_usage_error():
    res = run_cli("eval", "--family", "nope:x=1", "--z", "0,0")
    assert res.returncode == 2
    assert "error:" in res.stderr


def test_eval_missing_required_flag():
    res = run_cli("eval", "--family", "identity")
    assert res.returncode == 2


# -- check --------------------------------------------------------------------


def test_check_pbeta_passes():
    res = run_cli("check", "--family", "counterexample:gamma=1.25",
                  "--pbeta", "1.125")
    assert res.returncode == 0, res.stdout + res.stderr


def test_check_pbeta_fails():
    res = run_cli("check", "--family", "counterexample:gamma=1.25",
                  "--pbeta", "1.01")
    assert res.returncode == 1


def test_check_class_membership_fails_for_quadratic_shear():
    res = run_cli("check", "--family", "bl:lam=0.3", "--class", "0.9,1,1")
    assert res.returncode == 1


def test_check_class_membership_passes_for_extremal():
    res = run_cli("check", "--family", "extremal:alpha=0.5,zeta=0.5,n=1",
                  "--cls", "0.5,0.5,1", "--json")
    assert res.returncode == 0, res.stdout + res.stderr
    payload = json.loads(res.stdout)
    validate_payload(payload, "bound_report.json")
    assert payload["report"]["pass"] is True


def test_check_json_report_schema_on_failure():
    # note the --cls= form: a bare "-0.5,..." would parse as an option
    res = run_cli("check", "--family", "counterexample:gamma=1.25",
                  "--cls=-0.5,1,1", "--json")
    assert res.returncode == 1
    payload = json.loads(res.stdout)
    validate_payload(payload, "bound_report.json")
    assert payload["report"]["pass"] is False


def test_check_theorem_b_admissibility_error():
    res = run_cli("check", "--family", "counterexample:gamma=1.25",
                  "--theorem-b", "1,0,0.6,2")
    assert res.returncode == 2
    assert "error:" in res.stderr


def test_check_requires_a_mode():
    res = run_cli("check", "--family", "identity")
    assert res.returncode == 2


# -- verify-bounds ------------------------------------------------------------


def test_verify_bounds_covering_json():
    res = run_cli("verify-bounds", "--what", "covering", "--json", timeout=300)
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    validate_payload(payload, "bound_report_list.json")
    assert payload["all_pass"] is True
    assert len(payload["reports"]) > 0
    for rep in payload["reports"]:
        assert rep["pass"] is True


def test_verify_bounds_coefficients_text():
    res = run_cli("verify-bounds", "--what", "coefficients", timeout=300)
    assert res.returncode == 0, res.stderr
    assert "all checks passed" in res.stdout


def test_verify_bounds_restricted_lattice():
    res = run_cli("verify-bounds", "--what", "growth", "--alphas", "0.5",
                  "--zetas", "0", "--zeta-rel", "", "--ns", "1",
                  "--radii", "0.3,0.7", "--json", timeout=300)
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    assert payload["all_pass"] is True


# -- counterexample -----------------------------------------------------------


def test_counterexample_json_schema_and_values():
    res = run_cli("counterexample", "--gamma", "1.25", "--json")
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    validate_payload(payload, "collision.json")
    assert payload["gamma"] == pytest.approx(1.25)
    assert payload["r0"] == pytest.approx(0.9924038765061041, abs=1e-12)
    assert payload["threshold"] == pytest.approx(0.984807753012208, abs=1e-12)
    z1 = complex(*payload["z1"])
    z2 = complex(*payload["z2"])
    assert z2 == pytest.approx(z1.conjugate())
    assert payload["image_gap"] < 1e-8


def test_counterexample_accepts_fraction():
    a = run_cli("counterexample", "--gamma", "5/4", "--json")
    b = run_cli("counterexample", "--gamma", "1.25", "--json")
    assert a.returncode == 0 and b.returncode == 0
    assert json.loads(a.stdout)["r0"] == json.loads(b.stdout)["r0"]


def test_counterexample_infeasible_gamma():
    res = run_cli("counterexample", "--gamma", "0.9")
    assert res.returncode == 2


# -- univalence ---------------------------------------------------------------


def test_univalence_identity_certified():
    res = run_cli("univalence", "--family", "identity", "--r", "0.9",
                  "--cells", "64", "--json")
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    validate_payload(payload, "univalence_report.json")
    assert payload["report"]["verdict"] == "certified-at-resolution"


def test_univalence_bad_cells_usage_error():
    res = run_cli("univalence", "--family", "identity", "--cells", "8")
    assert res.returncode == 2


# -- area ---------------------------------------------------------------------


def test_area_identity_quarter_pi():
    res = run_cli("area", "--family", "identity", "--r", "0.5", "--json")
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    validate_payload(payload, "area.json")
    assert payload["area"] == pytest.approx(math.pi / 4.0, rel=1e-9)
    assert payload["closed_form"] == pytest.approx(math.pi / 4.0, rel=1e-12)


def test_area_with_class_envelope():
    res = run_cli("area", "--family", "extremal:alpha=0.5,zeta=0.5,n=1",
                  "--r", "0.5", "--cls", "0.5,0.5,1", "--json")
    assert res.returncode == 0, res.stderr
    payload = json.loads(res.stdout)
    validate_payload(payload, "area.json")
    assert payload["lower"] <= payload["area"] <= payload["upper"]


def test_area_envelope_violation_exits_one():
    # the alpha = 0 extremal has a far larger image than anything the narrow
    # alpha = 0.99 class allows, so its area must breach that envelope
    res = run_cli("area", "--family", "extremal:alpha=0,zeta=0,n=1",
                  "--r", "0.9", "--cls", "0.99,0,1", "--json")
    assert res.returncode == 1
    payload = json.loads(res.stdout)
    assert payload["area"] > payload["upper"] + 1e-8


# -- render -------------------------------------------------------------------


def test_render_writes_deterministic_svg(tmp_path):
    out = tmp_path / "fig.svg"
    res1 = run_cli("render", "--family", "counterexample:gamma=1.25",
                   "--preset", "boundary", "--out", out, "--json")
    assert res1.returncode == 0, res1.stderr
    manifest = json.loads(res1.stdout)
    validate_payload(manifest, "render.json")
    data = out.read_bytes()
    assert len(data) == manifest["bytes"]
    assert hashlib.sha256(data).hexdigest() == manifest["sha256"]

    out2 = tmp_path / "fig2.svg"
    res2 = run_cli("render", "--family", "counterexample:gamma=1.25",
                   "--preset", "boundary", "--out", out2, "--json")
    assert json.loads(res2.stdout)["sha256"] == manifest["sha256"]
    assert out2.read_bytes() == data


def test_render_zoom_centers_on_collision(tmp_path):
    out = tmp_path / "zoom.svg"
    res = run_cli("render", "--family", "counterexample:gamma=1.25",
                  "--preset", "zoom", "--out", out, "--json")
    assert res.returncode == 0, res.stderr
    manifest = json.loads(res.stdout)
    assert manifest["scene"]["center"][0] == pytest.approx(
        1.1617533476418234, abs=1e-9)
    assert manifest["scene"]["center"][1] == pytest.approx(0.0, abs=1e-12)


def test_render_zoom_needs_collision_family():
    res = run_cli("render", "--family", "identity", "--preset", "zoom")
    assert res.returncode == 2


def test_render_custom_overrides(tmp_path):
    out = tmp_path / "c.svg"
    res = run_cli("render", "--family", "identity", "--preset", "overview",
                  "--circles", "3", "--rays", "4", "--samples", "128",
                  "--r", "0.8", "--out", out, "--json")
    assert res.returncode == 0, res.stderr
    scene = json.loads(res.stdout)["scene"]
    assert scene["circles"] == 3
    assert scene["rays"] == 4
    assert scene["samples_per_curve"] == 128
    assert scene["radius"] == pytest.approx(0.8)


# -- global behavior ----------------------------------------------------------


def test_version_flag():
    res = run_cli("--version")
    assert res.returncode == 0
    assert "harmap" in res.stdout


def test_out_writes_json_file(tmp_path):
    out = tmp_path / "eval.json"
    res = run_cli("eval", "--family", "identity", "--z", "0.25,0.25",
                  "--json", "--out", out)
    assert res.returncode == 0, res.stderr
    payload = json.loads(out.read_text(encoding="utf-8"))
    validate_payload(payload, "eval.json")


def test_json_envelope_has_version_and_config():
    res = run_cli("area", "--family", "identity", "--r", "0.5", "--json")
    payload = json.loads(res.stdout)
    assert "version" in payload
    assert isinstance(payload["config"], dict)
    assert payload["config"]["family"] == "identity"


def test_missing_subcommand_usage_error():
    res = run_cli()
    assert res.returncode == 2

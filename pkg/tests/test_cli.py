import json

import numpy as np
import pytest

from clifbundle.cli import main
from clifbundle.transport import matrix_to_json, qubit_scenario_dict


def write_scenario(tmp_path, data) -> str:
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(data))
    return str(path)


def load_report(out_dir, name) -> dict:
    return json.loads((out_dir / name).read_text())


# ---------------------------------------------------------------------------
# verify


def test_verify_single_signature_passes(tmp_path, capsys):
    code = main(["verify", "--signature", "3,1", "--out", str(tmp_path)])
    assert code == 0
    report = load_report(tmp_path, "verify_report.json")
    assert all(c["status"] == "pass" for c in report["checks"])
    assert report["config"]["seed"] == 0


def test_verify_includes_quaternion_check(tmp_path):
    code = main(["verify", "--signature", "0,2", "--out", str(tmp_path)])
    assert code == 0
    report = load_report(tmp_path, "verify_report.json")
    names = [c["name"] for c in report["checks"]]
    assert "cl02-quaternion-table" in names


def test_verify_rejects_zero_dimension():
    assert main(["verify", "--signature", "0,0"]) == 2


def test_verify_rejects_oversized_signature():
    assert main(["verify", "--signature", "9,9"]) == 2


def test_verify_deterministic_reports(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["verify", "--signature", "1,1", "--seed", "7", "--out", str(out1)]) == 0
    assert main(["verify", "--signature", "1,1", "--seed", "7", "--out", str(out2)]) == 0
    r1 = load_report(out1, "verify_report.json")
    r2 = load_report(out2, "verify_report.json")
    r1.pop("wall_time_s")
    r2.pop("wall_time_s")
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


# ---------------------------------------------------------------------------
# spinor-rep


def test_spinor_rep_reports_matrices(tmp_path):
    code = main(["spinor-rep", "--signature", "3,1", "--out", str(tmp_path)])
    assert code == 0
    report = load_report(tmp_path, "spinor_rep_report.json")
    assert all(c["status"] == "pass" for c in report["checks"])
    gammas = report["matrices"]
    assert set(gammas) == {"gamma_1", "gamma_2", "gamma_3", "gamma_4"}
    assert len(gammas["gamma_1"]) == 16  # row-major 4x4


def test_spinor_rep_division_algebra(tmp_path):
    code = main(["spinor-rep", "--signature", "0,2", "--out", str(tmp_path)])
    assert code == 0
    report = load_report(tmp_path, "spinor_rep_report.json")
    ideal = [c for c in report["checks"] if c["name"] == "minimal-ideal"][0]
    assert "whole algebra" in ideal["relation"] or "whole algebra" in ideal["details"]


# ---------------------------------------------------------------------------
# transport


def test_transport_qubit_scenario(tmp_path):
    scenario = write_scenario(tmp_path, qubit_scenario_dict())
    out = tmp_path / "out"
    code = main(["transport", "--scenario", scenario, "--out", str(out)])
    assert code == 0
    report = load_report(out, "transport_report.json")
    corr = [c for c in report["checks"] if c["name"] == "connection-vs-hamiltonian"][0]
    assert corr["residual"] <= 1e-6
    series = (out / "psi_series.csv").read_text().splitlines()
    assert series[0] == "t,re_psi0,im_psi0,re_psi1,im_psi1"
    assert len(series) == 22


def test_transport_zero_hamiltonian_all_tiny(tmp_path):
    data = qubit_scenario_dict()
    data["hamiltonian"] = {"type": "zero"}
    scenario = write_scenario(tmp_path, data)
    out = tmp_path / "out"
    assert main(["transport", "--scenario", scenario, "--out", str(out)]) == 0
    report = load_report(out, "transport_report.json")
    for check in report["checks"]:
        assert check["residual"] <= 1e-12


def test_transport_singular_trivialization_is_config_error(tmp_path):
    data = qubit_scenario_dict()
    data["trivialization"] = {
        "type": "tabulated",
        "matrices": [
            matrix_to_json(np.eye(2)),
            matrix_to_json(np.zeros((2, 2))),
            matrix_to_json(np.eye(2)),
        ],
    }
    scenario = write_scenario(tmp_path, data)
    code = main(["transport", "--scenario", scenario])
    assert code == 2


def test_transport_malformed_json_is_config_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{ not json")
    assert main(["transport", "--scenario", str(path)]) == 2


def test_transport_missing_field_is_config_error(tmp_path):
    scenario = write_scenario(tmp_path, {"fibre_dim": 2})
    assert main(["transport", "--scenario", str(scenario)]) == 2


def test_transport_tolerance_override_can_fail(tmp_path):
    scenario = write_scenario(tmp_path, qubit_scenario_dict())
    code = main(
        ["transport", "--scenario", scenario, "--tol", "correspondence=1e-15"]
    )
    assert code == 1


# ---------------------------------------------------------------------------
# dirac


def test_dirac_hermiticity_scenario(tmp_path):
    out = tmp_path / "out"
    code = main(["dirac", "--scenario", "hermiticity", "--out", str(out)])
    assert code == 0
    report = load_report(out, "dirac_report.json")
    mom = [c for c in report["checks"] if c["name"] == "momentum-hermiticity"][0]
    assert mom["residual"] <= 1e-10


def test_dirac_dalembert_refine(tmp_path):
    out = tmp_path / "out"
    code = main(["dirac", "--scenario", "dalembert", "--refine", "1", "--out", str(out)])
    assert code == 0
    report = load_report(out, "dirac_report.json")
    conv = [c for c in report["checks"] if c["name"].startswith("convergence-factor")]
    assert conv and all(c["status"] == "pass" for c in conv)
    assert "factor" in conv[0]["details"]


def test_dirac_wrap_check(tmp_path):
    out = tmp_path / "out"
    code = main(["dirac", "--scenario", "wrap-check", "--seed", "3", "--out", str(out)])
    assert code == 0
    report = load_report(out, "dirac_report.json")
    wrap = [c for c in report["checks"] if c["name"] == "wrapped-anticommutator"][0]
    assert wrap["residual"] <= 1e-10


def test_dirac_kg_roundtrip_scenario(tmp_path):
    code = main(["dirac", "--scenario", "kg-roundtrip"])
    assert code == 0


def test_dirac_dispersion_writes_field_snapshot(tmp_path):
    out = tmp_path / "out"
    code = main(["dirac", "--scenario", "dispersion", "--out", str(out)])
    assert code == 0
    header = json.loads((out / "dirac_field_header.json").read_text())
    assert header["grid"]["extents"] == [64]
    lines = (out / "dirac_field.csv").read_text().splitlines()
    assert lines[0] == "x0,re_c0,im_c0,re_c1,im_c1"
    assert len(lines) == 65


def test_dirac_unknown_scenario_is_usage_error():
    assert main(["dirac", "--scenario", "mystery"]) == 2


def test_dirac_potential_presets_run(tmp_path):
    for preset in ("constant-E", "plane-wave-gauge"):
        code = main(["dirac", "--scenario", "hermiticity", "--potential", preset])
        assert code == 0


def test_bad_tol_flag_is_usage_error():
    assert main(["dirac", "--scenario", "hermiticity", "--tol", "oops"]) == 2


def test_relation_tags_present_everywhere(tmp_path):
    out = tmp_path / "out"
    main(["verify", "--signature", "1,1", "--out", str(out)])
    report = load_report(out, "verify_report.json")
    assert all(c["relation"] for c in report["checks"])


def test_dirac_grid_memory_budget_enforced():
    assert main(["dirac", "--scenario", "hermiticity", "--grid", "4096,4096"]) == 2


def test_transport_gauged_scenario(tmp_path):
    scenario = write_scenario(tmp_path, qubit_scenario_dict(with_gauge=True))
    out = tmp_path / "out"
    code = main(["transport", "--scenario", scenario, "--out", str(out)])
    assert code == 0
    report = load_report(out, "transport_report.json")
    assert all(c["status"] == "pass" for c in report["checks"])


def test_spinor_rep_rejects_multiple_signatures():
    assert main(["spinor-rep", "--signature", "1,1", "--signature", "2,0"]) == 2

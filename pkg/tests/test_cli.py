import json

import numpy as np
import pytest

from cvmodes import StandardFormParams, make_standard_form, save_state
from cvmodes.cli import main
from cvmodes.fixtures import load_state_fixture
from cvmodes.io import state_to_dict

EXP = StandardFormParams(0.72, 0.72, 0.51, -0.51)


@pytest.fixture
def source_file(tmp_path):
    path = tmp_path / "source.json"
    save_state(make_standard_form(EXP), path)
    return str(path)


@pytest.fixture
def distribution_cfg(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({
        "steps": [
            {"op": "waveplate"},
            {"op": "embed", "modes": [
                {"tag": "a~", "polarization": "R", "oam": 1},
                {"tag": "b~", "polarization": "L", "oam": -1},
            ]},
            {"op": "reorder", "order": [0, 2, 1, 3]},
            {"op": "qplate", "delta": float(np.pi / 2), "q": 0.5},
        ],
    }))
    return str(path)


def test_validate_ok(source_file, capsys):
    assert main(["validate", source_file]) == 0
    out = capsys.readouterr().out
    assert "physical: True" in out


def test_validate_reports_unphysical_without_failing(tmp_path, capsys):
    doc = state_to_dict(make_standard_form(EXP))
    doc["cov"] = [[0.0] * 4 for _ in range(4)]
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(doc))
    assert main(["--format", "json", "validate", str(path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["physical"] is False
    assert report["min_heisenberg_eigenvalue"] == pytest.approx(-0.5)


def test_validate_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{")
    assert main(["validate", str(path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_missing_file_exit_code(capsys):
    assert main(["validate", "/no/such/file.json"]) == 2


def test_validate_csv_needs_register(tmp_path, capsys):
    path = tmp_path / "m.csv"
    cov = make_standard_form(EXP).cov
    path.write_text("\n".join(",".join(repr(float(v)) for v in row) for row in cov))
    assert main(["validate", str(path)]) == 2
    assert main(["validate", str(path), "--register", "a:H:0,b:V:0"]) == 0


def test_rescale_flag(tmp_path, capsys):
    doc = state_to_dict(make_standard_form(EXP))
    doc["convention"]["sn"] = 1.0
    doc["cov"] = (2.0 * make_standard_form(EXP).cov).tolist()
    path = tmp_path / "sn1.json"
    path.write_text(json.dumps(doc))
    assert main(["validate", str(path)]) == 2
    assert main(["validate", str(path), "--rescale"]) == 0


def test_transform_writes_final_state(source_file, distribution_cfg, tmp_path,
                                      capsys):
    out_path = tmp_path / "final.json"
    code = main(["transform", source_file, "--config", distribution_cfg,
                 "--output", str(out_path)])
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert [m["tag"] for m in doc["register"]] == ["a1", "a2", "b1", "b2"]
    assert doc["cov"][0][0] == pytest.approx(0.61, abs=1e-12)


def test_transform_step_error_exit_code(source_file, tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({
        "steps": [{"op": "qplate", "delta": 1.0, "q": 0.5}],
    }))
    assert main(["transform", source_file, "--config", cfg.as_posix()]) == 3
    assert "step 1" in capsys.readouterr().err


def test_analyze_pairs_text(source_file, capsys):
    assert main(["analyze", source_file, "--pairs"]) == 0
    out = capsys.readouterr().out
    assert "entangled" in out
    assert "0.2100" in out


def test_analyze_verdicts_do_not_affect_exit_code(source_file):
    # entangled and separable inputs both exit 0
    assert main(["analyze", source_file, "--pairs", "--scan"]) == 0


def test_analyze_json(tmp_path, capsys):
    path = tmp_path / "vac.json"
    save_state(load_state_fixture("vacuum4"), path)
    assert main(["--format", "json", "analyze", str(path)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert all(p["status"] == "separable" for p in doc["pairwise"])
    assert all(b["status"] == "separable" for b in doc["bipartitions"])


def test_reproduce_paper_text(capsys):
    assert main(["reproduce-paper"]) == 0
    out = capsys.readouterr().out
    assert "<= 1e-12: True" in out
    assert "0.3550" in out
    assert "typo cell [3, 2]" in out


def test_reproduce_paper_json(capsys):
    assert main(["reproduce-paper", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["comparisons"]["exact_match_1e-12"] is True
    assert doc["comparisons"]["printed_match_0.015"] is True
    pairs = {tuple(p["modes"]): p["status"] for p in doc["report"]["pairwise"]}
    assert pairs[("a1", "b2")] == "entangled"
    assert pairs[("b1", "b2")] == "separable"


def test_tol_flag_threads_through(source_file, capsys):
    # an absurdly wide tolerance band reclassifies the borderline witness
    assert main(["--tol", "0.4", "--format", "json", "analyze", source_file,
                 "--pairs"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["pairwise"][0]["status"] == "separable"

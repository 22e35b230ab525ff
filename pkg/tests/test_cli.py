"""Command-line surface: schema validation, exit codes, atlas artifacts."""

import json

import numpy as np
import pytest

from liemetric.cli import main


def _write_request(tmp_path, payload, name="req.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_analyze_heis_lorentzian(tmp_path, capsys):
    req = _write_request(tmp_path, {
        "algebra": {"family": "heis"},
        "metric": [[1, 0, 0], [0, 1, 0], [0, 0, -1]],
    })
    code, out = _run(capsys, ["analyze", req])
    assert code == 0
    report = json.loads(out)
    assert report["killing"]["killing_dim"] == 4
    assert report["killing"]["isotropy_type"] == "elliptic"
    assert report["normal_form"]["form_id"] == "heis.lorentz_center_timelike"


def test_analyze_flat_abelian(tmp_path, capsys):
    req = _write_request(tmp_path, {
        "algebra": {"family": "R3"},
        "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    })
    code, out = _run(capsys, ["analyze", req])
    assert code == 0
    report = json.loads(out)
    assert report["killing"]["killing_dim"] == 6
    assert report["killing"]["constant_k"] == 0.0
    assert report["killing"]["completeness"] == "complete"


def test_analyze_structure_constants_mode(tmp_path, capsys):
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0
    c[1, 0, 2] = -1.0
    req = _write_request(tmp_path, {
        "algebra": {"structure": c.tolist()},
        "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    })
    code, out = _run(capsys, ["analyze", req])
    assert code == 0
    assert json.loads(out)["bianchi"]["tag"] == "heis"


def test_determinism(tmp_path, capsys):
    req = _write_request(tmp_path, {
        "algebra": {"family": "sol"},
        "metric": [[2, 0, 1], [0, 3, 0], [1, 0, -1]],
    })
    _, out1 = _run(capsys, ["--seed", "7", "analyze", req])
    _, out2 = _run(capsys, ["--seed", "7", "analyze", req])
    assert out1 == out2


def test_exit_code_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(capsys, ["analyze", str(bad)])[0] == 2

    req = _write_request(tmp_path, {
        "algebra": {"family": "R3"},
        "metric": [[1, 2, 0], [0, 1, 0], [0, 0, 1]],
    }, "asym.json")
    code, out = _run(capsys, ["analyze", req])
    assert code == 2
    assert json.loads(out)["error"]["code"] == 2

    req = _write_request(tmp_path, {
        "algebra": {"family": "R3", "structure": []},
        "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    }, "both.json")
    assert _run(capsys, ["analyze", req])[0] == 2


def test_exit_code_jacobi(tmp_path, capsys):
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0
    c[1, 0, 2] = -1.0
    c[1, 2, 0] = 1.0
    c[2, 1, 0] = -1.0
    c[2, 0, 0] = 1.0
    c[0, 2, 0] = -1.0
    req = _write_request(tmp_path, {
        "algebra": {"structure": c.tolist()},
        "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    })
    code, out = _run(capsys, ["analyze", req])
    assert code == 3
    assert json.loads(out)["error"]["type"] == "NotJacobi"


def test_exit_code_degenerate_metric(tmp_path, capsys):
    req = _write_request(tmp_path, {
        "algebra": {"family": "heis"},
        "metric": [[1, 0, 0], [0, 0, 0], [0, 0, 1]],
    })
    assert _run(capsys, ["analyze", req])[0] == 4


def test_atlas_artifacts(tmp_path, capsys):
    out_dir = tmp_path / "atlas"
    code, _ = _run(capsys, ["atlas", "--out", str(out_dir)])
    assert code == 0
    t2 = json.loads((out_dir / "table2.json").read_text())
    t3 = json.loads((out_dir / "table3.json").read_text())
    nfj = json.loads((out_dir / "normal_forms.json").read_text())
    assert t2["schema_version"] == 1
    assert len(t2["rows"]) == 11
    assert len(t3["rows"]) == 22
    assert not any(r["family"] == "euc2" for r in t3["rows"])
    psh = [r for r in t3["rows"] if r["family"] == "psh"][0]
    assert psh["isotropy"] == "nilpotent"
    assert psh["g_ideal_in_L"] is True
    assert psh["derived_killing"] == "R2"
    assert psh["form_label"] == "(e3)^2+2(e1 e2)"
    assert set(nfj["families"]) == {
        "R3", "so3", "sl2", "heis", "euc2", "sol", "affR_plus_R",
        "h1", "psh", "h_lambda", "e_mu"}


def test_probe_trivial_flat(tmp_path, capsys):
    req = _write_request(tmp_path, {
        "algebra": {"family": "R3"},
        "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    })
    code, out = _run(capsys, ["probe", req, "--horizon", "10", "--directions", "4"])
    assert code == 0
    result = json.loads(out)
    assert result["outcomes"] == {"bounded-to-horizon": 4}


def test_probe_blowup_with_csv(tmp_path, capsys):
    req = _write_request(tmp_path, {
        "algebra": {"family": "sol"},
        "metric": [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
    })
    csv_path = tmp_path / "traj.csv"
    code, out = _run(capsys, ["probe", req, "--horizon", "50",
                              "--directions", "8", "--csv", str(csv_path)])
    assert code == 0
    result = json.loads(out)
    assert result["outcomes"].get("blowup-detected", 0) >= 1
    assert csv_path.read_text().startswith("t,v1,v2,v3,energy")


def test_probe_single_direction(tmp_path, capsys):
    req = _write_request(tmp_path, {
        "algebra": {"family": "h1"},
        "metric": [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
        "options": {"v0": [1.0, 0.3, 0.2]},
    })
    code, out = _run(capsys, ["probe", req, "--horizon", "50"])
    assert code == 0
    result = json.loads(out)
    assert result["n_probes"] == 1
    assert result["verdicts"][0]["outcome"] == "blowup-detected"

import json
import os

import pytest

from monoholo.cli import main
from monoholo.report import read_csv


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_timings(doc: dict) -> dict:
    diag = dict(doc.get("diagnostics", {}))
    diag.pop("timings", None)
    doc = dict(doc)
    doc["diagnostics"] = diag
    return doc


def test_npoint_abelian(capsys):
    code, out, _ = run_cli(
        capsys, "npoint", "--field", "abelian", "--mass", "1", "--points", "0,1"
    )
    assert code == 0
    doc = json.loads(out)
    res = doc["results"][0]
    assert abs(res["value"]["re"] - 1.0) < 1e-6
    assert abs(res["value"]["im"]) < 1e-6
    assert res["err"] < 1e-6
    assert doc["schema_version"] == "1"


def test_npoint_coalescent_reduction(capsys):
    code, out, _ = run_cli(
        capsys, "npoint", "--field", "hedgehog", "--mass", "1", "--points", "0,0"
    )
    assert code == 0
    doc = json.loads(out)
    res = doc["results"][0]
    assert res["value"]["re"] == 1.0
    assert res["reduced"] is True


def test_npoint_determinism(capsys):
    argv = ("npoint", "--field", "abelian", "--mass", "1",
            "--points", "0,1+1i", "--seed", "5")
    code1, out1, _ = run_cli(capsys, *argv)
    code2, out2, _ = run_cli(capsys, *argv)
    assert code1 == code2 == 0
    d1 = strip_timings(json.loads(out1))
    d2 = strip_timings(json.loads(out2))
    assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)


def test_npoint_csv_round_trip(tmp_path, capsys):
    path = tmp_path / "val.csv"
    code, _, _ = run_cli(
        capsys, "npoint", "--field", "abelian", "--mass", "1",
        "--points", "0,1i", "--csv", str(path),
    )
    assert code == 0
    header, rows = read_csv(path)
    assert header == ["z1", "z2", "re", "im", "err"]
    assert abs(rows[0][2] - 1.0) < 1e-6
    # re-emission is identical
    from monoholo.report import write_csv

    path2 = tmp_path / "val2.csv"
    write_csv(path2, header, rows)
    assert path.read_text() == path2.read_text()


def test_invalid_input_exit_code(capsys):
    code, _, err = run_cli(capsys, "npoint", "--points", "0,notapoint")
    assert code == 2
    code, _, _ = run_cli(capsys, "npoint", "--points", "0,1", "--mass", "-1")
    assert code == 2
    code, _, _ = run_cli(capsys, "nosuchcommand")
    assert code == 2


def test_config_file_and_env(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("field = abelian\nmass = 2.0\nseed = 9\n")
    monkeypatch.setenv("MONO_CONFIG", str(cfg))
    code, out, _ = run_cli(capsys, "npoint", "--points", "0,1")
    assert code == 0
    doc = json.loads(out)
    assert doc["params"]["field"] == "abelian"
    assert doc["params"]["mass"] == 2.0
    # flags override the file
    code, out, _ = run_cli(capsys, "npoint", "--points", "0,1", "--mass", "1.5")
    assert json.loads(out)["params"]["mass"] == 1.5
    monkeypatch.delenv("MONO_CONFIG")
    code, _, _ = run_cli(capsys, "npoint", "--points", "0,1",
                         "--config", str(tmp_path / "missing.cfg"))
    assert code == 2


def test_scan_writes_csv(tmp_path, capsys):
    locus = tmp_path / "locus.csv"
    grid = tmp_path / "grid.csv"
    fit = tmp_path / "fit.json"
    code, out, _ = run_cli(
        capsys, "scan", "--field", "hedgehog", "--mass", "1", "--grid", "8",
        "--threshold", "1e-3", "--out", str(locus),
        "--dump-grid", str(grid), "--fit-out", str(fit), "--workers", "2",
    )
    assert code == 0
    header, rows = read_csv(locus)
    assert header == ["re_w", "im_w", "re_z", "im_z", "value"]
    assert rows, "locus should not be empty"
    for row in rows:
        assert abs(complex(row[0], row[1]) - complex(row[2], row[3])) < 0.05
    gh, grows = read_csv(grid)
    assert gh == header
    assert len(grows) == 64
    doc = json.loads(fit.read_text())
    assert doc["k"] == 1


def test_boundary_map(tmp_path, capsys):
    path = tmp_path / "map.csv"
    code, out, _ = run_cli(
        capsys, "boundary", "--field", "hedgehog", "--mass", "1",
        "--w", "2+0i", "--grid", "8", "--radius", "0.8",
        "--out", str(path), "--workers", "2",
    )
    assert code == 0
    header, rows = read_csv(path)
    assert header == ["re_z", "im_z", "re_lambda", "im_lambda", "F"]
    assert rows
    for row in rows:
        assert row[4] < 0  # negative curvature density everywhere


def test_nahm_command(tmp_path, capsys):
    out_path = tmp_path / "nahm.json"
    code, out, _ = run_cli(
        capsys, "nahm", "--charge", "1", "--mass", "1.5", "--seed", "4",
        "--out", str(out_path),
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["results"][0]["residual"] < 1e-8
    from monoholo.nahm import NahmData

    data = NahmData.from_json(out_path.read_text())
    assert data.k == 1


def test_nahm_degenerate_exit(capsys):
    code, out, _ = run_cli(capsys, "nahm", "--charge", "1", "--mass", "0.5")
    assert code == 3


def test_rep_command(capsys):
    code, out, _ = run_cli(
        capsys, "rep", "--charge", "2", "--mass", "1.5", "--seed", "4"
    )
    assert code == 0
    doc = json.loads(out)
    res = doc["results"][0]
    assert res["degree"] == 2
    assert abs(res["curvature_integral"] - 2.0) < 0.04
    assert res["four_point_error"] < 1e-8


def test_verify_nahm_suite(capsys):
    code, out, _ = run_cli(capsys, "verify", "nahm", "--seed", "3")
    assert code == 0
    doc = json.loads(out)
    assert all(r["passed"] for r in doc["results"])


def test_verify_nahm_half_mass_exit_three(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "nahm", "--charge", "1", "--mass", "0.5"
    )
    assert code == 3
    doc = json.loads(out)
    assert doc["results"][0]["passed"] is True

import csv
import json

import numpy as np
import pytest

from intquant import cli
from intquant.export import MatrixRecord


def run(tmp_path, *args):
    return cli.main([*args, "--outdir", str(tmp_path)])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_matrix_record_roundtrip(tmp_path):
    m = np.arange(9).reshape(3, 3) + 1j
    rec = MatrixRecord("m", m, {"s": -1})
    rec.write(tmp_path / "m.json")
    back = MatrixRecord.read(tmp_path / "m.json")
    assert back.dim == 3 and back.label == "m"
    np.testing.assert_array_equal(back.matrix, m)
    assert len(rec.to_dict()["entries"]) == 9
    with pytest.raises(ValueError):
        MatrixRecord("bad", np.zeros((2, 3)))


def test_cg_table(tmp_path):
    assert run(tmp_path, "cg-table", "--dim", "16") == 0
    rows = {float(r["s"]): r for r in read_csv(tmp_path / "cg_summary.csv")}
    assert rows[-1.0]["psd"] == "true" and float(rows[-1.0]["trace"]) == 1.0
    assert rows[-0.5]["psd"] == "false"
    assert rows[0.0]["safe_block_defect"] == "N/A"
    diag = [r for r in read_csv(tmp_path / "cg_diagonal.csv") if float(r["s"]) == 0.0]
    assert diag[0]["quadrature"] == "N/A"
    assert [float(r["analytic"]) for r in diag[:3]] == [2.0, -2.0, 2.0]
    s1 = [float(r["analytic"]) for r in read_csv(tmp_path / "cg_diagonal.csv")
          if float(r["s"]) == -1.0]
    assert s1[0] == 1.0 and not any(s1[1:])
    manifest = json.loads((tmp_path / "manifest_cg_table.json").read_text())
    assert manifest["config"]["dim"] == 16 and "numpy" in manifest["versions"]


def test_angle(tmp_path):
    assert run(tmp_path, "angle", "--dim", "16") == 0
    (row,) = read_csv(tmp_path / "angle_defect.csv")
    assert float(row["trace_over_dim"]) == pytest.approx(np.pi)
    assert float(row["safe_block_defect"]) < 1e-4
    rec = MatrixRecord.read(tmp_path / "angle_operator.json")
    assert rec.dim == 16


def test_thermal(tmp_path):
    assert run(tmp_path, "thermal", "--omega", "1.5", "--temp", "0,0.5,2") == 0
    rows = read_csv(tmp_path / "thermal_curve.csv")
    assert float(rows[0]["s"]) == -1.0
    assert all(float(r["equality_defect"]) < 1e-12 for r in rows)
    for r in rows:
        assert float(r["nbar_from_s"]) == pytest.approx(float(r["bose"]), abs=1e-12)


def test_affine(tmp_path):
    assert run(tmp_path, "affine") == 0
    data = json.loads((tmp_path / "affine_moments.json").read_text())
    assert data["c_gamma"]["-1"] == pytest.approx(0.25, rel=1e-8)
    assert abs(data["density_mass"] - 1) < 1e-3
    assert data["defects"]["affine.kinetic_fit"]["status"] == "pass"


def test_affine_divergent_is_config_error(tmp_path):
    assert run(tmp_path, "affine", "--alpha", "1.2") == 2


def test_sphere(tmp_path):
    assert run(tmp_path, "sphere", "--seed", "3") == 0
    assert len(json.loads((tmp_path / "sphere_points.json").read_text())) == 20


def test_verify_small_dim_skips(tmp_path, capsys):
    code = run(tmp_path, "verify", "--dim", "2")
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert code == 0 and report["ok"]
    assert report["counts"]["skip"] > 0 and report["counts"]["fail"] == 0
    assert "SKIP" in capsys.readouterr().out


def test_corrupted_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"dim": "x"}')
    assert cli.main(["verify", "--config", str(cfg)]) == 2
    cfg.write_text("{not json")
    assert cli.main(["verify", "--config", str(cfg)]) == 2
    cfg.write_text('{"bogus": 1}')
    assert cli.main(["verify", "--config", str(cfg)]) == 2


@pytest.mark.parametrize("args", [["--dim", "1"], ["--omega", "-1"], ["--temp", "-0.5"],
                                  ["--s", "1.5"], ["--lambda", "0"]])
def test_invalid_overrides(tmp_path, args):
    assert run(tmp_path, "thermal", *args) == 2


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"dim": 12, "s": -2.0}))
    assert cli.main(["cg-table", "--config", str(cfg), "--dim", "10",
                     "--outdir", str(tmp_path)]) == 0
    m = json.loads((tmp_path / "manifest_cg_table.json").read_text())
    assert m["config"]["dim"] == 10 and m["config"]["s"] == [-2.0]


def test_deterministic_outputs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["sphere", "--seed", "5", "--outdir", str(d)]) == 0
        assert cli.main(["thermal", "--outdir", str(d)]) == 0
    for name in ("sphere_points.json", "thermal_curve.csv", "thermal_diagonal.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()

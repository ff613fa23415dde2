import json

import pytest

from z4rg.cli import main
from z4rg.serialize import CSV_HEADER


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_exponents_nu_exact(capsys):
    code, out, _ = run(capsys, "exponents", "--k", "0.8")
    assert code == 0
    doc = json.loads(out)
    pts = {p["label"]: p for p in doc["points"]}
    assert pts["IsingLine[principal]"]["nu"]["coeffs"] == ["1/2", "1/12", "7/162"]
    assert pts["CubicLine[principal]"]["eta"]["coeffs"] == ["0", "0", "1/54"]
    assert doc["k"] == "4/5"


def test_fixpoints_k0(capsys):
    code, out, _ = run(capsys, "fixpoints", "--k", "0")
    pts = {p["label"]: p for p in json.loads(out)["points"]}
    assert code == 0 and len(pts) == 4
    assert pts["Heisenberg"]["coords"][0]["coeffs"] == ["0", "3/5", "9/25"]
    assert pts["IsingLine[principal]"]["coords"][1]["coeffs"] == ["0", "2/3", "34/81"]


def test_fixpoints_solver_and_numeric(capsys):
    code, out, _ = run(capsys, "fixpoints", "--k", "3/5", "--method", "solve", "--eps", "0.5")
    pts = {p["label"]: p for p in json.loads(out)["points"]}
    assert code == 0
    assert pts["IsingLine[principal]"]["coords"][2]["coeffs"] == ["0", "1/2", "17/54"]
    assert "numeric_root" in pts["Heisenberg"]


def test_broken_phase_exact_complex(capsys):
    code, out, _ = run(capsys, "fixpoints", "--k", "5/3")
    pts = {p["label"]: p for p in json.loads(out)["points"]}
    assert pts["IsingLine[principal]"]["coords"][1]["coeffs"][1] == {"re": "0", "im": "-1/2"}
    assert "IsingLine[conjugate]" in pts


def test_derive(capsys):
    code, out, _ = run(capsys, "derive")
    doc = json.loads(out)
    assert code == 0 and doc["agrees_with_tabulated"]
    coeffs = {tuple(t["exponents"]): t["coeff"] for t in doc["beta1"]["terms"]}
    assert coeffs[(2, 0, 0)] == "5/3" and coeffs[(0, 0, 2)] == "-3/16"


def test_stability(capsys):
    code, out, _ = run(capsys, "stability", "--k", "0", "--eps", "0.5")
    reps = {r["label"]: r for r in json.loads(out)["reports"]}
    assert reps["Heisenberg"]["classes"] == ["ir_stable"] * 3
    assert reps["IsingLine[principal]"]["exact_zero_mode"] is True


def test_scan_k_flags(capsys):
    code, out, _ = run(capsys, "scan-k", "--from", "0.9", "--to", "1.1", "--steps", "21")
    rows = json.loads(out)["rows"]
    near = [r for r in rows if abs(r["k"] - 1) < 0.004]
    assert near and all(r["diverging"] for r in near)
    assert any(r["exceptional"] for r in rows)
    assert not rows[0]["diverging"]


def test_scan_k_csv(capsys):
    code, out, _ = run(capsys, "scan-k", "--from", "0", "--to", "2", "--steps", "3", "--format", "csv")
    lines = out.split("\n")
    assert code == 0 and lines[0].startswith("k,exceptional,diverging,IsingLine_g1_re")
    assert lines[2].startswith("1.0,1,1,nan")


def test_flow_csv(capsys, tmp_path):
    path = tmp_path / "traj.csv"
    code, _, _ = run(capsys, "flow", "--eps", "1", "--traj", "0.01,0.30,0.24", "--t-max", "1", "-o", str(path))
    data = path.read_bytes()
    assert code == 0 and b"\r" not in data
    lines = data.decode().splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1] == "0.0,0.01,0.0,0.3,0.0,0.24,0.0"
    assert len(lines) == 1 + 101


def test_flow_pair_uses_k(capsys):
    code, out, _ = run(capsys, "flow", "--k", "0.8", "--eps", "1", "--traj", "0.01,0.3", "--t-max", "0.01",
                       "--format", "json")
    doc = json.loads(out)
    assert doc["g"][0][2]["re"] == pytest.approx(0.24)


def test_flow_grid_and_basin(capsys):
    code, out, _ = run(capsys, "flow", "--k", "1.5", "--eps", "1", "--grid", "3,3")
    doc = json.loads(out)
    assert code == 0 and doc["lines_present"] is False and len(doc["U"]) == 3
    code, out, _ = run(capsys, "flow", "--k", "0", "--eps", "0.1", "--basin", "3", "--seed", "4",
                       "--t-max", "5", "--step", "0.01")
    doc = json.loads(out)
    assert code == 0 and sum(doc["tally"].values()) == 3 and doc["seed"] == 4


def test_map(capsys):
    code, out, _ = run(capsys, "map", "--u", "1/4", "--v", "1/24", "--w", "1/24")
    doc = json.loads(out)
    assert doc["g"] == ["0", "1", "1"] and doc["pt_phase"] == "exceptional"


def test_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(capsys, "flow", "--k", "0.8", "--eps", "1", "--basin", "5", "--seed", "9", "--t-max", "2", "-o", str(p))
    assert a.read_bytes() == b.read_bytes()


def test_env_output_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("Z4RG_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "exponents", "--k", "0")
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "exponents.json").read_text())["k"] == "0"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["fixpoints", "--k", "1"], 2),
        (["stability", "--k", "-1", "--eps", "0.5"], 2),
        (["fixpoints", "--k", "0", "--bogus"], 1),
        (["nonsense"], 1),
        (["flow", "--eps", "1"], 1),
        (["exponents", "--k", "0", "--format", "csv"], 1),
        (["map", "--u", "-1", "--v", "0", "--w", "0"], 2),
        (["derive", "-o", "/proc/no/such/dir/out.json"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert err and not out

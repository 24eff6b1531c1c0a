import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from roguewave.cli import PHASE_HEADER, PROFILE_HEADER, SIMULATE_HEADER, cmd_phase_plane, main
from roguewave.scenario import load_scenario, parse_scenario
from roguewave.shock import rh_residual
from roguewave import ConfigurationError

SETUP_KEYS = {
    "q_ref", "q_p", "c_star", "c_ref", "a_ref", "m_ref", "froude_ref",
    "lambda_min", "profile_extent", "admissible", "scenario_hash",
}


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def scenario_file(tmp_path, name="s.json", **fields):
    data = {"q_star": 3700.0, "q_0": 3700.2, "q_ref": "max"}
    data.update(fields)
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


def test_setup_ex1(scenario_dir, capsys):
    code, out, _ = run(["setup", "--scenario", str(scenario_dir / "ex1.json")], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == SETUP_KEYS
    assert doc["q_p"] == pytest.approx(3715.8087, abs=0.1)
    assert doc["q_ref"] == pytest.approx(3731.6737, abs=0.05)
    assert doc["lambda_min"] == pytest.approx(21400.0, abs=1.0)
    assert doc["scenario_hash"] == load_scenario(scenario_dir / "ex1.json").digest


def test_setup_ex2(scenario_dir, capsys):
    code, out, _ = run(["setup", "--scenario", str(scenario_dir / "ex2.json")], capsys)
    assert code == 0
    assert json.loads(out)["q_ref"] == pytest.approx(3763.8773, abs=0.05)


def test_setup_writes_output_file(scenario_dir, tmp_path, capsys):
    target = tmp_path / "setup.json"
    code, out, _ = run(["setup", "--scenario", str(scenario_dir / "ex1.json"), "-o", str(target)], capsys)
    assert code == 0 and out == ""
    assert "q_p" in json.loads(target.read_text())


@pytest.mark.parametrize(
    "fields, message",
    [
        ({"q_0": 3699.0}, "q_star < q_0"),
        ({"q_0": 3700.0}, "q_star < q_0"),
        ({"k": -1.0}, "k must be a positive"),
        ({"colour": "blue"}, "unknown scenario keys"),
        ({"q_ref": 3700.3}, "q_p < q_ref"),
        ({"x1": 10.0}, "x1 < 0"),
    ],
)
def test_invalid_scenarios_exit_2(tmp_path, capsys, fields, message):
    path = scenario_file(tmp_path, **fields)
    code, out, err = run(["setup", "--scenario", path], capsys)
    assert code == 2
    assert out == ""
    assert message in err


def test_missing_file_exit_2(tmp_path, capsys):
    code, _, err = run(["setup", "--scenario", str(tmp_path / "nope.json")], capsys)
    assert code == 2 and "cannot read" in err


def test_strict_admissibility_exit_4(tmp_path, capsys):
    path = scenario_file(tmp_path, n_interactions=10**6)
    assert run(["setup", "--scenario", path], capsys)[0] == 0
    assert run(["setup", "--scenario", path, "--strict"], capsys)[0] == 4
    strict = scenario_file(tmp_path, "t.json", n_interactions=10**6, strict_admissibility=True)
    assert run(["profile", "--scenario", strict, "--x-min", "0", "--x-max", "10"], capsys)[0] == 4


def test_profile_initial_crest(scenario_dir, capsys):
    argv = ["profile", "--scenario", str(scenario_dir / "ex1.json"),
            "--x-min", "-20000", "--x-max", "20000", "--dx", "10"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == PROFILE_HEADER
    body = rows[1:]
    assert len(body) == 4001
    q = np.array([float(r[1]) for r in body])
    assert q.max() == pytest.approx(3715.8087027056426, abs=1e-6)
    sides = [r[3] for r in body]
    assert set(sides) == {"W", "E"}
    # a single West-to-East transition
    assert sides == sorted(sides, key=lambda s: s == "E")


def test_profile_row_count(scenario_dir, capsys):
    argv = ["profile", "--scenario", str(scenario_dir / "ex1.json"),
            "--x-min", "0", "--x-max", "1005", "--dx", "10", "--t", "5"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert len(rows_of(out)) - 1 == 1005 // 10 + 1


def test_profile_jump_matches_shock(scenario_dir, ex1, capsys):
    from roguewave import solve_shock_system

    argv = ["profile", "--scenario", str(scenario_dir / "ex1.json"),
            "--x-min", "150000", "--x-max", "250000", "--dx", "10", "--t", "1000"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    body = rows_of(out)[1:]
    i = next(k for k, r in enumerate(body) if r[3] == "E")
    jump = float(body[i - 1][1]) - float(body[i][1])
    s = solve_shock_system(1000.0, ex1)
    assert jump == pytest.approx(s.amplitude, abs=0.05)


def test_profile_bad_grid_exit_2(scenario_dir, capsys):
    argv = ["profile", "--scenario", str(scenario_dir / "ex1.json"),
            "--x-min", "10", "--x-max", "0"]
    assert run(argv, capsys)[0] == 2


def test_simulate_csv(tmp_path, capsys):
    path = scenario_file(tmp_path, t_end=300.0)
    code, out, _ = run(["simulate", "--scenario", path], capsys)
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == SIMULATE_HEADER
    body = [[float(v) for v in r] for r in rows[1:]]
    assert [r[0] for r in body] == [0.0, 100.0, 200.0, 300.0]
    assert body[0][4] == 0.0
    assert all(abs(r[8]) <= 1e-4 for r in body)
    assert out.endswith("\n") and "\r" not in out


def test_simulate_is_deterministic(tmp_path, capsys):
    path = scenario_file(tmp_path, t_end=200.0, output_times=[0, 50, 200])
    a = run(["simulate", "--scenario", path], capsys)[1]
    b = run(["simulate", "--scenario", path], capsys)[1]
    assert a == b


def test_simulate_until_collapse_ex2(tmp_path, capsys):
    path = scenario_file(tmp_path, q_0=3700.8, t_end=60000.0, dt=50.0,
                         output_times=[0, 50000, 50600, 60000])
    code, out, _ = run(["simulate", "--scenario", path], capsys)
    assert code == 0
    body = [[float(v) for v in r] for r in rows_of(out)[1:]]
    assert body[-1][0] == 50600.0
    assert body[-1][2] - 3700.0 > 50.0


def test_simulate_mass_method_exit_3(tmp_path, capsys):
    path = scenario_file(tmp_path, t_end=100.0)
    code, out, err = run(["simulate", "--scenario", path, "--method", "mass"], capsys)
    assert code == 3
    assert "keeps one sign" in err


def test_phase_plane(scenario_dir, capsys):
    code, out, _ = run(["phase-plane", "--scenario", str(scenario_dir / "ex1.json"), "--n", "12"], capsys)
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == PHASE_HEADER
    body = rows[1:]
    names = [r[0] for r in body]
    assert names.count("west") == names.count("east") == 12
    assert names.count("locus_left") == names.count("locus_right") == 12


def test_phase_plane_rows(ex1):
    sc = parse_scenario({"q_star": 3700.0, "q_0": 3700.2})
    rows = cmd_phase_plane(sc, 10)
    for name, q, m in rows:
        if name == "west":
            assert abs(ex1.west_line.flux(q) - m) <= 1e-10 * ex1.m_ref
        elif name == "east":
            assert abs(ex1.east_line.flux(q) - m) <= 1e-10 * ex1.m_ref
    left = [(q, m) for name, q, m in rows if name == "locus_left"]
    right = [(q, m) for name, q, m in rows if name == "locus_right"]
    assert left[0][0] == right[0][0] == ex1.q_p
    assert left[-1][0] == ex1.q_ref and right[-1][0] == pytest.approx(ex1.q_star, abs=1e-6)
    for (q_l, _), (q_r, _) in zip(left, right):
        assert abs(rh_residual(q_l, q_r, ex1)) <= 1e-10


def test_phase_plane_csv_residuals(scenario_dir, ex1, capsys):
    out = run(["phase-plane", "--scenario", str(scenario_dir / "ex1.json"), "--n", "8"], capsys)[1]
    body = rows_of(out)[1:]
    left = [float(r[1]) for r in body if r[0] == "locus_left"]
    right = [float(r[1]) for r in body if r[0] == "locus_right"]
    # 10 significant digits leave ~1e-6 m of depth rounding
    slope = 2.0 * ex1.a_ref * ex1.q_0 / ex1.q_star**2
    for q_l, q_r in zip(left, right):
        assert abs(rh_residual(q_l, q_r, ex1)) <= slope * 1e-6


def test_validate_fv_flat(scenario_dir, capsys):
    argv = ["validate-fv", "--scenario", str(scenario_dir / "flat.json"), "--dx", "100", "--t-end", "20"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    doc = json.loads(out)
    assert [r["l1"] for r in doc["runs"]] == [0.0, 0.0]
    assert [r["linf"] for r in doc["runs"]] == [0.0, 0.0]
    assert doc["l1_order"] is None
    assert doc["scenario_hash"] == load_scenario(scenario_dir / "flat.json", allow_flat=True).digest


def test_validate_fv_horizon(scenario_dir, capsys):
    argv = ["validate-fv", "--scenario", str(scenario_dir / "ex1.json"), "--t-end", "250"]
    code, _, err = run(argv, capsys)
    assert code == 2 and "t_end <= 200" in err


def test_flat_rejected_outside_validation(scenario_dir, capsys):
    assert run(["setup", "--scenario", str(scenario_dir / "flat.json")], capsys)[0] == 2


def test_setup_round_trip(scenario_dir, tmp_path, capsys):
    doc = json.loads(run(["setup", "--scenario", str(scenario_dir / "ex1.json")], capsys)[1])
    explicit = scenario_file(tmp_path, "explicit.json", q_ref=doc["q_ref"], t_end=200.0)
    implicit = scenario_file(tmp_path, "implicit.json", t_end=200.0)
    for cmd in (["simulate"], ["profile", "--t", "150", "--x-min", "0", "--x-max", "60000", "--dx", "50"]):
        a = run([cmd[0], "--scenario", explicit, *cmd[1:]], capsys)[1]
        b = run([cmd[0], "--scenario", implicit, *cmd[1:]], capsys)[1]
        assert a == b


def test_parse_scenario_validation():
    with pytest.raises(ConfigurationError):
        parse_scenario([1, 2])
    with pytest.raises(ConfigurationError):
        parse_scenario({"q_star": 3700.0})
    with pytest.raises(ConfigurationError):
        parse_scenario({"q_star": 3700.0, "q_0": 3700.2, "n_interactions": 2.5})
    with pytest.raises(ConfigurationError):
        parse_scenario({"q_star": 3700.0, "q_0": 3700.2, "output_times": [0, 2000]})
    sc = parse_scenario({"q_star": 3700.0, "q_0": 3700.0}, allow_flat=True)
    assert sc.config().flat


def test_module_entry_point(scenario_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "roguewave", "setup", "--scenario", str(scenario_dir / "ex2.json")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["q_p"] == pytest.approx(3731.8248, abs=0.1)

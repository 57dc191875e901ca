"""End-to-end tests of the command-line front end via run(argv)."""

import json

import pytest

from exbilap.cli import (
    CONFIG_ENV,
    EXIT_CONVERGENCE,
    EXIT_INPUT,
    EXIT_NO_BOUND_STATE,
    EXIT_OK,
    run,
)

FAST = ["--rtol", "1e-4", "--atol", "1e-6"]


def test_solve_disk_json(capsys):
    code = run(["solve-disk", "--tau", "2", "--gamma", "-1", "--radius", "1",
                "--n-max", "1", *FAST])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["classification"] == "radial"
    assert payload["n_star"] == 0
    assert payload["lambda"] == pytest.approx(-0.03164098441037867, rel=1e-3)
    assert payload["modes"]["0"]["converged"] is True
    assert payload["modes"]["1"]["lambda"] is None
    assert payload["tolerance"] > 0.0


def test_solve_disk_gamma_nonnegative_exit(capsys):
    code = run(["solve-disk", "--tau", "0", "--gamma", "1", "--radius", "1"])
    captured = capsys.readouterr()
    assert code == EXIT_NO_BOUND_STATE
    assert "no negative bound state (gamma >= 0)" in captured.err
    payload = json.loads(captured.out)
    assert payload["classification"] == "no-bound-state"


def test_solve_disk_truncation_budget_message(capsys):
    code = run(["solve-disk", "--tau", "4", "--gamma", "-0.1", "--radius", "1",
                "--n-max", "0", *FAST])
    captured = capsys.readouterr()
    assert code == EXIT_NO_BOUND_STATE
    assert "truncation budget" in captured.err


def test_solve_disk_rejects_bad_tension(capsys):
    code = run(["solve-disk", "--tau", "-1", "--gamma", "-1", "--radius", "1"])
    assert code == EXIT_INPUT
    assert "error:" in capsys.readouterr().err


def test_missing_required_flag_is_input_error(capsys):
    code = run(["solve-disk", "--gamma", "-1", "--radius", "1"])
    assert code == EXIT_INPUT


def test_convergence_failure_exit_code(capsys):
    code = run(["solve-disk", "--tau", "0", "--gamma", "-0.1", "--radius", "0.5",
                "--rtol", "1e-6", "--n-max", "0"])
    captured = capsys.readouterr()
    assert code == EXIT_CONVERGENCE
    assert "convergence failure" in captured.err


def test_sweep_deterministic_csv(capsys, tmp_path):
    argv = ["sweep", "--tau", "0,1", "--gamma", "-1", "--radius", "1",
            "--n-max", "1", *FAST]
    assert run(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert run(argv) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    lines = first.splitlines()
    assert lines[0] == "tau,gamma,radius,mode,lambda,classification,T_final,N_final,residual"
    assert len(lines) == 5
    assert lines[1].startswith("0.0,-1.0,1.0,0,-0.502464")
    out_file = tmp_path / "grid.csv"
    assert run(argv + ["--out", str(out_file)]) == EXIT_OK
    assert out_file.read_text() == first


def test_verify_strict_domain(capsys, tmp_path):
    dom = tmp_path / "body.dom"
    dom.write_text("a0 1.0\ncoeff 2 0.05 0.0\n")
    code = run(["verify", "--domain", str(dom), "--tau", "2", "--gamma", "-1",
                "--radius", "0.85", *FAST])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "verified-strict"
    assert payload["margin"] > payload["tolerance"] > 0.0
    assert payload["radial_ground_state"] is True
    assert payload["constraints"]["curvature_margin"] == 0.0
    assert payload["constraints"]["congruent"] is False


def test_verify_hypothesis_violated(capsys, tmp_path):
    dom = tmp_path / "body.dom"
    dom.write_text("a0 1.0\ncoeff 2 0.05 0.0\n")
    code = run(["verify", "--domain", str(dom), "--tau", "2", "--gamma", "-1",
                "--radius", "0.9", *FAST])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "hypothesis-violated"
    assert payload["quotient"] is None


def test_verify_rejects_nonconvex_domain(capsys, tmp_path):
    dom = tmp_path / "body.dom"
    dom.write_text("a0 1.0\ncoeff 2 0.4 0.0\n")
    code = run(["verify", "--domain", str(dom), "--tau", "2", "--gamma", "-1",
                "--radius", "0.85"])
    assert code == EXIT_INPUT
    assert "convex" in capsys.readouterr().err


def test_verify_missing_domain_file(capsys, tmp_path):
    code = run(["verify", "--domain", str(tmp_path / "nope.dom"), "--tau", "2",
                "--gamma", "-1", "--radius", "0.85"])
    assert code == EXIT_INPUT


def test_ualpha_table(capsys):
    from exbilap.reference import ualpha_energy

    code = run(["ualpha", "--tau", "0", "--gamma", "-1", "--radius", "1",
                "--alphas", "0.5,1.0"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "alpha,energy"
    assert lines[1] == f"0.5,{ualpha_energy(0.5, 0.0, -1.0, 1.0)!r}"
    assert lines[2] == f"1.0,{ualpha_energy(1.0, 0.0, -1.0, 1.0)!r}"


def test_oracle_crosscheck(capsys):
    code = run(["oracle", "--tau", "1", "--gamma", "-1", "--radius", "1",
                "--fd-h", "0.04"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["secular"] == pytest.approx(-0.13566329385910836, rel=1e-9)
    assert payload["rel_diff"] <= 1e-4


def test_profile_dump(capsys):
    code = run(["profile", "--tau", "2", "--gamma", "-1", "--radius", "1", *FAST])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,f,fprime"
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) > 0.0
    last = lines[-1].split(",")
    assert float(last[1]) == 0.0 and float(last[2]) == 0.0


def test_profile_without_state_exits_two(capsys):
    code = run(["profile", "--tau", "1", "--gamma", "-1", "--radius", "1",
                "--mode", "1", *FAST])
    captured = capsys.readouterr()
    assert code == EXIT_NO_BOUND_STATE
    assert "no bound state" in captured.err


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "exbilap.cfg"
    cfg.write_text("rtol = 1e-4\nN0 = 20\n")
    base = ["--config", str(cfg), "solve-disk", "--tau", "2", "--gamma", "-1",
            "--radius", "1", "--n-max", "0", "--atol", "1e-6"]
    assert run(base) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    # N0 = 20 elements per unit at T0 = 30 R means the first solve has 600
    assert payload["modes"]["0"]["record"][0]["N_elems"] == 600
    assert run(base + ["--n0", "10"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["modes"]["0"]["record"][0]["N_elems"] == 300


def test_config_via_environment(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "exbilap.cfg"
    cfg.write_text("rtol = 1e-4\nN0 = 20\n")
    monkeypatch.setenv(CONFIG_ENV, str(cfg))
    code = run(["solve-disk", "--tau", "2", "--gamma", "-1", "--radius", "1",
                "--n-max", "0", "--atol", "1e-6"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["modes"]["0"]["record"][0]["N_elems"] == 600


def test_config_rejects_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "exbilap.cfg"
    cfg.write_text("rtol = 1e-4\nwobble = 3\n")
    code = run(["--config", str(cfg), "solve-disk", "--tau", "2", "--gamma", "-1",
                "--radius", "1"])
    assert code == EXIT_INPUT
    assert "unknown key" in capsys.readouterr().err


def test_sweep_n_max_from_config(capsys, tmp_path):
    cfg = tmp_path / "exbilap.cfg"
    cfg.write_text("n_max = 0\nrtol = 1e-4\n")
    code = run(["--config", str(cfg), "sweep", "--tau", "1", "--gamma", "-1",
                "--radius", "1", "--atol", "1e-6"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2

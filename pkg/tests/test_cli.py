"""Command-line interface: formats, determinism, exit codes, file output."""

import json
import socket
import threading
import time

import pytest

from branchedham.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ------------------------------------------------------------------------ branches

def test_branches_default_csv(capsys):
    code, out, err = run_cli(
        ["branches", "--lambda", "1", "--gamma", "0.5",
         "--p-min", "-0.9", "--p-max", "5", "--n", "200"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    comments = [l for l in lines if l.startswith("#")]
    data = [l for l in lines if not l.startswith("#")]
    assert data[0] == "p,H_plus,H_minus,v_plus,v_minus"
    assert len(data) == 201  # header + 200 rows
    assert any("gamma=0.5" in c for c in comments)


def test_branches_value_at_unit_momentum(capsys):
    # grid chosen so p = 1 is an exact sample: Plus value is 2 + 1/sqrt(2)
    code, out, _ = run_cli(
        ["branches", "--lambda", "1", "--gamma", "0.5",
         "--p-min", "1", "--p-max", "5", "--n", "5"], capsys)
    assert code == 0
    first = next(l for l in out.split("\n") if l.startswith("1,"))
    h_plus = float(first.split(",")[1])
    assert h_plus == pytest.approx(2.70711, abs=5e-6)


def test_branches_general_k2(capsys):
    code, out, _ = run_cli(
        ["branches", "--general", "--k", "2", "--p-min", "0.5", "--p-max", "4",
         "--n", "8"], capsys)
    assert code == 0
    last = out.strip().split("\n")[-1].split(",")
    assert float(last[1]) == pytest.approx(4.0 + 1.0 / 48.0, rel=1e-12)


def test_branches_rejects_empty_range(capsys):
    code, _, err = run_cli(
        ["branches", "--p-min", "2", "--p-max", "2"], capsys)
    assert code == 3
    assert "domain error" in err


def test_branches_rejects_gamma_and_delta(capsys):
    code, _, err = run_cli(
        ["branches", "--gamma", "0.5", "--delta", "0.1"], capsys)
    assert code == 2


# ---------------------------------------------------------------------- determinism

def test_byte_determinism_and_stamp(capsys):
    args = ["spectrum", "--gamma", "1", "--count", "2", "--no-cross-check"]
    _, out1, err1 = run_cli(args, capsys)
    _, out2, err2 = run_cli(args + ["--stamp"], capsys)
    assert out1 == out2  # stamp never touches the payload
    assert err1 == ""
    assert err2.startswith("# run at ")


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "levels.json"
    code, out, _ = run_cli(
        ["perturbation", "--gamma", "100", "--out", str(target)], capsys)
    assert code == 0
    assert out == ""
    body = json.loads(target.read_text())
    assert body["payload"]["p0"] == pytest.approx(100.0 ** (2.0 / 3.0), rel=1e-12)


# ------------------------------------------------------------------------ spectrum

def test_spectrum_json(capsys):
    code, out, _ = run_cli(["spectrum", "--gamma", "1", "--count", "2"], capsys)
    assert code == 0
    body = json.loads(out)
    p = body["payload"]
    assert all(rc < 1e-6 for rc in p["residual_cross"])
    assert p["energies"][0] == pytest.approx(4.0029588, abs=1e-4)


def test_spectrum_exit_codes(capsys):
    # domain error (gamma = 0 is out of scope)
    code, _, err = run_cli(["spectrum", "--gamma", "0"], capsys)
    assert code == 3
    # numerical failure: wall too close for the requested level
    code, _, err = run_cli(
        ["spectrum", "--gamma", "1", "--p-max", "4", "--n", "64",
         "--no-cross-check"], capsys)
    assert code == 4
    assert "numerical failure" in err
    # usage error: alpha without robin
    code, _, _ = run_cli(["spectrum", "--gamma", "1", "--alpha", "2"], capsys)
    assert code == 2
    # usage error: tabular rendering of a scalar report
    code, _, _ = run_cli(
        ["perturbation", "--gamma", "1", "--format", "csv"], capsys)
    assert code == 2


def test_spectrum_robin(capsys):
    code, out, _ = run_cli(
        ["spectrum", "--gamma", "1", "--bc", "robin", "--alpha", "1",
         "--no-cross-check"], capsys)
    assert code == 0
    e = json.loads(out)["payload"]["energies"][0]
    assert 3.74 < e < 4.01  # between the Neumann and Dirichlet ground states


# -------------------------------------------------------------------------- sweep

def test_sweep_csv(capsys):
    code, out, _ = run_cli(["sweep", "--gammas", "1,10"], capsys)
    assert code == 0
    lines = [l for l in out.strip().split("\n") if not l.startswith("#")]
    assert lines[0] == "gamma,E0_dirichlet,E0_neumann,gap,E0_predicted,anharmonic_estimate"
    gaps = [float(l.split(",")[3]) for l in lines[1:]]
    assert gaps[0] > gaps[1]
    assert any("gap_strictly_decreasing=true" in l for l in out.split("\n"))


def test_sweep_needs_two_gammas(capsys):
    code, _, _ = run_cli(["sweep", "--gammas", "1"], capsys)
    assert code == 2


# -------------------------------------------------------------------- bessel-check

def test_bessel_check_json(capsys):
    code, out, _ = run_cli(["bessel-check", "--gamma", "-1"], capsys)
    assert code == 0
    p = json.loads(out)["payload"]
    assert p["vanishing_coefficient"] == "D2"
    assert p["family"] == "ordinary-JY"


# ------------------------------------------------------------------- server mode

@pytest.fixture(scope="module")
def live_server():
    import uvicorn

    from branchedham.service.app import app

    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        port = s.getsockname()[1]
    config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 15.0
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("server did not start in time")
        time.sleep(0.05)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5.0)


def test_server_mode_matches_in_process(live_server, capsys):
    args = ["branches", "--gamma", "0.5", "--n", "40"]
    _, local_out, _ = run_cli(args, capsys)
    code, remote_out, _ = run_cli(args + ["--server", live_server], capsys)
    assert code == 0
    assert remote_out == local_out


def test_server_mode_error_codes(live_server, capsys):
    code, _, _ = run_cli(
        ["spectrum", "--gamma", "0", "--server", live_server], capsys)
    assert code == 3

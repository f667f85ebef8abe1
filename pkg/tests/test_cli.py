import json
import os

import pytest

from solitonlab.cli import run, worker_count


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


BASE_ARGS = ["--alpha", "5/6", "--beta", "14/15",
       "--soliton", "2/15:-1/6", "--soliton", "1/30:-1/30"]


def test_exact_writes_csv(capsys, tmp_path):
    out = tmp_path / "window.csv"
    code, _, err = invoke(capsys, "exact", *BASE_ARGS, "--n", "-5:5", "--t", "0:2",
                          "--out", str(out))
    assert code == 0 and err == ""
    lines = out.read_text().splitlines()
    assert lines[0] == "n,t,x,y"
    assert len(lines) == 1 + 11 * 3
    n, t, x, y = lines[1].split(",")
    assert (n, t) == ("-5", "0")
    float(x), float(y)


def test_exact_values_exact_are_rational(capsys):
    code, out, _ = invoke(capsys, "exact", *BASE_ARGS, "--n", "0:1", "--t", "0:0",
                          "--values", "exact")
    assert code == 0
    cell = out.splitlines()[1].split(",")[2]
    assert "/" in cell


def test_exact_stdout_default(capsys):
    code, out, _ = invoke(capsys, "exact", *BASE_ARGS, "--n", "0:0", "--t", "0:0")
    assert code == 0 and out.startswith("n,t,x,y")


def test_evolve_agrees_with_exact_sampling(capsys):
    # evolve re-seeds y = 1 at the left edge, so agreement holds away from it
    code, out_exact, _ = invoke(capsys, "exact", *BASE_ARGS, "--n", "-20:8",
                                "--t", "0:3")
    assert code == 0
    code, out_evolved, _ = invoke(capsys, "evolve", *BASE_ARGS, "--n", "-20:8",
                                  "--t", "0:3")
    assert code == 0
    for le, lv in zip(out_exact.splitlines()[1:], out_evolved.splitlines()[1:]):
        n, t, x_exact = le.split(",")[:3]
        assert lv.split(",")[:2] == [n, t]
        if int(n) >= -10:
            assert lv.split(",")[2] == x_exact


def test_bbsc_ascii(capsys):
    code, out, _ = invoke(capsys, "bbsc", "--cb", "3", "--cc", "1",
                          "--init", "300010", "--steps", "9",
                          "--render", "ascii")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 10
    assert lines[0].startswith("3...1")
    # the lone ball outruns the triple: one box per step
    assert lines[4][8] == "1"


def test_bbsc_csv(capsys):
    code, out, _ = invoke(capsys, "bbsc", "--cb", "2", "--init", "20",
                          "--steps", "2", "--render", "csv")
    assert code == 0
    assert out.splitlines()[0] == "t,n,u"


def test_bbsc_wide_occupancies_fall_back_to_csv(capsys):
    code, out, err = invoke(capsys, "bbsc", "--cb", "12", "--init", "innit",
                            "--steps", "1", "--render", "ascii")
    assert code == 1  # digit parsing fails before any automaton work
    code, out, err = invoke(capsys, "bbsc", "--cb", "12", "--cc", "12",
                            "--init", "55", "--steps", "12",
                            "--render", "ascii")
    assert code == 0
    assert out.splitlines()[0] == "t,n,u"
    assert "csv" in err.lower()


def test_analyze_reports_behavior(capsys):
    code, out, _ = invoke(capsys, "analyze", *BASE_ARGS, "--n", "-30:90",
                          "--t", "0:60")
    assert code == 0
    payload = json.loads(out)
    assert payload["alpha"] == "5/6"
    closed = payload["closed_form"]
    assert [row["p"] for row in closed] == ["2/15", "1/30"]
    assert closed[0]["velocity"] == pytest.approx(0.783, abs=1e-3)
    measured = payload["measured"]
    assert measured["anomaly"] == "smaller_faster"
    assert len(measured["tracks"]) == 2


def test_analyze_single_soliton(capsys):
    code, out, _ = invoke(capsys, "analyze", "--alpha", "5/6", "--beta",
                          "14/15", "--soliton", "1/30:-1/30",
                          "--n", "-10:50", "--t", "0:45")
    assert code == 0
    payload = json.loads(out)
    (row,) = payload["measured"]["tracks"]
    assert row["speed"] == pytest.approx(0.723, abs=0.01)
    assert row["amplitude"] == pytest.approx(0.722, abs=0.005)


def test_scan_json(capsys):
    code, out, _ = invoke(capsys, "scan", "--alpha", "5/6", "--beta", "14/15",
                          "--grid", "25")
    assert code == 0
    payload = json.loads(out)
    assert payload["violations"] == []
    assert payload["v_extremum_p"] == "23/60"


def test_verify_all(capsys):
    code, out, _ = invoke(capsys, "verify", "all", "--grid", "8",
                          "--points", "6", "--steps", "2")
    assert code == 0
    assert "verify: OK" in out
    assert "residual 0 at" in out


def test_verify_exactness_thread_invariant(capsys):
    os.environ["SOLITON_LAB_THREADS"] = "4"
    try:
        assert worker_count() == 4
        code, out4, _ = invoke(capsys, "verify", "exactness", "--grid", "6")
    finally:
        del os.environ["SOLITON_LAB_THREADS"]
    assert worker_count() == 1
    code1, out1, _ = invoke(capsys, "verify", "exactness", "--grid", "6")
    assert code == code1 == 0
    assert out4 == out1


def test_usage_errors_exit_one(capsys):
    code, _, err = invoke(capsys, "exact", "--alpha", "5/6")
    assert code == 1 and err != ""
    code, _, err = invoke(capsys, "exact", *BASE_ARGS, "--n", "5:-5", "--t", "0:0")
    assert code == 1
    code, _, err = invoke(capsys, "nonsense")
    assert code == 1


def test_domain_errors_exit_one(capsys):
    # gamma with the wrong sign is a validation error, not a crash
    code, _, err = invoke(capsys, "exact", "--alpha", "5/6", "--beta", "14/15",
                          "--soliton", "1/30:1/30", "--n", "0:1", "--t", "0:0")
    assert code == 1
    assert "gamma" in err


def test_verify_failure_exits_two(capsys):
    # an epsilon list that goes the wrong way cannot certify convergence
    code, out, err = invoke(capsys, "verify", "udlimit",
                            "--epsilons", "1,0.9,0.95")
    assert code in (1, 2)

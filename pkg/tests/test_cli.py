import json

import polars as pl
import pytest

from src.cli import main
from src.voting.checks.corpus import SUITES


def run_cli(capsys, *argv):
    code = main(["--log-level", "WARNING", *argv])
    return code, capsys.readouterr().out


def test_generate_and_spectral(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code, _ = run_cli(capsys, "generate", "--family", "gnp", "--n", "128", "--param", "0.3",
                      "--seed", "4", "--out", str(out))
    assert code == 0 and out.exists()
    code, text = run_cli(capsys, "spectral", "--graph", str(out), "--solver", "dense")
    body = json.loads(text)
    assert code == 0
    assert body["n"] == 128
    assert 0.0 < body["lambda"] < 1.0


def test_verify_pull(capsys):
    code, text = run_cli(capsys, "verify", "--kind", "pull")
    assert code == 0
    assert json.loads(text)["failed"] == [4, 5]


def test_verify_custom_without_body_fails(capsys):
    code, _ = run_cli(capsys, "verify", "--kind", "custom")
    assert code == 2


def test_bok(capsys):
    code, text = run_cli(capsys, "bok", "--k", "1")
    assert code == 0
    assert json.loads(text)["f1_half"] == 1.5


def test_simulate_with_trace(tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    code, text = run_cli(capsys, "simulate", "--family", "gnp", "--n", "256", "--param", "0.3",
                         "--k", "3", "--run-seed", "9", "--trace", str(trace))
    body = json.loads(text)
    assert code == 0
    assert body["terminal"] in ("consensus-0", "consensus-1")
    frame = pl.read_csv(trace)
    assert frame.height == body["steps"] + 1
    assert frame["phase"][-1] == "consensus"


def test_bad_graph_parameter_exits_two(capsys):
    code, _ = run_cli(capsys, "generate", "--family", "gnp", "--n", "64", "--param", "1.5")
    assert code == 2


def test_check_suite(tmp_path, capsys):
    out = tmp_path / "checks.csv"
    code, text = run_cli(capsys, "check", "--suite", "mixing", "--instances", "3", "--seed", "7",
                         "--out", str(out))
    assert code == 0
    assert json.loads(text)["failures"] == 0
    assert pl.read_csv(out).height == 3


def test_sweep_and_replay(tmp_path, capsys):
    plan = tmp_path / "plan.yaml"
    plan.write_text(
        "plan_id: cli\nfamily: gnp\nn_values: [64, 128, 256]\nparam: {coef: 0.3}\ntrials: 4\n",
        encoding="utf-8",
    )
    code, text = run_cli(capsys, "sweep", "--plan", str(plan), "--out-dir", str(tmp_path / "out"),
                         "--workers", "1", "--compare")
    body = json.loads(text)
    assert code == 0
    assert len(body["cells"]) == 3
    assert "comparison" in body
    raw = pl.read_csv(tmp_path / "out" / "raw.csv")
    expected = raw.filter((pl.col("cell") == 2) & (pl.col("trial") == 1))["t_cons"][0]

    code, text = run_cli(capsys, "replay", "--plan", str(plan), "--cell", "2", "--trial", "1")
    assert code == 0
    assert json.loads(text)["t_cons"] == expected


def test_replay_out_of_range(tmp_path, capsys):
    code, _ = run_cli(capsys, "replay", "--builtin", "lower-bound", "--trials", "2",
                      "--cell", "0", "--trial", "5")
    assert code == 2


def test_check_all_suites(capsys):
    code, text = run_cli(capsys, "check", "--suite", "all", "--instances", "2", "--seed", "7")
    body = json.loads(text)
    assert code == 0
    assert body["suite"] == "all"
    assert body["failures"] == 0
    assert body["results"] >= 2 * len(SUITES)


def test_short_flag_spellings(tmp_path, capsys):
    code, text = run_cli(capsys, "verify", "--f", "best-of-k", "--k", "3")
    assert code == 0 and json.loads(text)["failed"] == []

    graph = tmp_path / "g.txt"
    code, _ = run_cli(capsys, "generate", "--family", "gnp", "--n", "128", "--p", "0.3",
                      "--seed", "4", "--out", str(graph))
    assert code == 0
    code, text = run_cli(capsys, "spectral", "--in", str(graph), "--tol", "1e-8",
                         "--solver", "dense")
    assert code == 0 and json.loads(text)["n"] == 128

    code, text = run_cli(capsys, "generate", "--family", "random-regular", "--n", "20",
                         "--d", "4", "--seed", "1")
    assert code == 0 and json.loads(text)["n"] == 20

    trace = tmp_path / "trace.csv"
    code, text = run_cli(capsys, "simulate", "--in", str(graph), "--f", "best-of-k", "--k", "3",
                         "--init", "fraction:0.2", "--seed", "5", "--max-steps", "200",
                         "--trace", str(trace))
    body = json.loads(text)
    assert code == 0
    assert body["seed"] == 5
    assert body["initial_delta"] == pytest.approx(0.2, abs=0.05)
    assert pl.read_csv(trace)["delta"][0] == pytest.approx(body["initial_delta"])


@pytest.mark.parametrize("init", ["fraction:abc", "balanced:3", "plurality"])
def test_bad_init_exits_two(capsys, init):
    code, _ = run_cli(capsys, "simulate", "--family", "gnp", "--n", "64", "--p", "0.5",
                      "--k", "3", "--init", init)
    assert code == 2


def test_unreadable_inputs_exit_two(tmp_path, capsys):
    assert run_cli(capsys, "spectral", "--in", str(tmp_path / "missing.txt"))[0] == 2
    table = tmp_path / "f.csv"
    table.write_text("x,y\nlow,high\n", encoding="utf-8")
    assert run_cli(capsys, "verify", "--f", "custom", "--table", str(table))[0] == 2
    assert run_cli(capsys, "verify", "--f", "custom", "--expression",
                   f"np.save('{tmp_path / 'w.npy'}', x)")[0] == 2
    assert not (tmp_path / "w.npy").exists()


AUDIT_PLAN = (
    "plan_id: audit\nfamily: gnp\nn_values: [256]\nparam: {coef: 0.3}\n"
    "init: {kind: fraction, delta0: 0.05}\ntrials: 20\nmaster_seed: 3\n"
)


def test_audit_with_calibrated_bands(tmp_path, capsys):
    plan = tmp_path / "audit.yaml"
    plan.write_text(AUDIT_PLAN, encoding="utf-8")

    # the analytical growth band is empty at this size
    code, _ = run_cli(capsys, "audit", "--plan", str(plan))
    assert code == 2
    code, _ = run_cli(capsys, "audit", "--plan", str(plan), "--phase2-min", "0.02")
    assert code == 2

    code, text = run_cli(capsys, "audit", "--plan", str(plan),
                         "--phase2-min", "0.02", "--phase2-max", "0.4")
    body = json.loads(text)
    assert code == 0
    assert body["calibrated_bands"] == [0.02, 0.4]
    assert body["transitions"] >= 20
    assert body["passed"] is True

import io
import json
from types import SimpleNamespace

import pytest

from starclip.cli import EXIT_CONFIG, EXIT_LOSS, EXIT_OK, EXIT_VIOLATION, cmd_play, main, parse_range


def test_parse_range():
    assert parse_range("2..5") == [2, 3, 4, 5]
    assert parse_range("3,7") == [3, 7]


def test_solve_writes_csv(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["solve", "--k", "1", "--n", "2..7", "--out", str(out)]) == EXIT_OK
    rows = out.read_text().splitlines()
    assert [r.split(",")[2] for r in rows[1:]] == ["Draw"] + ["PIIWin"] * 5


def test_solve_budget_row(tmp_path, capsys):
    rc = main(["solve", "--k", "2", "--n", "6", "--budget-nodes", "5", "--out", str(tmp_path / "b.csv")])
    assert rc == EXIT_OK and "BudgetExceeded" in capsys.readouterr().out


def test_simulate_and_export(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("STARCLIP_OUT", str(tmp_path))
    rc = main(["simulate", "--n", "200", "--k", "1", "--games", "3", "--adversary", "random:42"])
    assert rc == EXIT_OK
    path = tmp_path / "simulate_n200_k1.jsonl"
    lines = path.read_text().splitlines()
    assert [json.loads(x)["seed"] for x in lines] == [42, 43, 44]
    assert main(["export", "--in", str(path), "--out", str(tmp_path / "s.csv")]) == EXIT_OK
    assert (tmp_path / "s.csv").read_text().count("PIIWin") == 3


def test_simulate_best_effort_flag(tmp_path):
    out = tmp_path / "x.jsonl"
    assert main(["simulate", "--n", "50", "--k", "1", "--adversary", "safe-random", "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["unguaranteed"] is True


def test_config_errors(tmp_path):
    assert main(["simulate", "--n", "0", "--k", "1", "--out", str(tmp_path / "a")]) == EXIT_CONFIG
    assert main(["simulate", "--n", "10", "--k", "1", "--adversary", "nope"]) == EXIT_CONFIG
    assert main(["pcg", "--graph", "v=3; edges=(0,0)"]) == EXIT_CONFIG


def test_pcg_not_sparse(capsys):
    assert main(["pcg", "--graph", "v=5; edges=(0,1),(0,2),(0,3)"]) == EXIT_CONFIG
    assert "NotSparse" in capsys.readouterr().err


def test_pcg_force_and_runs(tmp_path, capsys):
    out = str(tmp_path / "p.jsonl")
    rc = main(["pcg", "--graph", "v=5; edges=(0,1),(0,2),(0,3)", "--force", "--out", out])
    assert rc in (EXIT_OK, EXIT_LOSS, EXIT_VIOLATION)
    assert main(["pcg", "--v", "41", "--games", "50", "--out", out]) == EXIT_OK
    assert main(["pcg", "--graph", "v=6; edges=(0,1)", "--adversary", "exhaustive"]) == EXIT_OK
    assert main(["pcg", "--all-sparse-max", "6"]) == EXIT_OK


def test_verify_subset_and_fault(capsys):
    assert main(["verify", "--only", "nice-pair", "--exhaustive-max", "5", "--random-count", "50"]) == EXIT_OK
    rc = main(["verify", "--only", "clip-sparsity", "--exhaustive-max", "6", "--random-count", "50", "--inject-fault"])
    assert rc == EXIT_VIOLATION
    assert "counterexample" in capsys.readouterr().out


@pytest.mark.parametrize("engine", ["strategy", "solver"])
def test_play_session(engine):
    stdin = io.StringIO("0 1\nfoo\n0 1\n2 4\n1 3\n0 3\n")
    stdout = io.StringIO()
    n = 200 if engine == "strategy" else 5
    args = SimpleNamespace(n=n, k=1, engine=engine, quiet=True)
    assert cmd_play(args, stdin, stdout) == EXIT_OK
    text = stdout.getvalue()
    assert "illegal input" in text and "engine plays" in text

import json
import subprocess
import sys
from pathlib import Path

import pytest

from cofkit.cli import main
from cofkit.files import load_tree

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_prints_the_theory(capsys):
    code, out, _ = run(capsys, "parse", DATA / "cof.thy")
    assert code == 0 and "qcof" in out


def test_morleyize_table_as_json(capsys):
    code, out, _ = run(capsys, "morleyize", DATA / "cof.thy", "--emit-table", "json")
    assert code == 0 and '"R0"' in out


def test_skolemize_reports_universality(capsys):
    code, out, _ = run(capsys, "skolemize", DATA / "cof.thy", "--emit-registry")
    assert code == 0 and "# universal: true" in out


def test_eval_on_finite_structures(capsys):
    code, out, _ = run(capsys, "eval", DATA / "cycle.thy", DATA / "cycle3.str")
    assert code == 0 and "model: true" in out
    code, out, _ = run(capsys, "eval", DATA / "cycle.thy", DATA / "path3.str")
    assert code == 1 and "model: false" in out


def test_eval_of_a_skolemized_theory_searches_expansions(capsys, tmp_path):
    code, out, _ = run(capsys, "skolemize", DATA / "cycle.thy")
    assert code == 0
    sk = tmp_path / "sk.thy"
    sk.write_text("\n".join(line for line in out.splitlines() if not line.startswith("# ")) + "\n")
    code, out, _ = run(capsys, "eval", sk, DATA / "cycle3.str")
    assert code == 0 and "universal: true" in out and "expansion found" in out


def test_eval_of_an_order_structure(capsys):
    code, out, _ = run(capsys, "eval", DATA / "cof.thy", DATA / "q.str")
    assert code == 0


def test_check_embedding(capsys):
    code, out, _ = run(capsys, "check-embedding", DATA / "q.str", DATA / "q1.str", "--theory", DATA / "cof.thy")
    assert code == 1 and "cofinality" in out
    code, out, _ = run(capsys, "check-embedding", DATA / "q.str", DATA / "q.str", "--theory", DATA / "cof.thy",
                       "--params", DATA / "qparams.txt")
    assert code == 0


def test_ef_game(capsys):
    code, out, _ = run(capsys, "ef-game", "(fin 3)", "(fin 4)", "--rounds", "2")
    assert code == 0 and "DuplicatorWins" in out
    assert out.startswith("# cofkit ef-game seed=0")


def test_tree_output_is_loadable(capsys):
    code, out, _ = run(capsys, "ef-game", "Q", "(sum Q Q)", "--rounds", "2", "--plays", "20", "--format", "tree")
    tree = load_tree(out)
    assert code == 0 and tree["command"] == "ef-game" and tree["ok"] is True and tree["seed"] == 0


def test_small_aec_suite(capsys):
    code, out, _ = run(capsys, "aec-suite", "--instances", "30", "--seed", "2")
    assert code == 0 and "0 counterexamples" in out


@pytest.mark.parametrize(
    "argv,code",
    [
        (["parse", DATA / "bad.thy"], "free-var-policy"),
        (["parse", DATA / "missing.thy"], "input"),
        (["ef-game", "(fin)", "Q"], "order-syntax"),
        (["ef-game", "Q", "Q", "--plays", "0"], "input"),
        (["eval", DATA / "cof.thy", DATA / "q.str", "--surrogate", "nonsense"], "syntax"),
    ],
)
def test_errors_are_json_on_stderr(capsys, argv, code):
    rc, out, err = run(capsys, *argv)
    assert rc == 2 and out == ""
    assert json.loads(err)["error"]["code"] == code


def test_environment_overrides(capsys, monkeypatch):
    monkeypatch.setenv("COFKIT_SEED", "7")
    monkeypatch.setenv("COFKIT_ROUNDS", "1")
    code, out, _ = run(capsys, "ef-game", "(fin 2)", "(fin 3)")
    assert code == 0 and out.startswith("# cofkit ef-game seed=7") and "rounds 1" in out


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "cofkit.cli", "ef-game", "(fin 2)", "(fin 2)", "--rounds", "1"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "DuplicatorWins" in p.stdout

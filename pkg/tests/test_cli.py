import pytest

from replan.cli import main
from conftest import BENCH_SEED, DATA

TABLE = """\
Strategy            Scenario 1  Scenario 2  Scenario 3
Basic plaster            33/34           -           -
Smart plaster            32/34           -           -
Plaster set              33/34       30/34           -
Full recomputation       33/34       30/34        0/34
"""


@pytest.fixture
def bench_files(tmp_path):
    inst, sol = tmp_path / "i.txt", tmp_path / "s.txt"
    assert main(["generate", "--seed", str(BENCH_SEED), "--out", str(inst)]) == 0
    assert main(["solve", "--instance", str(inst), "--out", str(sol)]) == 0
    return tmp_path, inst, sol


def scenario(tmp_path, inst, sol, kind):
    changes, inst2 = tmp_path / f"c{kind}.txt", tmp_path / f"i{kind}.txt"
    assert main(["scenario", "--instance", str(inst), "--solution", str(sol), "--kind", str(kind),
                 "--seed", str(BENCH_SEED), "--out", str(changes)]) == 0
    assert main(["apply-changes", "--instance", str(inst), "--solution", str(sol),
                 "--changes", str(changes), "--out", str(inst2)]) == 0
    return inst2


def test_solve_happy_path(tmp_path):
    out, lp = tmp_path / "s.txt", tmp_path / "p.lp"
    assert main(["solve", "--instance", str(DATA / "seed42_instance.txt"), "--out", str(out),
                 "--export-lp", str(lp)]) == 0
    assert out.read_text() == (DATA / "seed42_solution.txt").read_text()
    assert lp.read_text().startswith("Maximize\n")


def test_validate(capsys, small):
    assert main(["validate", "--instance", str(DATA / "seed42_instance.txt"),
                 "--solution", str(DATA / "seed42_solution.txt")]) == 0
    assert capsys.readouterr().out == "valid\n"


def test_validate_reports_violations(tmp_path, capsys):
    sol = tmp_path / "s.txt"
    sol.write_text("assign occurrence=m1-s1-w1 ta=ta3\n")
    assert main(["validate", "--instance", str(DATA / "small.txt"), "--solution", str(sol)]) == 1
    assert capsys.readouterr().out == (
        "Understaffed occurrence=m1-s1-w2 have=0 need=1\n"
        "Understaffed occurrence=m2-s1-w1 have=0 need=1\n")


def test_reopt_basic_on_overload(bench_files, capsys):
    tmp_path, inst, sol = bench_files
    inst2 = scenario(tmp_path, inst, sol, 2)
    capsys.readouterr()
    assert main(["reopt", "--instance", str(inst2), "--solution", str(sol),
                 "--strategy", "basic", "--out", str(tmp_path / "x.txt")]) == 1
    assert "strategy inapplicable: TaOverload" in capsys.readouterr().err
    assert not (tmp_path / "x.txt").exists()


def test_reopt_and_diff(bench_files, capsys):
    tmp_path, inst, sol = bench_files
    inst2 = scenario(tmp_path, inst, sol, 1)
    assert main(["classify", "--instance", str(inst2), "--solution", str(sol)]) == 0
    assert capsys.readouterr().out.startswith("LocalViolations(m2-s1-w1)\n")
    sol2, script, again = tmp_path / "s2.txt", tmp_path / "e.txt", tmp_path / "e2.txt"
    assert main(["reopt", "--instance", str(inst2), "--solution", str(sol),
                 "--strategy", "smart", "--out", str(sol2), "--script", str(script)]) == 0
    assert "kept 32/34" in capsys.readouterr().err
    assert main(["diff", "--old", str(sol), "--new", str(sol2), "--out", str(again)]) == 0
    assert script.read_text() == again.read_text()
    assert [line.split()[0] for line in script.read_text().splitlines()] == [
        "unassign", "unassign", "assign", "assign"]


def test_bench(capsys):
    assert main(["bench", "--seed", str(BENCH_SEED)]) == 0
    out = capsys.readouterr().out
    assert out == f"seed {BENCH_SEED}, original solution has 34 assignments\n" + TABLE


def test_input_errors(tmp_path, capsys):
    assert main(["solve", "--instance", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("module id=m1\nnonsense\n")
    assert main(["solve", "--instance", str(bad)]) == 2
    assert "ParseError" in capsys.readouterr().err
    changes = tmp_path / "c.txt"
    changes.write_text("block ta1 fortnight 3\n")
    assert main(["apply-changes", "--instance", str(DATA / "small.txt"), "--solution",
                 str(DATA / "seed42_solution.txt"), "--changes", str(changes)]) == 2
    assert main(["reopt", "--instance", str(DATA / "small.txt"),
                 "--solution", str(DATA / "seed42_solution.txt"), "--strategy", "full"]) == 2
    assert main(["solve", "--instance", str(DATA / "small.txt"), "--green", "1"]) == 2


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["reopt", "--strategy", "magic"]) == 2
    assert "usage:" in capsys.readouterr().err
    assert main(["--help"]) == 0


def test_infeasible_solve(tmp_path):
    inst = tmp_path / "i.txt"
    inst.write_text("module id=m\nsession id=s module=m need=1 hours=1 weeks=1\n"
                    "occurrence id=o session=s week=1\nta id=t maxweek=1 maxsem=1\n")
    assert main(["solve", "--instance", str(inst)]) == 1

import json

import pytest

from twoecss.cli import bench_table, main
from twoecss.instances import read_graph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def petersen_file(tmp_path, capsys):
    path = tmp_path / "petersen.txt"
    assert run(capsys, "gen", "petersen", "-o", str(path))[0] == 0
    return path


def test_gen_writes_a_readable_file(tmp_path, capsys):
    path, dot = tmp_path / "r.txt", tmp_path / "r.dot"
    code, _, _ = run(capsys, "gen", "random_2ec:9,3,seed=2", "-o", str(path), "--dot", str(dot))
    assert code == 0
    assert read_graph(str(path)).n == 9
    assert dot.read_text().startswith("graph G {")


def test_solve_with_oracle(petersen_file, capsys):
    code, out, _ = run(capsys, "solve", str(petersen_file), "--oracle")
    d = json.loads(out)
    assert code == 0 and d["opt"] == 11 and d["solution_size"] <= 14
    assert d["ratio_vs_opt"] == f"{d['solution_size']}/11".replace("11/11", "1")


def test_solve_writes_json_and_solution(petersen_file, tmp_path, capsys):
    js, sol = tmp_path / "r.json", tmp_path / "sol.txt"
    code, out, _ = run(capsys, "solve", str(petersen_file), "--json", str(js), "-o", str(sol),
                       "--epsilon", "1/8", "--contractible-bound", "5")
    assert code == 0 and out.startswith("solution_size")
    assert json.loads(js.read_text())["n"] == 10
    assert run(capsys, "verify", str(petersen_file), str(sol))[0] == 0


def test_verify_reports_a_witness(petersen_file, tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("10 3\n0 1\n1 2\n2 3\n")
    code, _, err = run(capsys, "verify", str(petersen_file), str(bad))
    assert code == 1 and err.startswith("FAIL:")


def test_cover(petersen_file, capsys):
    code, out, _ = run(capsys, "cover", str(petersen_file), "--canonical")
    assert code == 0 and out.startswith("# 2-edge-cover: 10 edges")


def test_reduce_emits_trace(tmp_path, capsys):
    path = tmp_path / "c.txt"
    run(capsys, "gen", "random_2ec:16,6,seed=4", "-o", str(path))
    code, out, _ = run(capsys, "reduce", str(path))
    d = json.loads(out)
    assert code == 0 and d["trace"]["kind"]
    assert all(c["ok"] for c in d["structured_inputs"])


def test_oracle_and_its_limits(petersen_file, capsys):
    code, out, _ = run(capsys, "oracle", str(petersen_file))
    assert code == 0 and out.startswith("# optimum 11 edges")
    code, _, err = run(capsys, "oracle", str(petersen_file), "--max-nodes", "5")
    assert code == 2 and "exceeds" in err


def test_check_ratio(capsys):
    code, out, _ = run(capsys, "check-ratio")
    assert code == 0 and "worst-case factor 118/89" in out


@pytest.mark.parametrize("argv", [
    [], ["nope"], ["solve"], ["solve", "/no/such/file"], ["gen", "hexagon:3", "-o", "x"],
    ["solve", "f", "--epsilon", "2"], ["bench", "/no/such/dir"],
])
def test_usage_errors(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_bench_is_identical_across_job_counts(tmp_path, capsys):
    for i, spec in enumerate(["cycle:6", "petersen", "random_2ec:9,4,seed=1",
                              "random_2ec:14,5,seed=2", "prism:3"]):
        run(capsys, "gen", spec, "-o", str(tmp_path / f"g{i}.txt"))
    paths = sorted(str(p) for p in tmp_path.glob("*.txt"))
    one = bench_table(paths, 1)
    assert one == bench_table(paths, 3)
    assert len(one.splitlines()) == len(paths) + 2
    code, out, _ = run(capsys, "bench", str(tmp_path), "--jobs", "2")
    assert code == 0 and out == one

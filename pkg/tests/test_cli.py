import io
import json

import pytest

from swarm_cluster.cli import main


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture
def iris_config(tmp_path):
    p = tmp_path / "iris.json"
    p.write_text(
        json.dumps(
            {
                "dataset": "iris",
                "algorithm": ["sc-brapso", "kmeans"],
                "k": 3,
                "seeds": [0, 1, 2],
                "subtractive": {"ra": 0.55},
                "pso": {"max_iters": 30},
                "output": {"report": "out/report.csv"},
            }
        )
    )
    return p


def test_run_prints_rows_and_medians(iris_config, tmp_path):
    code, out = run(["run", "--config", str(iris_config), "--trace-dir", str(tmp_path / "traces")])
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("dataset,algorithm,seed,k,sicd")
    assert len(lines) == 1 + 6 + 2
    assert lines[-2].startswith("iris,sc-brapso,median,3,")
    assert (tmp_path / "out" / "report.csv").exists()
    assert len(list((tmp_path / "traces").glob("*.jsonl"))) == 6


def test_compare_table(iris_config):
    code, out = run(["compare", "--config", str(iris_config)])
    assert code == 0
    assert "sicd_delta" in out.splitlines()[1]
    assert any(line.split()[0] == "kmeans" for line in out.splitlines()[2:])


def test_bench(tmp_path):
    trace = tmp_path / "t.jsonl"
    code, out = run(
        ["bench", "--function", "sphere", "--dim", "3", "--iters", "50", "--swarm", "10", "--seed", "0", "--trace", str(trace)]
    )
    assert code == 0
    header, row = out.splitlines()
    assert header == "function,dim,seed,best_fitness,iterations_run,stop_reason"
    assert row.startswith("sphere,3,0,")
    assert len(trace.read_text().splitlines()) == int(row.split(",")[4])


def test_seed_and_sweep_builtin():
    code, out = run(["seed", "--input", "iris", "--ra", "0.55"])
    assert code == 0
    assert out.splitlines()[0] == "k=3"
    assert len(out.splitlines()) == 5
    code, out = run(["sweep-ra", "--input", "iris", "--from", "0.7", "--to", "0.3", "--steps", "5"])
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    radii = [float(r[0]) for r in rows]
    assert radii == sorted(radii) and len(rows) == 5


def test_seed_csv_input(tmp_path):
    p = tmp_path / "pts.csv"
    p.write_text("x,y,cls\n0,0,a\n0,0.1,a\n9,9,b\n9,9.1,b\n")
    code, out = run(["seed", "--input", str(p), "--header", "--label-col", "2", "--ra", "0.3"])
    assert code == 0
    assert out.splitlines()[:2] == ["k=2", "x,y"]


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--config", "does-not-exist.json"],
        ["seed", "--input", "nope.csv", "--ra", "0.5"],
        ["seed", "--input", "iris", "--ra", "-1"],
        ["sweep-ra", "--input", "iris", "--from", "0.1", "--to", "0.2", "--steps", "0"],
        ["bench", "--function", "sphere", "--dim", "2", "--iters", "0", "--swarm", "5", "--seed", "0"],
        ["bench", "--function", "schaffer", "--dim", "2", "--iters", "5", "--swarm", "5", "--seed", "0"],
        ["frobnicate"],
    ],
)
def test_validation_errors_exit_1(argv, capsys):
    code, _ = run(argv)
    assert code == 1


def test_bad_config_key_exit_1(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text('{"dataset": "iris", "algorithm": "kmeans", "k": 3, "seeds": [0], "pso": {"swarms": 3}}')
    code, _ = run(["run", "--config", str(p)])
    assert code == 1
    assert "pso.swarms" in capsys.readouterr().err


def test_failed_run_exit_2(iris_config, monkeypatch):
    from swarm_cluster.harness import runner
    from swarm_cluster.optimizer import NonFiniteFitnessError

    def boom(*a):
        raise NonFiniteFitnessError(0, [0.0], float("inf"))

    monkeypatch.setattr(runner, "run_algorithm", boom)
    code, out = run(["run", "--config", str(iris_config)])
    assert code == 2


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "swarm_cluster", "bench", "--function", "rastrigin", "--dim", "2",
         "--iters", "5", "--swarm", "4", "--seed", "1"],  # fmt: skip
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("function,")

import json

import pytest

from swarm_cluster.dataset import CsvSchema, load_csv
from swarm_cluster.harness import (
    REPORT_COLUMNS,
    ConfigError,
    ReportRow,
    compare_table,
    config_from_dict,
    config_to_dict,
    parse_config,
    read_trace,
    run_experiment,
    serialize_config,
    write_report,
    write_trace,
)
from swarm_cluster.optimizer import TraceRecord

MINIMAL = {"dataset": "iris", "algorithm": "kmeans", "k": 3, "seeds": [1]}


def cfg(**over):
    raw = dict(MINIMAL)
    raw.update(over)
    return config_from_dict(raw)


def test_minimal_config_defaults():
    c = cfg()
    assert c.dataset.builtin == "iris"
    assert c.algorithms == ("kmeans",)
    assert c.pso.swarm_size == 30 and c.subtractive.ra == 0.4
    assert c.lloyd_refine and c.report is None


@pytest.mark.parametrize(
    "raw, path",
    [
        ({"dataset": "iris", "algorithm": "kmeans", "seeds": [1]}, "k"),
        ({**MINIMAL, "algorithm": "dbscan"}, "algorithm"),
        ({**MINIMAL, "algorithm": ["kmeans", "bogus"]}, "algorithm[1]"),
        ({**MINIMAL, "pso": {"swarm_sise": 3}}, "pso.swarm_sise"),
        ({**MINIMAL, "pso": {"swarm_size": "many"}}, "pso.swarm_size"),
        ({**MINIMAL, "pso": {"swarm_size": 1}}, "pso"),
        ({**MINIMAL, "subtractive": {"ra": True}}, "subtractive.ra"),
        ({**MINIMAL, "seeds": []}, "seeds"),
        ({**MINIMAL, "seeds": [1, 1]}, "seeds"),
        ({**MINIMAL, "seeds": [1, True]}, "seeds[1]"),
        ({**MINIMAL, "extra": 1}, "extra"),
        ({**MINIMAL, "dataset": "mnist"}, "dataset"),
        ({**MINIMAL, "dataset": {"delimiter": ","}}, "dataset.path"),
        ({**MINIMAL, "output": {"plot": "x"}}, "output.plot"),
        ({**MINIMAL, "kmeans": {"max_iters": 0}}, "kmeans.max_iters"),
        ({"dataset": "iris", "algorithm": "sc-brapso", "k": 3, "seeds": [1]}, "k"),
        ({**MINIMAL, "refine_mode": "all"}, "refine_mode"),
        ({**MINIMAL, "seed_fraction": 2}, "seed_fraction"),
    ],
)
def test_config_errors_name_key(raw, path):
    with pytest.raises(ConfigError) as ei:
        config_from_dict(raw)
    assert ei.value.path == path


def test_mixed_algorithms_allow_k():
    c = cfg(algorithm=["sc-brapso", "kmeans"])
    assert c.k == 3


def test_malformed_json(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"dataset": "iris",\n "k": }')
    with pytest.raises(ConfigError, match="line 2"):
        parse_config(p)
    with pytest.raises(ConfigError, match="cannot read"):
        parse_config(tmp_path / "missing.json")


def test_serialize_roundtrip(tmp_path):
    c = cfg(
        algorithm=["sc-brapso", "pso"],
        subtractive={"ra": 0.55, "k_max": 4},
        pso={"max_iters": 50, "inertia": "linear"},
        output={"report": "r.csv"},
        dataset={"path": "x.csv", "has_header": True, "label_column": -1},
    )
    again = config_from_dict(json.loads(serialize_config(c)))
    assert again == c
    assert config_to_dict(again) == config_to_dict(c)


def test_run_experiment_rows_and_traces(tmp_path):
    c = cfg(algorithm=["sc-brapso", "kmeans"], seeds=[2, 0, 1], subtractive={"ra": 0.55}, pso={"max_iters": 30})
    rows = run_experiment(c, trace_dir=tmp_path)
    assert [(r.algorithm, r.seed) for r in rows] == [
        ("sc-brapso", 2), ("sc-brapso", 0), ("sc-brapso", 1), ("kmeans", 2), ("kmeans", 0), ("kmeans", 1),
    ]  # fmt: skip
    assert all(r.k == 3 for r in rows)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert "iris_sc-brapso_seed0.jsonl" in files and len(files) == 6
    tr = read_trace(tmp_path / "iris_sc-brapso_seed0.jsonl")
    assert [rec["t"] for rec in tr] == list(range(1, len(tr) + 1))


def test_seed_isolation():
    a = run_experiment(cfg(algorithm="pso", seeds=[5, 6], pso={"max_iters": 20}))
    b = run_experiment(cfg(algorithm="pso", seeds=[6, 5], pso={"max_iters": 20}))
    strip = lambda r: (r.seed, r.sicd, r.k, r.convergence_iteration, r.iterations_run)  # noqa: E731
    assert sorted(map(strip, a)) == sorted(map(strip, b))


def test_row_k_matches_seeding_per_seed():
    from swarm_cluster.clustering import subtractive_seed
    from swarm_cluster.dataset import load_builtin

    c = config_from_dict({"dataset": "iris", "algorithm": "sc-brapso", "seeds": list(range(10)), "pso": {"max_iters": 20}})
    seeding, _, _ = subtractive_seed(load_builtin("iris"), c.subtractive)
    rows = run_experiment(c)
    assert all(r.k == seeding.k for r in rows)


def test_failed_run_is_recorded_and_continues(monkeypatch):
    from swarm_cluster.harness import runner
    from swarm_cluster.optimizer import NonFiniteFitnessError

    real = runner.run_algorithm

    def flaky(cfg_, ds, algorithm, seed):
        if seed == 1:
            raise NonFiniteFitnessError(0, [0.0], float("nan"))
        return real(cfg_, ds, algorithm, seed)

    monkeypatch.setattr(runner, "run_algorithm", flaky)
    rows = run_experiment(cfg(seeds=[0, 1, 2]))
    assert [r.failed for r in rows] == [False, True, False]
    assert rows[1].sicd is None
    table = compare_table(rows)
    assert table[0]["runs"] == 3


def test_report_format(tmp_path):
    empty = write_report([], tmp_path / "e.csv")
    assert empty.read_text() == ",".join(REPORT_COLUMNS) + "\n"
    row = ReportRow("iris", "kmeans", 0, 3, 97.21468123, 0.11, 0.11, 4, 1.23456789, 7, 0.5)
    p = write_report([row], tmp_path / "r.csv")
    lines = p.read_text().splitlines()
    assert lines[0] == "dataset,algorithm,seed,k,sicd,error_rate_matching,error_rate_purity,convergence_iteration,min_inter_cluster,iterations_run,wall_ms"
    assert lines[1] == "iris,kmeans,0,3,97.2147,0.11,0.11,4,1.23457,7,0.5"
    ds = load_csv(p, CsvSchema(has_header=True, skip_columns=(0, 1)))
    assert ds.n == 1 and ds.points[0, 2] == pytest.approx(97.2147)


def test_trace_roundtrip(tmp_path):
    trace = [TraceRecord(t, 100.0 - t * 0.01, 0.9) for t in range(1, 1001)]
    p = write_trace(trace, tmp_path / "sub" / "t.jsonl")
    back = read_trace(p)
    assert len(back) == 1000
    assert all(a["t"] < b["t"] for a, b in zip(back, back[1:]))
    assert back[0] == {"t": 1, "gbest_fitness": 99.99, "w": 0.9}


def test_csv_dataset_config(tmp_path):
    (tmp_path / "pts.csv").write_text("0,0,a\n0,1,a\n5,5,b\n5,6,b\n")
    (tmp_path / "c.json").write_text(
        json.dumps({"dataset": {"path": "pts.csv", "label_column": 2}, "algorithm": "kmeans", "k": 2, "seeds": [0]})
    )
    c = parse_config(tmp_path / "c.json")
    rows = run_experiment(c)
    assert rows[0].dataset == "pts"
    assert rows[0].error_rate_matching == 0.0

import json

import pandas as pd
import pytest

from pairnet.cli import main
from pairnet.errors import InvariantError
from pairnet.generators import random_euclidean
from pairnet.io import dump_instance, load_instance


@pytest.fixture
def line_file(tmp_path, line_0_1_3_10):
    path = tmp_path / "line.json"
    dump_instance(line_0_1_3_10, path)
    return path


def test_gen_unit_line(tmp_path):
    out = tmp_path / "inst.json"
    assert main(["gen", "--family", "unitLine", "--n", "4", "--seed", "1", "--output", str(out)]) == 0
    inst = load_instance(out)
    assert inst.n == 4
    assert sorted(inst.metric.points.tolist()) == list(range(8))


def test_gen_is_byte_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        main(["gen", "--family", "randomEuclidean", "--n", "3", "--seed", "9", "--output", str(path)])
    assert a.read_bytes() == b.read_bytes()


def test_gen_partition_gadget_to_stdout(capsys):
    assert main(["gen", "--family", "partitionMatching", "--xs", "1,2,3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["pairs"]) == 6


def test_gen_connected_partition(tmp_path):
    out = tmp_path / "graph.json"
    args = ["gen", "--family", "connectedPartitionMst", "--edges", "0-1,1-2,2-3,3-0", "--output", str(out)]
    assert main(args) == 0
    assert load_instance(out).metric.pseudometric


def test_solve_writes_report(tmp_path, line_file):
    out = tmp_path / "report.json"
    args = ["solve", "--problem", "mst", "--objective", "sum", "--input", str(line_file), "--output", str(out)]
    assert main(args + ["--oracle"]) == 0
    report = json.loads(out.read_text())
    assert report["value"] == pytest.approx(8.0)
    assert report["oracle_value"] == pytest.approx(8.0)
    assert report["algorithm"] == "minsum_2mst"


def test_solve_output_is_reproducible(tmp_path, line_file):
    outputs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        main(["solve", "--problem", "tsp", "--objective", "max", "--input", str(line_file), "--output", str(out)])
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_solve_void_guarantee(tmp_path, line_file, capsys):
    args = ["solve", "--problem", "tsp", "--objective", "sum", "--input", str(line_file), "--cap-k", "4"]
    assert main(args) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["guarantee_valid"] is False
    assert "guarantee void" in captured.err


def test_infeasible_matching_exits_three(tmp_path):
    path = tmp_path / "odd.json"
    dump_instance(random_euclidean(3, seed=0), path)
    assert main(["solve", "--problem", "matching", "--objective", "sum", "--input", str(path)]) == 3


def test_oracle_capacity_exits_four(tmp_path):
    path = tmp_path / "big.json"
    dump_instance(random_euclidean(10, seed=0), path)
    assert main(["exact", "--problem", "tsp", "--objective", "sum", "--input", str(path)]) == 4


def test_exact_prints_optimum(line_file, capsys):
    assert main(["exact", "--problem", "mst", "--objective", "sum", "--input", str(line_file)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == pytest.approx(8.0)
    assert payload["coloring"]["red"] == [0, 1]


def test_missing_input_exits_two(tmp_path):
    missing = tmp_path / "nope.json"
    assert main(["exact", "--problem", "mst", "--objective", "sum", "--input", str(missing)]) == 2


def test_ragged_matrix_exits_two(tmp_path, capsys):
    path = tmp_path / "ragged.json"
    payload = {"format": "pairnet-instance-v1", "metric": {"kind": "matrix", "matrix": [[0, 1], [1]]}, "pairs": [[0, 1]]}
    path.write_text(json.dumps(payload))
    assert main(["solve", "--problem", "matching", "--objective", "sum", "--input", str(path)]) == 2
    assert "[ERROR]" in capsys.readouterr().err


def test_bad_flags_exit_two():
    with pytest.raises(SystemExit) as excinfo:
        main(["solve", "--problem", "steiner", "--objective", "sum", "--input", "x.json"])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit):
        main(["gen", "--family", "partitionMatching", "--xs", "1,a"])


def test_ratio_writes_csv(tmp_path, capsys):
    out = tmp_path / "ratios.csv"
    args = [
        "ratio", "--family", "randomEuclidean", "--problem", "mst", "--objective", "max",
        "--count", "12", "--n-values", "2,3,4", "--output", str(out),
    ]
    assert main(args) == 0
    table = pd.read_csv(out)
    assert len(table) == 12
    assert list(table.columns) == ["instance_id", "n", "algorithm", "value", "oracle", "ratio", "bound", "pass"]
    assert "[RATIO]" in capsys.readouterr().err


def test_invariant_failure_exits_one(monkeypatch, line_file, capsys):
    def broken(*args, **kwargs):
        raise InvariantError("chain colouring revisited point 0")

    monkeypatch.setattr("pairnet.cli.run_solve", broken)
    assert main(["solve", "--problem", "mst", "--objective", "sum", "--input", str(line_file)]) == 1
    assert "revisited point 0" in capsys.readouterr().err

import csv
import io
import json

import pytest

from emlab.cli import CSV_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def cert(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--stable")
    return code, json.loads(out)


def test_large_check(capsys):
    code, c = cert(capsys, "large", "check", "--set", "[4,5,6,7,8]", "--alpha", "w")
    assert code == 0 and c["verdict"] is True
    code, c = cert(capsys, "large", "check", "--set", "[4,5,6,7]", "--alpha", "w")
    assert code == 1 and c["verdict"] is False


def test_endpoint(capsys):
    code, c = cert(capsys, "large", "endpoint", "--alpha", "w.2", "--a", "4")
    assert code == 0 and c["output"] == 18
    code, c = cert(capsys, "large", "endpoint", "--alpha", "w^2+w", "--a", "4", "--stepping")
    assert code == 0 and c["output"] == 5630


def test_resource_exit(capsys):
    code, _, err = run(capsys, "large", "endpoint", "--alpha", "w^3", "--a", "4")
    assert code == 3 and "resource" in err


def test_usage_exit(capsys):
    code, _, err = run(capsys, "large", "check", "--set", "[4,5,", "--alpha", "w")
    assert code == 2 and err
    code, _, _ = run(capsys, "large", "check", "--set", "[4,5]", "--alpha", "w^^")
    assert code == 2
    with pytest.raises(SystemExit):
        main(["large", "check", "--shard", "3/2", "--set", "[4]", "--alpha", "1"])


def test_at_path_and_range_shorthand(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"from": 4, "to": 8}))
    code, c = cert(capsys, "large", "check", "--set", f"@{p}", "--alpha", "w")
    assert code == 0 and c["verdict"] is True


def test_sparse_and_sparsify(capsys):
    code, c = cert(capsys, "sparse", "check", "--set", "[4,8,16]", "--alpha", "3")
    assert code == 0 and c["verdict"] is True
    code, c = cert(capsys, "sparsify", "--set", json.dumps(list(range(4, 200))), "--n", "0", "--m", "3")
    assert code == 0 and c["verified"]


def test_color_commands(capsys):
    coloring = json.dumps({"ground": [4, 5, 6], "colors": 2, "pairs": [[4, 5, 0], [4, 6, 0], [5, 6, 0]]})
    code, c = cert(capsys, "color", "fallow", "--coloring", coloring)
    assert code == 0 and c["verdict"] is True
    bad = json.dumps({"ground": [4, 5, 6], "colors": 2, "pairs": [[4, 5, 0], [4, 6, 1], [5, 6, 0]]})
    code, c = cert(capsys, "color", "fallow", "--coloring", bad)
    assert code == 1 and c["verdict"] is False
    code, c = cert(capsys, "color", "transitive", "--set", "[4,5,6,7]", "--constant-colors", "1")
    assert code == 0


def test_csv(capsys):
    code, out, _ = run(capsys, "large", "check", "--set", "[4,5,6,7,8]", "--alpha", "w", "--format", "csv",
                       "--stable")
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 2
    assert rows[1][0] and rows[1][1] == "True"


def test_density_cli(capsys):
    code, c = cert(capsys, "density", "check", "--set", "[3,4,5,6,7]", "--m", "0")
    assert code == 1 and c["verdict"] is False
    code, c = cert(capsys, "density", "check", "--set", "[4,5,6,7,8]", "--alpha", "w", "--budget", str(4**10))
    assert code == 1 and c["evidence"]
    code, _, _ = run(capsys, "density", "check", "--set", "[4,5,6,7,8]", "--alpha", "w", "--budget", "10")
    assert code == 3
    code, c = cert(capsys, "density", "refute", "--set", "[4,5,6,7,8]", "--m", "1", "--samples", "100")
    assert code == 1


def test_limitmin_cli(capsys):
    table = json.dumps({"u": 3, "horizon": 3, "rows": [[3, 0, 0], [2, 2, 0], [0, 3, 0]]})
    code, c = cert(capsys, "limitmin", "qmin", "--table", table, "--a", "0", "--b", "2")
    assert code == 0 and c["output"] == [0, 2, 0]
    code, c = cert(capsys, "limitmin", "scan", "--table", table)
    assert code == 1 and [0, 1, 2] in c["output"]
    code, c = cert(capsys, "limitmin", "scan", "--exhaustive", "2,1,4")
    assert code == 0
    code, _, _ = run(capsys, "limitmin", "qmin", "--table", table, "--a", "2", "--b", "2")
    assert code == 2
    theta = json.dumps({"bounds": [1, 3, 4, 4], "data": [0] * 48})
    code, c = cert(capsys, "limitmin", "rtrajectory", "--theta", theta, "--a", "0")
    assert code == 0 and c["output"]["r"] == [0, 1, 2]


def test_witness_cli(capsys):
    code, c = cert(capsys, "witness", "base", "--set", json.dumps({"from": 4, "to": 3130}),
                   "--random-colors", "4", "--seed", "3")
    assert code == 0 and c["verified"]
    code, c = cert(capsys, "witness", "base", "--set", "[4,5,6,7,8]", "--constant-colors", "2")
    assert code == 1 and c["error"].startswith("InsufficientInput")
    code, c = cert(capsys, "witness", "base", "--set", "[4,5,6,7,8]", "--constant-colors", "2", "--non-strict")
    assert c["verdict"] is not None


def test_deterministic_output(capsys):
    argv = ("density", "check", "--set", "[4,5,6,7,8]", "--alpha", "w", "--mode", "randomized",
            "--samples", "200", "--seed", "5")
    a = run(capsys, *argv, "--stable")
    b = run(capsys, *argv, "--stable")
    assert a == b

import csv
import io
import json

import pytest

from outbranch.cli import main
from outbranch.formats import format_instance
from outbranch.generate import InstanceSpec, generate


@pytest.fixture
def write_instance(tmp_path):
    def _write(kind, n, p=0.0, seed=0, name="g.txt"):
        path = tmp_path / name
        path.write_text(format_instance(generate(InstanceSpec(kind, n, p, seed))))
        return str(path)

    return _write


def test_solve_k_yes_with_witness(write_instance, tmp_path, capsys):
    path = write_instance("out_star", 5)
    wpath = tmp_path / "w.txt"
    assert main(["solve-k", path, "--k", "4", "--witness-out", str(wpath)]) == 0
    out = capsys.readouterr().out
    assert "decision: YES" in out
    assert main(["verify", path, "--witness", str(wpath), "--k", "4"]) == 0
    assert "valid: True" in capsys.readouterr().out


def test_solve_k_no(write_instance, capsys):
    path = write_instance("cycle", 5)
    assert main(["solve-k", path, "--k", "2"]) == 1
    assert main(["solve-k", path, "--k", "2", "--algo", "A", "--json"]) == 1
    last = capsys.readouterr().out.strip().splitlines()[-1]
    assert json.loads(last)["decision"] == "NO"


def test_solve_k_witness_on_stdout(write_instance, capsys):
    path = write_instance("gnp_digraph", 9, 0.4, 3)
    code = main(["solve-k", path, "--k", "3"])
    out = capsys.readouterr().out
    if code == 0:
        assert "root " in out


def test_kernelize_paths(write_instance, tmp_path, capsys, caplog):
    path = write_instance("random_single_source_dag", 40, 0.05, 1)
    assert main(["kernelize", path, "--k", "3", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out.splitlines()[0])
    assert rep["verdict"] == "YES_with_witness" and rep["n"] == 40
    reduced = tmp_path / "r.txt"
    assert main(["kernelize", path, "--k", "9", "--reduced-out", str(reduced)]) == 0
    out = capsys.readouterr().out
    assert "verdict: REDUCED" in out
    assert reduced.read_text().split()[0] == out.split("n_star: ")[1].split()[0]
    assert main(["solve-k", path, "--k", "3", "--kernelize"]) == 0
    cyc = write_instance("cycle", 4, name="c.txt")
    assert main(["kernelize", cyc, "--k", "2"]) == 2
    assert main(["solve-k", cyc, "--k", "2", "--kernelize"]) == 1
    assert "solving directly" in caplog.text


def test_solve_max(write_instance, capsys):
    path = write_instance("out_star", 6)
    assert main(["solve-max", path, "--json", "--no-witness"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["max_leaves"] == 5 and rep["stage_reached"] == 2
    big = write_instance("out_star", 30, name="big.txt")
    assert main(["solve-max", big]) == 2
    assert "max-stage2-n" in capsys.readouterr().err


def test_verify_agreement(write_instance, capsys):
    path = write_instance("gnp_digraph", 8, 0.3, 5)
    assert main(["verify", path]) == 0
    assert "agree: True" in capsys.readouterr().out


def test_gen_and_usage_errors(tmp_path, capsys):
    out = tmp_path / "o.txt"
    assert main(["gen", "cycle", "--n", "4", "-o", str(out)]) == 0
    assert out.read_text().startswith("4 4")
    assert main(["gen", "gnp_digraph", "--n", "4", "--p", "2"]) == 2
    assert main(["solve-k", str(tmp_path / "missing.txt"), "--k", "1"]) == 2
    assert main(["frobnicate"]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("2 1\n0 0\n")
    assert main(["solve-k", str(bad), "--k", "1"]) == 2
    assert "line 2" in capsys.readouterr().err


def test_bench_csv_and_json(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    argv = ["bench", "--kind", "random_single_source_dag", "--n", "8", "--p", "0.2",
            "--seeds", "0-1", "--k", "2,3", "--algos", "A,B,ADML,kernel+B,oracle", "-o", str(out)]
    assert main(argv) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 2 * (2 + 2 + 1 + 2 + 1)
    by = {(r["instance"], r["algorithm"], r["k"]): r for r in rows}
    for inst in {r["instance"] for r in rows}:
        best = int(by[(inst, "oracle", "")]["result"])
        assert int(by[(inst, "ADML", "")]["result"]) == best
        for k in ("2", "3"):
            want = "YES" if best >= int(k) else "NO"
            assert by[(inst, "A", k)]["result"] == by[(inst, "B", k)]["result"] == want
            assert by[(inst, "kernel+B", k)]["result"] == want
    assert main(["bench", "--n", "6", "--seeds", "0", "--k", "2", "--json"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2 and json.loads(lines[0])["algorithm"] == "A"
    assert main(["bench", "--algos", "Z"]) == 2


def test_bench_workers(capsys):
    assert main(["bench", "--n", "7", "--seeds", "0-2", "--k", "2", "--algos", "B", "--workers", "2"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 4

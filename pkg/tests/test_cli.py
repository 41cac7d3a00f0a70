import json
import subprocess
import sys

import pytest

from sunlet import cli
from sunlet.model import psi
from sunlet.verify import run_verify


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_then_infer(tmp_path, capsys):
    fasta = tmp_path / "sim.fa"
    code, _, _ = run(capsys, "--seed", "3", "simulate", "--n", "6", "--length", "20000",
                     "--labeling", "2,6,1,4,3,5", "-o", str(fasta))
    assert code == 0
    meta = json.loads((tmp_path / "sim.fa.json").read_text())
    assert meta["true_labeling"] == [2, 6, 1, 4, 3, 5] and meta["canonical_labeling"] == [2, 5, 3, 4, 1, 6]
    assert meta["labels"] == [f"taxon{k}" for k in range(1, 7)]

    code, out, _ = run(capsys, "infer", str(fasta), "--true-labeling", "2,6,1,4,3,5", "--top-k", "5")
    assert code == 0
    report = json.loads(out)
    assert report["num_labelings"] == 360 and len(report["entries"]) == 5
    assert report["true_rank"] == 1 and report["entries"][0]["labeling"] == [2, 5, 3, 4, 1, 6]


def test_simulate_is_reproducible(tmp_path, capsys):
    _, a, _ = run(capsys, "simulate", "--n", "5", "--length", "300", "--seed", "9")
    _, b, _ = run(capsys, "simulate", "--n", "5", "--length", "300", "--seed", "9")
    _, c, _ = run(capsys, "simulate", "--n", "5", "--length", "300", "--seed", "10")
    assert a == b != c and a.startswith(">taxon1\n")


def test_infer_csv_and_workers(tmp_path, capsys):
    fasta = tmp_path / "sim.fa"
    run(capsys, "simulate", "--n", "6", "--length", "2000", "-o", str(fasta))
    _, one, _ = run(capsys, "infer", str(fasta), "--workers", "1")
    _, two, _ = run(capsys, "--workers", "2", "infer", str(fasta))
    assert one == two
    code, out, _ = run(capsys, "infer", str(fasta), "--format", "csv", "--top-k", "2")
    assert code == 0 and out.splitlines()[0] == "rank,score,labeling" and len(out.splitlines()) == 3


def test_invariants_formats(capsys):
    _, text, _ = run(capsys, "invariants", "--n", "6")
    assert text.splitlines()[0] == "two\t2,3\t4,5" and len(text.splitlines()) == 6
    _, js, _ = run(capsys, "invariants", "--n", "7", "--format", "json")
    assert json.loads(js)["count"] == 21
    _, csv, _ = run(capsys, "invariants", "--n", "5", "--format", "csv")
    assert csv.splitlines() == ["variant,rows,cols", "two,2 3,4 5"]


def test_verify_json_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "verify", "--n-max", "6", "--format", "json", "-o", str(a))[0] == 0
    assert run(capsys, "verify", "--n-max", "6", "--format", "json", "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert "timings" not in json.loads(a.read_text())


def test_verify_failure_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(cli, "run_verify", lambda n, seed: run_verify(n, seed, psi_fn=lambda g, o: 2 * psi(g, o)))
    code, out, _ = run(capsys, "verify", "--n-max", "5")
    assert code == cli.EXIT_VERIFY and "FAIL factorization" in out


def test_complex(capsys):
    code, out, _ = run(capsys, "complex", "--n", "7", "--check-purity", "--check-shelling", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["facets"] == 74 and report["dyck_paths"] == 14
    assert report["purity"]["ok"] and report["shelling"]["search"]["ok"]
    code, out, _ = run(capsys, "complex", "--n", "5", "--facets")
    assert code == 0 and "facet_list:" in out


def test_experiment_small(capsys):
    code, out, _ = run(capsys, "experiment", "--n", "6", "--lengths", "500,2000", "--replicates", "3")
    report = json.loads(out)
    assert code == 0 and [row["length"] for row in report["table"]] == [500, 2000]
    assert "timings" not in report and report["config"]["replicates"] == 3
    _, again, _ = run(capsys, "experiment", "--n", "6", "--lengths", "500,2000", "--replicates", "3")
    assert again == out


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--n", "6"],
        ["nosuch"],
        ["complex", "--n", "13"],
        ["complex", "--n", "9", "--check-shelling"],
        ["verify", "--n-max", "12"],
        ["invariants", "--n", "3"],
        ["simulate", "--n", "6", "--length", "10", "--labeling", "1,2"],
    ],
)
def test_usage_errors(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == cli.EXIT_USAGE


def test_data_errors(tmp_path, capsys):
    assert run(capsys, "infer", str(tmp_path / "missing.fa"))[0] == cli.EXIT_DATA
    ragged = tmp_path / "ragged.fa"
    ragged.write_text(">a\nACGT\n>b\nAC\n>c\nACGT\n>d\nACGT\n")
    code, _, err = run(capsys, "infer", str(ragged))
    assert code == cli.EXIT_DATA and "unequal sequence lengths" in err
    small = tmp_path / "small.fa"
    small.write_text(">a\nACGT\n>b\nACGT\n>c\nACGT\n")
    assert run(capsys, "infer", str(small))[0] == cli.EXIT_DATA
    bad = tmp_path / "params.json"
    bad.write_text("{not json")
    assert run(capsys, "simulate", "--n", "6", "--length", "10", "--params", str(bad))[0] == cli.EXIT_DATA


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sunlet", "invariants", "--n", "5"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "two\t2,3\t4,5\n"

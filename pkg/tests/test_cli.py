import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from fpthresh import experiments as ex
from fpthresh.cli import main, parse_range
from fpthresh.instances import SensingProblem, load_problem, save_problem
from fpthresh.prox import active_threshold, prox_scalar
from fpthresh.selftest import run_oracle_check, run_prox_selftest

HEADER = "experiment,algorithm,m,n,k,sigma,trial,seed,success,rel_sq_error,support_dist,iterations,runtime_ms"


def _data_lines(path):
    return [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]


def _strip_runtime(rows):
    return [{k: v for k, v in r.items() if k != "runtime_ms"} for r in rows]


def test_parse_range():
    assert parse_range("50:370:20")[-1] == 370
    assert len(parse_range("50:370:20")) == 17
    assert parse_range("30,60") == (30, 60)
    assert parse_range("3:5") == (3, 4, 5)


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["sweep-m", "--m-range", "9:1:1"],
        ["solve", "--algorithms", "Lasso"],
        ["sweep-k", "--k-range", "600", "--trials", "1"],
        ["sweep-m", "--trials", "0"],
        ["gen", "--k", "0", "--out", "x.txt"],
    ],
)
def test_invalid_arguments_exit_1(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as e:
        code = e.code
    assert code == 1


def test_gen_and_solve(tmp_path, capsys):
    prob = tmp_path / "p.txt"
    assert main(["gen", "--m", "30", "--n", "60", "--k", "4", "--seed", "3", "--out", str(prob)]) == 0
    p = load_problem(prob)
    assert (p.m, p.n, p.k) == (30, 60, 4)
    out = tmp_path / "r.csv"
    trace = tmp_path / "trace_{alg}.csv"
    argv = ["solve", "--problem", str(prob), "--out", str(out), "--trace-out", str(trace)]
    assert main(argv) == 0
    text = capsys.readouterr().out
    assert "FP-Scheme2" in text and "rel_sq_error" in text
    lines = _data_lines(out)
    assert lines[0] == HEADER and len(lines) == 4
    rows = list(csv.reader(open(tmp_path / "trace_Soft.csv")))
    assert rows[0] == ["iteration", "objective", "step_diff", "lambda"] and len(rows) > 2


def test_solve_zero_measurements(tmp_path, capsys):
    prob = tmp_path / "zero.txt"
    save_problem(SensingProblem(np.eye(3)[:2], np.zeros(2), seed=0, k=0), prob)
    assert main(["solve", "--problem", str(prob), "--algorithms", "FP-Scheme1,FP-Scheme2,Soft,Half"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 4
    assert all("iterations=1 " in ln and "|support|=0" in ln for ln in out)


def test_solve_deterministic(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.csv"
        assert main(["solve", "--m", "40", "--n", "80", "--k", "5", "--seed", "9", "--out", str(out)]) == 0
        outs.append(_strip_runtime(ex.read_records(open(out))))
    assert outs[0] == outs[1]


def test_sweep_m_csv(tmp_path):
    out, agg = tmp_path / "m.csv", tmp_path / "agg.csv"
    argv = [
        "sweep-m", "--n", "64", "--k", "4", "--m-range", "20:40:20", "--trials", "2",
        "--seed", "5", "--out", str(out), "--aggregate-out", str(agg),
    ]
    assert main(argv) == 0
    meta = [ln for ln in out.read_text().splitlines() if ln.startswith("#")]
    assert any("prng" in ln for ln in meta) and any("lambda0=0.5" in ln for ln in meta)
    lines = _data_lines(out)
    assert lines[0] == HEADER
    assert len(lines) - 1 == 2 * 3 * 2
    rows = ex.read_records(open(out))
    keys = [(int(r["m"]), ex.DEFAULT_ALGORITHMS.index(r["algorithm"]), int(r["trial"])) for r in rows]
    assert keys == sorted(keys)
    arows = ex.read_records(open(agg))
    assert len(arows) == 2 * 3
    assert set(arows[0]) == set(ex.AGGREGATE_FIELDS)


def test_sweep_k_deterministic_and_parallel(tmp_path):
    base = ["sweep-k", "--m", "30", "--n", "60", "--k-range", "3,5", "--trials", "2", "--seed", "1"]
    res = []
    for i, jobs in enumerate(["1", "1", "2"]):
        out = tmp_path / f"k{i}.csv"
        assert main(base + ["--jobs", jobs, "--out", str(out)]) == 0
        res.append(_strip_runtime(ex.read_records(open(out))))
    assert res[0] == res[1] == res[2]
    assert len(res[0]) == 2 * 3 * 2


def test_sweep_k_fixed_matrix():
    spec = ex.ExperimentSpec(kind=ex.Kind.SWEEP_K, m=20, n=40, k_range=(2,), trials=2, fixed_matrix=True,
                             algorithms=("Soft",), max_iter=50)
    recs = ex.run_sweep_k(spec)
    assert len(recs) == 2 and recs[0].seed != recs[1].seed


def test_prox_selftest_cli(capsys):
    assert main(["prox-selftest", "--trials", "200"]) == 0
    first = capsys.readouterr().out
    assert main(["prox-selftest", "--trials", "200"]) == 0
    assert capsys.readouterr().out == first
    assert "FAIL" not in first


def test_prox_selftest_detects_shifted_threshold():
    def shifted(x, lam, a):
        return 0.0 if abs(x) <= active_threshold(lam, a) + 1e-3 else prox_scalar(x, lam, a)

    rep = run_prox_selftest(samples=200, oracle_samples=20, prox_fn=shifted)
    assert not rep.ok
    assert any(ln.startswith("FAIL dead zone") for ln in rep.lines())


def test_oracle_check():
    rep = run_oracle_check(trials=2)
    assert rep.ok, rep.lines()


def test_module_entry_point_exit_code():
    r = subprocess.run([sys.executable, "-m", "fpthresh", "sweep-m", "--trials", "0"], capture_output=True)
    assert r.returncode == 1


def test_records_csv_roundtrip():
    rec = ex.ExperimentRecord("single", "Soft", 2, 3, 1, 0.0, 0, 7, 1, 1e-17, 0.0, 4, 0.25)
    text = ex.records_to_csv([rec])
    row = next(csv.DictReader(io.StringIO(text)))
    assert float(row["rel_sq_error"]) == 1e-17 and row["seed"] == "7"


def test_failed_suite_exit_2(monkeypatch, capsys):
    from fpthresh import cli

    def broken(seed, samples):
        return run_prox_selftest(seed=seed, samples=50, oracle_samples=5, prox_fn=lambda x, lam, a: 0.0)

    monkeypatch.setattr(cli, "run_prox_selftest", broken)
    assert main(["prox-selftest"]) == 2
    assert "FAIL" in capsys.readouterr().out

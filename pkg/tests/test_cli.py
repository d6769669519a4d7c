import csv
import io
import subprocess
import sys

import pytest
from conftest import uniform_example

from ostrunc.cli import EXIT_BUDGET, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, build_parser, fmt, run
from ostrunc.problem import benchmark_problem, dump_spec


@pytest.fixture
def spec_path(tmp_path):
    path = tmp_path / "bench.json"
    dump_spec(benchmark_problem(), path)
    return path


@pytest.fixture
def pair_spec(tmp_path):
    path = tmp_path / "pair.json"
    dump_spec(uniform_example(), path)
    return path


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_fmt_round_trips():
    for v in (0.1, 1 / 3, 5.000000000000001, -1e-300, 12345.678):
        assert float(fmt(v)) == v


def test_sample_writes_n_rows(spec_path, tmp_path):
    out = tmp_path / "y.csv"
    code = run(["sample", "--spec", str(spec_path), "--n", "10000", "--seed", "42", "--out", str(out)])
    assert code == EXIT_OK
    rows = _rows(out.read_text())
    assert rows[0] == ["y"]
    assert len(rows) == 10_001
    assert all(3 < float(r[0]) < 8 for r in rows[1:])


def test_sample_to_stdout_with_trace(pair_spec, capsys):
    assert run(["sample", "--spec", str(pair_spec), "--n", "5", "--seed", "1", "--trace"]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["y", "region", "u1", "u2", "uprime1", "uprime2", "x1", "x2"]
    for r in rows[1:]:
        assert r[1] in {"0", "1", "2"}
        assert float(r[0]) == min(float(r[6]), float(r[7]))


def test_sample_rejection_reports_attempts(pair_spec, capsys):
    args = ["sample", "--spec", str(pair_spec), "--n", "20", "--seed", "1",
            "--method", "rejection", "--trace"]
    assert run(args) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert rows[0][-1] == "attempts"
    assert all(r[1] == "" and int(r[-1]) >= 1 for r in rows[1:])


def test_bound_overrides(spec_path, capsys):
    assert run(["sample", "--spec", str(spec_path), "--n", "200", "--seed", "3",
                "--lower", "5", "--upper", "5.5"]) == EXIT_OK
    ys = [float(r[0]) for r in _rows(capsys.readouterr().out)[1:]]
    assert all(5 < y < 5.5 for y in ys)


def test_missing_spec_is_usage_error(tmp_path, capsys):
    code = run(["sample", "--spec", str(tmp_path / "nope.json"), "--n", "3", "--seed", "1"])
    assert code == EXIT_USAGE
    assert "cannot read spec" in capsys.readouterr().err


def test_malformed_spec_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"distributions": [], "k": 1, "bounds": {"lower": 0, "upper": 1}}')
    assert run(["regions", "--spec", str(bad)]) == EXIT_USAGE
    assert "invalid problem" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["sample", "--n", "0", "--seed", "1"],
    ["sample", "--n", "5", "--seed", "-1"],
    ["sample", "--n", "5", "--seed", "1", "--method", "gibbs"],
    ["sample", "--n", "5"],
])
def test_bad_arguments_exit_1(spec_path, argv):
    assert run([argv[0], "--spec", str(spec_path)] + argv[1:]) == EXIT_USAGE


def test_inverted_bounds_exit_1(spec_path, capsys):
    assert run(["sample", "--spec", str(spec_path), "--n", "3", "--seed", "1",
                "--lower", "8", "--upper", "3"]) == EXIT_USAGE


def test_infeasible_exit_2(pair_spec, capsys):
    code = run(["sample", "--spec", str(pair_spec), "--n", "3", "--seed", "1",
                "--lower", "2", "--upper", "3"])
    assert code == EXIT_INFEASIBLE
    assert "P(A<Y<B) = 0" in capsys.readouterr().err


def test_budget_exit_3(spec_path, capsys):
    code = run(["sample", "--spec", str(spec_path), "--n", "5", "--seed", "1",
                "--method", "rejection", "--budget", "10", "--lower", "5", "--upper", "5.0001"])
    assert code == EXIT_BUDGET
    assert "budget" in capsys.readouterr().err


@pytest.mark.parametrize("sub,flags", [
    ("sample", ["--spec", "--n", "--seed", "--method", "--out", "--trace", "--budget",
                "--lower", "--upper"]),
    ("regions", ["--spec", "--out", "--lower", "--upper"]),
    ("cdf", ["--spec", "--at", "--lower", "--upper"]),
    ("validate", ["--spec", "--n", "--seed", "--budget"]),
    ("bench", ["--spec", "--areas", "--ns", "--seed", "--repeats", "--budget", "--out"]),
])
def test_help_lists_flags(sub, flags, capsys):
    assert run([sub, "--help"]) == EXIT_OK
    text = capsys.readouterr().out
    for flag in flags:
        assert flag in text


def test_top_level_help(capsys):
    assert run(["--help"]) == EXIT_OK
    text = capsys.readouterr().out
    for sub in ("sample", "regions", "cdf", "validate", "bench"):
        assert sub in text
    assert build_parser().prog == "ostrunc"


def test_regions_output(pair_spec, capsys):
    assert run(["regions", "--spec", str(pair_spec)]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["index", "assignment", "volume", "fraction", "cumulative"]
    assert [r[1] for r in rows[1:]] == ["MM", "MA", "AM"]
    assert [float(r[2]) for r in rows[1:]] == pytest.approx([0.09, 0.06, 0.06])
    assert float(rows[-1][4]) == 1.0


def test_cdf_output(pair_spec, capsys):
    assert run(["cdf", "--spec", str(pair_spec), "--at", "0.5,0.65,0.8"]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["y", "truncated_cdf"]
    vals = [float(r[1]) for r in rows[1:]]
    assert vals[0] == 0.0
    assert vals[1] == pytest.approx(0.6071429, abs=1e-7)
    assert vals[2] == pytest.approx(1.0, abs=1e-15)


def test_validate_command(spec_path, capsys):
    assert run(["validate", "--spec", str(spec_path), "--n", "10000", "--seed", "7"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert sum(line.startswith("PASS") for line in out) == 6
    assert out[-1] == "ALL GATES PASSED"


def test_bench_command(spec_path, tmp_path, capsys):
    out = tmp_path / "bench.csv"
    code = run(["bench", "--spec", str(spec_path), "--areas", "0.5,0.05", "--ns", "1,10",
                "--seed", "1", "--repeats", "1", "--out", str(out)])
    assert code == EXIT_OK
    rows = _rows(out.read_text())
    assert rows[0] == ["bounds", "pdf_area", "n", "method", "total_s", "per_draw_s",
                       "attempts_mean", "status"]
    assert len(rows) == 1 + 2 * 2 * 2
    assert {r[3] for r in rows[1:]} == {"mapped", "rejection"}
    assert "built in" in capsys.readouterr().err


@pytest.mark.parametrize("method", ["mapped", "rejection"])
def test_outputs_byte_identical_across_processes(spec_path, tmp_path, method):
    outs = []
    for i in range(2):
        out = tmp_path / f"{method}{i}.csv"
        subprocess.run(
            [sys.executable, "-m", "ostrunc", "sample", "--spec", str(spec_path), "--n", "2000",
             "--seed", "42", "--method", method, "--trace", "--out", str(out)],
            check=True,
        )
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert len(outs[0]) > 0

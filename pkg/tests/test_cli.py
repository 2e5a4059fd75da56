import io
import subprocess
import sys

import pytest

from minlen.cli import main
from minlen.report import COLUMNS, read_csv


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_truncated(capsys):
    code, out, err = run(["spectrum", "--deformation", "cutoff", "--alpha0", "0.25", "--levels", "3",
                          "--method", "shooting"], capsys)
    assert code == 0
    table = read_csv(io.StringIO(out))
    assert len(table) == 1
    assert "spectrum truncated" in err
    lines = out.splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert lines[1].startswith("# minlen 0.1.0: minlen spectrum")


def test_spectrum_nystrom(capsys):
    code, out, _ = run(["spectrum", "--deformation", "cutoff", "--alpha0", "5", "--levels", "2",
                        "--method", "nystrom"], capsys)
    assert code == 0
    eps = read_csv(io.StringIO(out)).column("epsilon")
    assert len(eps) == 2 and eps[0] > eps[1]


def test_regime_mismatch_is_usage_error(capsys):
    code, out, err = run(["spectrum", "--deformation", "cutoff", "--alpha0", "0.1", "--levels", "1",
                          "--method", "analytic-strong"], capsys)
    assert code == 1
    assert out == ""
    assert "analytic-strong" in err


@pytest.mark.parametrize("args", [
    ["spectrum", "--alpha0", "-1"],
    ["spectrum", "--alpha0", "1", "--deformation", "nope"],
    ["sweep", "--alpha0-min", "2", "--alpha0-max", "1", "--points", "3"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_one(args, capsys):
    assert main(args) == 1


def test_solver_failure_exit_two(capsys, monkeypatch):
    import minlen.cli as cli
    from minlen.errors import NumericError

    def boom(*a, **k):
        raise NumericError("no convergence")

    monkeypatch.setattr(cli, "run_spectrum", boom)
    code, _, err = run(["spectrum", "--alpha0", "1"], capsys)
    assert code == 2 and "no convergence" in err


def test_unwritable_output_exit_two(capsys, tmp_path):
    code, _, _ = run(["spectrum", "--alpha0", "1", "--out", str(tmp_path / "missing" / "x.csv")], capsys)
    assert code == 2


def test_out_file(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, out, _ = run(["sweep", "--alpha0-min", "0.5", "--alpha0-max", "1", "--points", "2",
                        "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert len(read_csv(path)) == 2


def test_sweep_byte_identical(tmp_path, capsys):
    args = ["sweep", "--deformation", "tan", "--alpha0-min", "0.3", "--alpha0-max", "2", "--points", "3",
            "--log-grid", "--levels", "2"]
    path = tmp_path / "a.csv"
    assert main(args + ["--out", str(path)]) == 0
    first = path.read_bytes()
    assert main(args + ["--out", str(path)]) == 0
    assert path.read_bytes() == first
    _, out1, _ = run(args, capsys)
    _, out2, _ = run(args, capsys)
    assert out1 == out2


def test_compare(capsys):
    code, out, err = run(["compare", "--deformation", "cutoff", "--deformation", "kmm",
                          "--alpha0-min", "0.5", "--alpha0-max", "1", "--points", "2"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("alpha0,eps_min,eps_max,relative_spread")
    assert len(lines) == 4
    assert "ordering violations: 0" in err


def test_kernel_check_cli(capsys):
    code, out, _ = run(["kernel-check", "--terms", "10000", "--grid", "101", "--b", "1"], capsys)
    assert code == 0
    assert "FAIL" not in out


def test_kernel_check_breach(capsys):
    code, out, err = run(["kernel-check", "--terms", "5", "--grid", "21"], capsys)
    assert code == 2
    assert "worst" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "minlen", "spectrum", "--alpha0", "0.1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == ",".join(COLUMNS)

import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minlen.errors import DomainError, NumericError
from minlen.report import (COLUMNS, FAILED, RegimeError, Row, SweepTable, alpha_grid, compare_deformations,
                           emit_csv, kernel_check, read_csv, run_spectrum, sweep_alpha)


def test_run_spectrum_weak_truncates():
    res = run_spectrum("cutoff", 0.25, 3, "shooting")
    assert len(res.table) == 1
    assert res.truncated
    assert "spectrum truncated" in res.status


def test_run_spectrum_nystrom_two_levels():
    res = run_spectrum("cutoff", 5.0, 2, "nystrom")
    eps = res.table.column("epsilon")
    assert len(eps) == 2 and eps[0] > eps[1]


def test_run_spectrum_regime_guard():
    with pytest.raises(RegimeError):
        run_spectrum("cutoff", 0.1, 1, "analytic-strong")
    with pytest.raises(RegimeError):
        run_spectrum("cutoff", 0.5, 1, "analytic-weak")
    with pytest.raises(RegimeError):
        run_spectrum("tan", 0.1, 1, "analytic-weak")
    with pytest.raises(RegimeError):
        run_spectrum("cutoff", 1.0, 1, "magic")


@pytest.mark.parametrize("method, alpha0", [("analytic-weak", 0.1), ("analytic-strong", 2.0), ("wkb", 2.0)])
def test_run_spectrum_closed_forms(method, alpha0):
    res = run_spectrum("cutoff", alpha0, 3, method)
    for row in res.table.rows:
        assert row.epsilon > 0
        assert row.residual < 1e-9


def test_alpha_grid_endpoints():
    for log in (False, True):
        g = alpha_grid(0.25, 5.0, 20, log)
        assert g[0] == 0.25 and g[-1] == 5.0
        assert np.all(np.diff(g) > 0)
    with pytest.raises(DomainError):
        alpha_grid(1.0, 0.5, 3)
    with pytest.raises(DomainError):
        alpha_grid(0.1, 0.5, 1)


def test_sweep_ground_state_increasing():
    table = sweep_alpha("cutoff", 0.05, 3.0, 8, log_grid=True)
    eps = table.column("epsilon")
    assert all(x < y for x, y in zip(eps, eps[1:]))


def test_sweep_two_points_equals_two_runs():
    table = sweep_alpha("kmm", 0.3, 1.7, 2, levels=2)
    rows = run_spectrum("kmm", 0.3, 2).table.rows + run_spectrum("kmm", 1.7, 2).table.rows
    assert table == SweepTable(rows)


def test_sweep_parallel_is_deterministic():
    serial = sweep_alpha("sine", 0.5, 2.0, 3, levels=2)
    parallel = sweep_alpha("sine", 0.5, 2.0, 3, levels=2, jobs=2)
    assert serial == parallel


def test_sweep_records_failures(monkeypatch):
    import minlen.report as report

    real = report.run_spectrum

    def flaky(deformation, alpha0, *args, **kwargs):
        if alpha0 > 1.0:
            raise NumericError("boom")
        return real(deformation, alpha0, *args, **kwargs)

    monkeypatch.setattr(report, "run_spectrum", flaky)
    table = report.sweep_alpha("cutoff", 0.5, 1.5, 2)
    assert [r.failed for r in table.rows] == [False, True]
    assert math.isnan(table.rows[1].epsilon) and table.rows[1].residual == FAILED
    assert table.notes


def test_compare_self_has_zero_spread():
    s = compare_deformations(["tan", "tan"], 0.5, 1.0, 2)
    assert s.max_spread == 0.0
    assert not s.violations


def test_compare_reports_ordering():
    s = compare_deformations(["sine", "cutoff", "kmm", "tan"], 0.3, 3.0, 3)
    assert not s.violations
    for a, lo, hi, spread in s.rows:
        assert hi >= lo > 0 and spread >= 0
    for i in range(3):
        chain = [s.ground[n][i] for n in ("sine", "cutoff", "kmm", "tan")]
        assert chain == sorted(chain, reverse=True)


def test_kernel_check_passes():
    rep = kernel_check(10_000, 101, 1.0)
    assert rep.passed
    assert rep.spectral_error <= 1e-3
    assert rep.boundary_max == 0.0 and rep.symmetry_max == 0.0


def test_kernel_check_flags_breach():
    rep = kernel_check(10, 21, 1.0, tol=1e-3)
    assert not rep.passed


def _row(a, d="cutoff", m="shooting", lv=0, par="even", eps=0.5, res=1e-15):
    return Row(a, d, m, lv, par, eps, res)


def test_emit_empty_table():
    buf = io.StringIO()
    emit_csv(SweepTable(), buf)
    assert buf.getvalue() == ",".join(COLUMNS) + "\n"
    assert read_csv(io.StringIO(buf.getvalue())) == SweepTable()


def test_emit_writes_comment_and_lf(tmp_path):
    path = tmp_path / "t.csv"
    emit_csv(SweepTable([_row(0.1)]), path, "minlen spectrum --alpha0 0.1")
    data = path.read_bytes()
    assert b"\r" not in data
    lines = data.decode("utf-8").splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert lines[1].startswith("# ")
    assert read_csv(path) == SweepTable([_row(0.1)])


finite = st.floats(min_value=1e-300, max_value=1e300, allow_nan=False, allow_infinity=False)


@settings(max_examples=100)
@given(st.lists(st.tuples(finite, st.sampled_from(["cutoff", "kmm", "sine", "tan"]),
                          st.integers(0, 50), finite, finite), max_size=20))
def test_csv_round_trip(records):
    table = SweepTable([Row(a, d, "nystrom", lv, "odd" if lv % 2 else "even", e, r)
                        for a, d, lv, e, r in records])
    buf = io.StringIO()
    emit_csv(table, buf, "comment")
    assert read_csv(io.StringIO(buf.getvalue())) == table


def test_csv_round_trip_failure_row():
    table = SweepTable([_row(0.3, eps=math.nan, res=FAILED)])
    buf = io.StringIO()
    emit_csv(table, buf)
    back = read_csv(io.StringIO(buf.getvalue()))
    assert back == table
    assert back.rows[0].failed


def test_read_rejects_foreign_header():
    with pytest.raises(ValueError):
        read_csv(io.StringIO("a,b\n1,2\n"))

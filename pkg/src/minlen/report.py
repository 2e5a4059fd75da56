"""Spectrum runs, coupling sweeps, deformation comparisons and CSV I/O."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .deformations import DEFORMATIONS, builtin_deformation, kinetic_profile
from .errors import DomainError, NumericError
from .kernel import green_check, kernel_closed, nystrom_matrix, nystrom_spectrum, spectral_convergence
from .levels import Method, Parity
from .shooting import ShootingConfig, find_level, spectrum as shooting_spectrum

__all__ = [
    "COLUMNS",
    "METHODS",
    "Row",
    "SweepTable",
    "RegimeError",
    "RunResult",
    "run_spectrum",
    "alpha_grid",
    "sweep_alpha",
    "CompareSummary",
    "compare_deformations",
    "KernelReport",
    "kernel_check",
    "emit_csv",
    "read_csv",
    "emit_compare_csv",
]

COLUMNS = ("alpha0", "deformation", "method", "level", "parity", "epsilon", "residual")
METHODS = tuple(m.value for m in Method)
# a row whose solver failed carries NaN energy and this residual
FAILED = math.inf
RESIDUAL_LIMIT = 1e-6


class RegimeError(DomainError):
    """The requested method does not apply to this deformation/coupling."""


@dataclass(frozen=True)
class Row:
    alpha0: float
    deformation: str
    method: str
    level: int
    parity: str
    epsilon: float
    residual: float

    @property
    def failed(self) -> bool:
        return self.residual == FAILED

    def sort_key(self):
        return (self.deformation, self.method, self.alpha0, self.level)

    def same_as(self, other: "Row") -> bool:
        """Field-wise equality that treats NaN energies of failed rows as equal."""
        for name in COLUMNS:
            x, y = getattr(self, name), getattr(other, name)
            if isinstance(x, float) and math.isnan(x) and isinstance(y, float) and math.isnan(y):
                continue
            if x != y:
                return False
        return True


@dataclass
class SweepTable:
    rows: list[Row] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def sorted(self) -> "SweepTable":
        return SweepTable(sorted(self.rows, key=Row.sort_key), list(self.notes))

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, SweepTable) or len(self.rows) != len(other.rows):
            return NotImplemented if not isinstance(other, SweepTable) else False
        return all(a.same_as(b) for a, b in zip(self.rows, other.rows))

    def column(self, name):
        return [getattr(r, name) for r in self.rows]


@dataclass(frozen=True)
class RunResult:
    table: SweepTable
    truncated: bool = False
    status: str = "complete"


def _check_regime(deformation: str, alpha0: float, method: str):
    if method not in METHODS:
        raise RegimeError(f"unknown method {method!r}; valid: {', '.join(METHODS)}")
    builtin_deformation(deformation)
    if not alpha0 > 0:
        raise RegimeError(f"alpha0 must be positive, got {alpha0}")
    if method == Method.ANALYTIC_WEAK.value:
        if deformation != "cutoff" or not alpha0 < analytic.CRITICAL_COUPLING:
            raise RegimeError("analytic-weak applies to the cutoff deformation with alpha0 < 1/4")
    elif method == Method.ANALYTIC_STRONG.value:
        if deformation != "cutoff" or not alpha0 > analytic.CRITICAL_COUPLING:
            raise RegimeError("analytic-strong applies to the cutoff deformation with alpha0 > 1/4")


def run_spectrum(deformation: str, alpha0: float, levels: int = 1, method: str = "shooting", *,
                 tol: float = 1e-12, nystrom_nodes: int = 800, delta: float = 0.0) -> RunResult:
    """Compute up to ``levels`` bound states with one method.

    Raises RegimeError for an inapplicable method and NumericError when a
    solver fails or returns a residual above ``RESIDUAL_LIMIT``.
    """
    method = Method(method).value if method in METHODS else method
    _check_regime(deformation, alpha0, method)
    if int(levels) != levels or levels < 1:
        raise RegimeError(f"levels must be a positive integer, got {levels}")
    levels = int(levels)
    spec = builtin_deformation(deformation)
    out: list[tuple[int, str, float, float]] = []
    status = "complete"

    if method == Method.SHOOTING.value:
        res = shooting_spectrum(spec, alpha0, levels, ShootingConfig(root_tol_log_eps=tol))
        out = [(lv.index, lv.parity.value, lv.epsilon, lv.residual) for lv in res]
        status = res.status
    elif method == Method.NYSTROM.value:
        disc = nystrom_matrix(spec, alpha0, nystrom_nodes)
        found = nystrom_spectrum(disc, levels)
        out = [(lv.index, lv.parity.value, lv.epsilon, lv.residual) for lv in found]
    elif method == Method.ANALYTIC_WEAK.value:
        eps = analytic.eps0_weak(alpha0)
        out = [(0, Parity.EVEN.value, eps, analytic.weak_residual(alpha0, eps))]
    elif method == Method.ANALYTIC_STRONG.value:
        for i, (eps, par) in enumerate(analytic.merged_strong_levels(alpha0, levels)):
            out.append((i, par.value, eps, analytic.strong_residual(alpha0, eps, par)))
    else:
        cfg = analytic.WkbConfig(delta=delta)
        for i, eps in enumerate(analytic.wkb_levels(spec, alpha0, cfg, levels)):
            if not eps > 0:
                break
            resid = abs(analytic.wkb_integral(spec, alpha0, eps) - math.pi * cfg.quantum(i))
            out.append((i, Parity.of_index(i).value, eps, resid))

    if len(out) < levels and status == "complete":
        status = f"spectrum truncated: {len(out)} of {levels} levels found"
    for idx, _, eps, resid in out:
        if not (eps > 0 and resid <= RESIDUAL_LIMIT):
            raise NumericError(f"level {idx}: unconverged value eps={eps!r} residual={resid!r}")
    rows = [Row(float(alpha0), deformation, method, idx, par, float(eps), float(resid))
            for idx, par, eps, resid in out]
    truncated = status != "complete"
    table = SweepTable(rows, [status] if truncated else [])
    return RunResult(table.sorted(), truncated, status)


def alpha_grid(alpha_min: float, alpha_max: float, points: int, log: bool = False) -> np.ndarray:
    """Linear or logarithmic coupling grid whose endpoints are exact."""
    if not 0 < alpha_min < alpha_max:
        raise DomainError(f"need 0 < alpha0_min < alpha0_max, got {alpha_min}, {alpha_max}")
    if int(points) != points or points < 2:
        raise DomainError(f"need at least 2 grid points, got {points}")
    grid = np.geomspace(alpha_min, alpha_max, int(points)) if log else np.linspace(alpha_min, alpha_max, int(points))
    grid[0] = alpha_min
    grid[-1] = alpha_max
    return grid


def _sweep_point(args):
    deformation, alpha0, levels, method, kwargs = args
    try:
        return run_spectrum(deformation, alpha0, levels, method, **kwargs).table.rows, None
    except NumericError as exc:
        row = Row(float(alpha0), deformation, method, 0, Parity.EVEN.value, math.nan, FAILED)
        return [row], f"alpha0={alpha0!r}: {exc}"


def sweep_alpha(deformation: str, alpha_min: float, alpha_max: float, points: int, *,
                log_grid: bool = False, levels: int = 1, method: str = "shooting", jobs: int = 1,
                **kwargs) -> SweepTable:
    """Run :func:`run_spectrum` over a coupling grid.

    A failing point becomes a single row with NaN energy and infinite
    residual; the sweep carries on.  Points may run in ``jobs`` worker
    processes; the output order depends only on the sort key.
    """
    grid = alpha_grid(alpha_min, alpha_max, points, log_grid)
    for a in (grid[0], grid[-1]):
        _check_regime(deformation, float(a), method)
    tasks = [(deformation, float(a), levels, method, kwargs) for a in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=int(jobs)) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    table = SweepTable()
    for rows, note in results:
        table.rows.extend(rows)
        if note:
            table.notes.append(note)
    return table.sorted()


def _pointwise_order(names, samples: int = 4001):
    """Pairs (lo, hi) with G_lo <= G_hi everywhere on (0, 1)."""
    y = np.linspace(0.0, 1.0, samples)[1:-1]
    prof = {n: np.asarray(kinetic_profile(builtin_deformation(n), y)) for n in names}
    pairs = []
    for a in names:
        for b in names:
            if a != b and np.all(prof[a] <= prof[b]) and np.any(prof[a] < prof[b]):
                pairs.append((a, b))
    return pairs


@dataclass
class CompareSummary:
    """Ground-state energies per coupling across deformations.

    ``rows`` hold (alpha0, eps_min, eps_max, relative_spread);
    ``violations`` list (alpha0, lower-G name, higher-G name) where the
    smaller kinetic profile failed to give the deeper level.
    """

    deformations: list[str]
    rows: list[tuple[float, float, float, float]] = field(default_factory=list)
    ground: dict[str, list[float]] = field(default_factory=dict)
    violations: list[tuple[float, str, str]] = field(default_factory=list)

    @property
    def max_spread(self) -> float:
        return max((r[3] for r in self.rows), default=0.0)


def compare_deformations(names, alpha_min: float, alpha_max: float, points: int, *,
                         log_grid: bool = True, tol: float = 1e-12) -> CompareSummary:
    """Ground-state spread across deformations by shooting.

    Also checks the ordering implied by pointwise-ordered kinetic profiles:
    G_a <= G_b on (0, 1) must give eps_a >= eps_b.
    """
    names = list(names)
    if len(names) < 2:
        raise DomainError("comparison needs at least two deformations")
    for n in names:
        builtin_deformation(n)
    grid = alpha_grid(alpha_min, alpha_max, points, log_grid)
    cfg = ShootingConfig(root_tol_log_eps=tol)
    pairs = _pointwise_order(sorted(set(names)))
    summary = CompareSummary(names, ground={n: [] for n in names})

    for a in grid:
        eps = {}
        for n in names:
            if n not in eps:
                eps[n] = find_level(builtin_deformation(n), float(a), 0, cfg).epsilon
            summary.ground[n].append(eps[n])
        vals = [eps[n] for n in names]
        lo, hi = min(vals), max(vals)
        summary.rows.append((float(a), lo, hi, (hi - lo) / lo))
        for small, large in pairs:
            if eps[small] < eps[large]:
                summary.violations.append((float(a), small, large))
    return summary


@dataclass(frozen=True)
class KernelReport:
    terms: int
    grid: int
    b: float
    spectral_error: float
    spectral_worst: tuple[float, float]
    boundary_max: float
    symmetry_max: float
    green_error: float
    green_h: float
    tol: float

    @property
    def green_tol(self) -> float:
        return 5.0 * self.green_h

    @property
    def passed(self) -> bool:
        return (self.spectral_error <= self.tol and self.boundary_max == 0.0
                and self.symmetry_max == 0.0 and self.green_error <= self.green_tol)

    def lines(self):
        p, q = self.spectral_worst
        return [
            f"terms={self.terms} grid={self.grid} b={self.b!r}",
            f"spectral_vs_closed_max={self.spectral_error:.6e} at p={p!r} q={q!r} tol={self.tol:g} "
            f"{'PASS' if self.spectral_error <= self.tol else 'FAIL'}",
            f"boundary_max={self.boundary_max:.6e} {'PASS' if self.boundary_max == 0.0 else 'FAIL'}",
            f"symmetry_max={self.symmetry_max:.6e} {'PASS' if self.symmetry_max == 0.0 else 'FAIL'}",
            f"green_max_deviation={self.green_error:.6e} h={self.green_h:.6e} tol={self.green_tol:.6e} "
            f"{'PASS' if self.green_error <= self.green_tol else 'FAIL'}",
        ]


def kernel_check(terms: int = 10_000, grid: int = 101, b: float = 1.0, tol: float = 1e-3) -> KernelReport:
    """Spectral-vs-closed convergence, wall annihilation, symmetry and Green's property."""
    if int(terms) != terms or terms < 1:
        raise DomainError(f"terms must be a positive integer, got {terms}")
    if int(grid) != grid or grid < 3:
        raise DomainError(f"grid must be an integer >= 3, got {grid}")
    err, worst = spectral_convergence(b, int(grid), int(terms))
    p = np.linspace(-b, b, int(grid))
    K = kernel_closed(b, p[:, None], p[None, :])
    boundary = float(max(np.max(np.abs(K[0])), np.max(np.abs(K[-1])),
                         np.max(np.abs(K[:, 0])), np.max(np.abs(K[:, -1]))))
    symmetry = float(np.max(np.abs(K - K.T)))
    g_err, h, _ = green_check(b, int(grid))
    return KernelReport(int(terms), int(grid), float(b), err, worst, boundary, symmetry, g_err, h, float(tol))


def _fmt(x: float) -> str:
    return "%.17g" % x


def emit_csv(table: SweepTable, destination, comment: str | None = None) -> None:
    """Write ``table`` as CSV (17 significant digits, LF line endings).

    ``destination`` is a path or a text stream.  ``comment`` becomes a
    ``#``-prefixed line right after the header.
    """
    if isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__"):
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            emit_csv(table, fh, comment)
        return
    writer = csv.writer(destination, lineterminator="\n")
    writer.writerow(COLUMNS)
    if comment is not None:
        destination.write("# " + comment.replace("\n", " ") + "\n")
    for r in table.rows:
        writer.writerow([_fmt(r.alpha0), r.deformation, r.method, r.level, r.parity,
                         _fmt(r.epsilon), _fmt(r.residual)])


def read_csv(source) -> SweepTable:
    """Parse CSV written by :func:`emit_csv`; comment lines are skipped."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8", newline="") as fh:
            return read_csv(fh)
    lines = [ln for ln in source if not ln.startswith("#")]
    reader = csv.reader(io.StringIO("".join(lines)))
    header = next(reader, None)
    if header is None:
        return SweepTable()
    if tuple(header) != COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    rows = []
    for rec in reader:
        if not rec:
            continue
        a, d, m, lv, par, eps, res = rec
        rows.append(Row(float(a), d, m, int(lv), par, float(eps), float(res)))
    return SweepTable(rows)


def emit_compare_csv(summary: CompareSummary, destination, comment: str | None = None) -> None:
    writer = csv.writer(destination, lineterminator="\n")
    writer.writerow(["alpha0", "eps_min", "eps_max", "relative_spread"] + [f"eps_{n}" for n in summary.deformations])
    if comment is not None:
        destination.write("# " + comment.replace("\n", " ") + "\n")
    for i, (a, lo, hi, spread) in enumerate(summary.rows):
        writer.writerow([_fmt(a), _fmt(lo), _fmt(hi), _fmt(spread)]
                        + [_fmt(summary.ground[n][i]) for n in summary.deformations])


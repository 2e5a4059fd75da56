"""Parity-separated shooting for (G(y) + eps) f''(y) = -alpha0 f(y), f(+-1) = 0.

f is the transform (G + eps) psi of the momentum wavefunction.  The ODE is
integrated from y = 0 with even or odd initial data in the stretched
variable y = sqrt(eps) sinh(t), which makes the region |y| ~ sqrt(eps)
where weakly bound states oscillate occupy O(1) of the t-range.  With
v = sqrt(eps) df/dy the system reads

    df/dt = v cosh t,    dv/dt = -eps c(y) f cosh t,    c = alpha0 / (G + eps).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .deformations import DeformationSpec, coupling_coefficient
from .errors import BracketExhausted, DomainError, NoBoundState, NumericError
from .levels import EigenLevel, Method, Parity

__all__ = [
    "ShootingConfig",
    "ShootSolution",
    "SpectrumResult",
    "integrate_halfline",
    "find_level",
    "spectrum",
]


@dataclass(frozen=True)
class ShootingConfig:
    ode_rel_tol: float = 1e-12
    root_tol_log_eps: float = 1e-12
    eps_floor: float = 1e-12
    max_bracket_expansions: int = 60

    def __post_init__(self):
        for name in ("ode_rel_tol", "root_tol_log_eps", "eps_floor", "max_bracket_expansions"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")


DEFAULT_CONFIG = ShootingConfig()


@dataclass(frozen=True)
class ShootSolution:
    """Result of one shot: f(1), the number of zeros of f on (0, 1) and,
    optionally, samples (y, f(y)) for the initial data f(0) = 1, f'(0) = 0
    (even) or f(0) = 0, f'(0) = 1 (odd)."""

    boundary_value: float
    node_count: int
    samples: np.ndarray | None = None


def _sign_changes(f):
    nz = f[f != 0.0]
    if nz.size < 2:
        return 0
    return int(np.count_nonzero(np.signbit(nz[1:]) != np.signbit(nz[:-1])))


def integrate_halfline(spec: DeformationSpec, alpha0: float, epsilon: float, parity,
                       cfg: ShootingConfig = DEFAULT_CONFIG, keep_samples: bool = False) -> ShootSolution:
    """Integrate from y = 0 to y = 1 and report f(1) and the node count.

    ``alpha0 = 0`` is accepted (f is then linear); every other solver
    requires a positive coupling.
    """
    parity = Parity(parity)
    if not alpha0 >= 0:
        raise DomainError(f"alpha0 must be non-negative, got {alpha0}")
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    s = math.sqrt(epsilon)
    t_end = math.asinh(1.0 / s)

    def rhs(t, state):
        ch = math.cosh(t)
        y = min(s * math.sinh(t), 1.0)
        c = coupling_coefficient(spec, alpha0, epsilon, y)
        return (state[1] * ch, -epsilon * c * state[0] * ch)

    # odd data is started with v = 1, i.e. f'(0) = 1/s, and rescaled below
    y0 = (1.0, 0.0) if parity is Parity.EVEN else (0.0, 1.0)
    sol = solve_ivp(rhs, (0.0, t_end), y0, method="DOP853",
                    rtol=cfg.ode_rel_tol, atol=1e-14 * cfg.ode_rel_tol / 1e-12)
    if sol.status != 0:
        t_fail = sol.t[-1] if sol.t.size else 0.0
        raise NumericError(f"ODE integration failed at y = {min(s * math.sinh(t_fail), 1.0):.6g}: {sol.message}")
    f = sol.y[0]
    if parity is Parity.ODD:
        f = f * s
    nodes = _sign_changes(f[1:])
    samples = None
    if keep_samples:
        ys = np.minimum(s * np.sinh(sol.t), 1.0)
        samples = np.column_stack([ys, f])
    return ShootSolution(float(f[-1]), nodes, samples)


@dataclass(frozen=True)
class _Shot:
    log_eps: float
    value: float
    nodes: int


def _strong_regime(spec: DeformationSpec, alpha0: float) -> bool:
    return alpha0 > 0.25 * spec.curvature


def find_level(spec: DeformationSpec, alpha0: float, index: int,
               cfg: ShootingConfig = DEFAULT_CONFIG, keep_samples: bool = False) -> EigenLevel:
    """Locate the level with global number ``index`` (0 = ground state).

    Even indices live in the even channel, odd ones in the odd channel; the
    level with channel number m = index // 2 is where the node count drops
    from m + 1 to m as eps increases.  The count is bisected in ln eps and
    the sign change of f(1) is then polished with Brent's method.

    Raises NoBoundState when the level does not exist and BracketExhausted
    when it would lie below ``cfg.eps_floor``.
    """
    if not alpha0 > 0:
        raise DomainError(f"alpha0 must be positive, got {alpha0}")
    if int(index) != index or index < 0:
        raise DomainError(f"level index must be a non-negative integer, got {index}")
    index = int(index)
    parity = Parity.of_index(index)
    m = index // 2

    def shoot(log_eps):
        sol = integrate_halfline(spec, alpha0, math.exp(log_eps), parity, cfg)
        return _Shot(log_eps, sol.boundary_value, sol.node_count)

    lo = shoot(math.log(cfg.eps_floor))
    if lo.nodes <= m:
        if _strong_regime(spec, alpha0):
            raise BracketExhausted(
                f"level {index} of {spec.name} at alpha0={alpha0} lies below eps_floor={cfg.eps_floor:g}")
        raise NoBoundState(f"{spec.name} at alpha0={alpha0} has no level {index}")

    hi = shoot(math.log(max(1.0, 10.0 * 4.0 * alpha0 / math.pi**2)))
    for _ in range(cfg.max_bracket_expansions):
        if hi.nodes <= m:
            break
        hi = shoot(hi.log_eps + math.log(10.0))
    else:
        raise NumericError(f"could not bracket level {index} from above")

    for _ in range(400):
        if lo.nodes == m + 1 and hi.nodes == m and lo.value * hi.value < 0:
            break
        if hi.log_eps - lo.log_eps < cfg.root_tol_log_eps:
            raise NumericError(f"node-count bisection collapsed without a sign change for level {index}")
        mid = shoot(0.5 * (lo.log_eps + hi.log_eps))
        if mid.nodes <= m:
            hi = mid
        else:
            lo = mid

    root = brentq(lambda le: integrate_halfline(spec, alpha0, math.exp(le), parity, cfg).boundary_value,
                  lo.log_eps, hi.log_eps, xtol=cfg.root_tol_log_eps, rtol=4 * np.finfo(float).eps)
    eps = math.exp(root)
    sol = integrate_halfline(spec, alpha0, eps, parity, cfg, keep_samples=True)
    scale = float(np.max(np.abs(sol.samples[:, 1])))
    # count the node the root is converging onto only once
    nodes = min(sol.node_count, m)
    return EigenLevel(eps, parity, index, nodes, Method.SHOOTING, abs(sol.boundary_value) / scale)


def eigenfunction(spec: DeformationSpec, alpha0: float, level: EigenLevel,
                  cfg: ShootingConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Samples (y, f(y)) on [0, 1] with unit max-norm and positive start."""
    sol = integrate_halfline(spec, alpha0, level.epsilon, level.parity, cfg, keep_samples=True)
    ys = sol.samples
    return np.column_stack([ys[:, 0], ys[:, 1] / np.max(np.abs(ys[:, 1]))])


@dataclass(frozen=True)
class SpectrumResult:
    """Levels found in order, plus why the list stopped short, if it did."""

    levels: list
    truncated: bool = False
    status: str = "complete"

    def __iter__(self):
        return iter(self.levels)

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]


def spectrum(spec: DeformationSpec, alpha0: float, k: int,
             cfg: ShootingConfig = DEFAULT_CONFIG) -> SpectrumResult:
    """Levels 0..k-1, stopping at the first level that does not exist."""
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    levels = []
    for index in range(int(k)):
        try:
            levels.append(find_level(spec, alpha0, index, cfg))
        except (NoBoundState, BracketExhausted) as exc:
            return SpectrumResult(levels, True, f"spectrum truncated: {exc}")
    return SpectrumResult(levels)

"""Closed forms for the cutoff deformation G(y) = y^2 and the WKB spectrum.

For G = y^2 the even and odd solutions are hypergeometric and the levels
are the zeros of

    even: 2F1(a, b; 1/2; -1/eps),    odd: 2F1(a + 1/2, b + 1/2; 3/2; -1/eps),

with a, b = 3/4 +- kappa/2 and kappa = sqrt(1/4 - alpha0).  The 1/z
connection formula gives small-eps approximations: a single level for
alpha0 < 1/4 and two geometric towers for alpha0 > 1/4.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .deformations import DeformationSpec, builtin_deformation, coupling_coefficient
from .errors import DomainError, NumericError
from .levels import Parity
from .special import gamma_ratio, hyp2f1

__all__ = [
    "AnalyticCutoffParams",
    "cutoff_params",
    "cutoff_condition",
    "cutoff_condition_roots",
    "eps0_weak",
    "strong_branches",
    "merged_strong_levels",
    "WkbConfig",
    "wkb_integral",
    "wkb_levels_cutoff",
    "wkb_levels",
    "wkb_asymptotic",
]

CRITICAL_COUPLING = 0.25


@dataclass(frozen=True)
class AnalyticCutoffParams:
    """Hypergeometric parameters for the cutoff deformation.

    The Gamma-ratio coefficients are ``None`` at alpha0 = 1/4, where a = b
    and the connection formula degenerates.
    """

    alpha0: float
    kappa: complex
    a: complex
    b: complex
    c: float = 0.5
    C1: complex | None = None
    C2: complex | None = None
    A: complex | None = None
    B: complex | None = None

    @property
    def nu(self) -> float:
        return self.kappa.imag

    @property
    def strong(self) -> bool:
        return self.alpha0 > CRITICAL_COUPLING


def cutoff_params(alpha0: float) -> AnalyticCutoffParams:
    if not alpha0 > 0:
        raise DomainError(f"alpha0 must be positive, got {alpha0}")
    kappa = cmath.sqrt(CRITICAL_COUPLING - alpha0)
    if alpha0 > CRITICAL_COUPLING:
        kappa = complex(0.0, math.sqrt(alpha0 - CRITICAL_COUPLING))
    a = 0.75 + kappa / 2
    b = 0.75 - kappa / 2
    c = 0.5
    if kappa == 0:
        return AnalyticCutoffParams(alpha0, kappa, a, b, c)
    C1 = gamma_ratio((c, b - a), (b, c - a))
    C2 = gamma_ratio((c, a - b), (a, c - b))
    A = gamma_ratio((a - b,), (a, c - b))
    B = gamma_ratio((a - b,), (a + 0.5, c - b + 0.5))
    return AnalyticCutoffParams(alpha0, kappa, a, b, c, C1, C2, A, B)


def cutoff_condition(parity, alpha0: float, epsilon: float) -> float:
    """Left side of the even/odd quantisation condition at -1/eps (real)."""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    p = cutoff_params(alpha0)
    if Parity(parity) is Parity.EVEN:
        val = hyp2f1(p.a, p.b, 0.5, -1.0 / epsilon)
    else:
        val = hyp2f1(p.a + 0.5, p.b + 0.5, 1.5, -1.0 / epsilon)
    if abs(val.imag) > 1e-10 * max(1.0, abs(val)):
        raise NumericError(f"quantisation condition not real: {val}")
    return val.real


def cutoff_condition_roots(parity, alpha0: float, eps_min: float = 1e-10, eps_max: float = 1e3,
                           points: int = 400) -> list[float]:
    """All sign changes of :func:`cutoff_condition` on a log grid, polished."""
    grid = np.geomspace(eps_min, eps_max, int(points))
    vals = [cutoff_condition(parity, alpha0, e) for e in grid]
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0:
            r = brentq(lambda le: cutoff_condition(parity, alpha0, math.exp(le)),
                       math.log(grid[i]), math.log(grid[i + 1]), xtol=1e-14, rtol=1e-15)
            roots.append(math.exp(r))
    return sorted(roots, reverse=True)


def eps0_weak(alpha0: float) -> float:
    """Small-eps ground level for 0 < alpha0 < 1/4.

    Keeping only the leading terms, C1 eps^a + C2 eps^b = 0, hence
    eps0 = (-C2/C1)^(1/kappa).
    """
    if not 0 < alpha0 < CRITICAL_COUPLING:
        raise DomainError(f"weak-coupling formula needs 0 < alpha0 < 1/4, got {alpha0}")
    p = cutoff_params(alpha0)
    ratio = -p.C2 / p.C1
    if abs(ratio.imag) > 1e-12 * abs(ratio) or ratio.real <= 0:
        raise NumericError(f"coefficient ratio is not positive real: {ratio}")
    return math.exp(math.log(ratio.real) / p.kappa.real)


def weak_residual(alpha0: float, epsilon: float) -> float:
    """|C1 eps^a + C2 eps^b| / |C1 eps^a|, the truncated condition's residual."""
    p = cutoff_params(alpha0)
    t1 = p.C1 * epsilon**p.a
    return abs(t1 + p.C2 * epsilon**p.b) / abs(t1)


def strong_branches(alpha0: float, count: int) -> tuple[list[float], list[float]]:
    """Even and odd geometric towers for alpha0 > 1/4.

    eps_n = exp((2/nu) [arg A - (n + 1/2) pi]) (even), same with B (odd);
    arg on the principal branch (-pi, pi].
    """
    if not alpha0 > CRITICAL_COUPLING:
        raise DomainError(f"strong-coupling branches need alpha0 > 1/4, got {alpha0}")
    if int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count}")
    p = cutoff_params(alpha0)
    nu = p.nu
    argA = cmath.phase(p.A)
    argB = cmath.phase(p.B)
    even = [math.exp(2.0 / nu * (argA - (n + 0.5) * math.pi)) for n in range(int(count))]
    odd = [math.exp(2.0 / nu * (argB - (m + 0.5) * math.pi)) for m in range(int(count))]
    return even, odd


def strong_residual(alpha0: float, epsilon: float, parity) -> float:
    """|cos(-nu/2 ln eps + arg A|B)| at eps."""
    p = cutoff_params(alpha0)
    arg = cmath.phase(p.A if Parity(parity) is Parity.EVEN else p.B)
    return abs(math.cos(-0.5 * p.nu * math.log(epsilon) + arg))


def merged_strong_levels(alpha0: float, count: int) -> list[tuple[float, Parity]]:
    """The ``count`` highest strong-coupling levels, both towers, descending."""
    even, odd = strong_branches(alpha0, count)
    merged = [(e, Parity.EVEN) for e in even] + [(e, Parity.ODD) for e in odd]
    merged.sort(key=lambda item: -item[0])
    return merged[:int(count)]


@dataclass(frozen=True)
class WkbConfig:
    """Bohr-Sommerfeld constants: quantum number n = level + index_offset."""

    delta: float = 0.0
    index_offset: int = 1

    def __post_init__(self):
        if not 0 <= self.delta < 1:
            raise DomainError(f"delta must lie in [0, 1), got {self.delta}")
        if not self.delta + self.index_offset > 0:
            raise DomainError("delta + index_offset must be positive")

    def quantum(self, level: int) -> float:
        return level + self.index_offset + self.delta


def wkb_integral(spec: DeformationSpec, alpha0: float, epsilon: float) -> float:
    """int_{-1}^{1} sqrt(alpha0) / sqrt(G(y) + eps) dy.

    Computed as 2 * int_0^T sqrt(alpha0 eps) cosh t / sqrt(G + eps) dt after
    y = sqrt(eps) sinh t, so the integrand is bounded (constant for the
    cutoff profile) however small eps is.  For profiles other than the
    cutoff this is an extension of the semiclassical rule.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if not alpha0 >= 0:
        raise DomainError(f"alpha0 must be non-negative, got {alpha0}")
    s = math.sqrt(epsilon)
    t_end = math.asinh(1.0 / s)

    def integrand(t):
        y = min(s * math.sinh(t), 1.0)
        c = coupling_coefficient(spec, 1.0, epsilon, y)
        return s * math.cosh(t) * math.sqrt(c)

    val, err = quad(integrand, 0.0, t_end, epsabs=1e-15, epsrel=1e-13, limit=200)
    if not math.isfinite(val) or err > 1e-9 * max(1.0, abs(val)):
        raise NumericError(f"WKB quadrature failed (estimate {val}, error {err})")
    return 2.0 * math.sqrt(alpha0) * val


def wkb_levels_cutoff(alpha0: float, cfg: WkbConfig = WkbConfig(), count: int = 1) -> list[float]:
    """eps_n = 4 e^theta / (e^theta - 1)^2 = 1 / sinh^2(theta/2),
    theta = pi (n + delta) / sqrt(alpha0), for successive quantum numbers n."""
    if not alpha0 > 0:
        raise DomainError(f"alpha0 must be positive, got {alpha0}")
    out = []
    for k in range(int(count)):
        theta = math.pi * cfg.quantum(k) / math.sqrt(alpha0)
        if theta == 0:
            raise DomainError("theta = 0: WKB level diverges")
        out.append(1.0 / math.sinh(0.5 * theta) ** 2)
    return out


def wkb_levels(spec: DeformationSpec, alpha0: float, cfg: WkbConfig = WkbConfig(),
               count: int = 1) -> list[float]:
    """Semiclassical levels for any registry profile.

    Uses the closed form for the cutoff and root-finds the phase integral
    otherwise.
    """
    if spec.name == "cutoff":
        return wkb_levels_cutoff(alpha0, cfg, count)
    if not alpha0 > 0:
        raise DomainError(f"alpha0 must be positive, got {alpha0}")
    out = []
    for k in range(int(count)):
        target = math.pi * cfg.quantum(k)

        def phase(le):
            return wkb_integral(spec, alpha0, math.exp(le)) - target

        hi = math.log(max(1.0, alpha0))
        while phase(hi) > 0:
            hi += math.log(10.0)
        lo = hi - math.log(10.0)
        while phase(lo) < 0:
            lo -= math.log(10.0)
            if lo < math.log(1e-300):
                raise NumericError("WKB level below representable energies")
        out.append(math.exp(brentq(phase, lo, hi, xtol=1e-14, rtol=1e-15)))
    return out


def wkb_asymptotic(alpha0: float, cfg: WkbConfig = WkbConfig(), n: int = 1) -> float:
    """Large-coupling limit 4 alpha0 / (pi^2 (n + delta)^2)."""
    if not alpha0 > 0:
        raise DomainError(f"alpha0 must be positive, got {alpha0}")
    q = n + cfg.delta
    if not q > 0:
        raise DomainError("n + delta must be positive")
    return 4.0 * alpha0 / (math.pi**2 * q * q)


CUTOFF = builtin_deformation("cutoff")

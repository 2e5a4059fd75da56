"""Deformation registry and the scaled kinetic profile G(y) = g(by)^2 / b^2.

Every solver in the package works with dimensionless quantities
(hbar = m = 1): y = p/b in [-1, 1], eps = -2 m E / b^2, alpha0 = 2 m alpha / hbar^2.
Physical energies follow from E = -eps * b**2 / (2 * m); that conversion is
never applied internally.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, UnknownDeformation

__all__ = [
    "UnitConventions",
    "DeformationSpec",
    "DEFORMATIONS",
    "builtin_deformation",
    "kinetic_profile",
    "coupling_coefficient",
    "minimal_length",
]


@dataclass(frozen=True)
class UnitConventions:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if self.hbar != 1.0 or self.mass != 1.0:
            raise DomainError("only hbar = m = 1 units are supported")

    def energy(self, epsilon: float, b: float) -> float:
        """Physical energy E = -eps b^2 / (2m) of a dimensionless level."""
        return -epsilon * b * b / (2.0 * self.mass)


UNITS = UnitConventions()


@dataclass(frozen=True)
class DeformationSpec:
    """A named deformation of the Heisenberg algebra.

    ``G`` maps y in [-1, 1] to the scaled kinetic energy; it is vectorised
    over numpy arrays.  ``beta`` is metadata only, the profiles are
    beta-independent once momenta are measured in units of ``b``.
    """

    name: str
    G: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    beta: float = 1.0
    b: float = 1.0
    a: float = 1.0
    diverges_at_boundary: bool = False
    description: str = ""
    # G(y) ~ curvature * y^2 near 0; an infinite tower exists iff alpha0 > curvature / 4
    curvature: float = 1.0

    def profile(self, y):
        return kinetic_profile(self, y)


def _cutoff(y):
    return y * y


def _kmm(y):
    y2 = y * y
    with np.errstate(divide="ignore"):
        return np.where(y2 < 1.0, y2 / np.where(y2 < 1.0, 1.0 - y2, 1.0), np.inf)


def _sine(y):
    return (4.0 / math.pi**2) * np.sin(0.5 * math.pi * y) ** 2


def _tan(y):
    inside = np.abs(y) < 1.0
    t = np.tan(0.5 * math.pi * np.where(inside, y, 0.0))
    return np.where(inside, (4.0 / math.pi**2) * t * t, np.inf)


def _make_registry(beta: float = 1.0) -> dict[str, DeformationSpec]:
    sb = math.sqrt(beta)
    half_pi = 0.5 * math.pi / sb
    return {
        # [X, P] = i hbar, P in [-b, b]; b is a free cutoff
        "cutoff": DeformationSpec("cutoff", _cutoff, beta, 1.0 / sb, 1.0 / sb, False,
                                  "momentum cutoff, g(p) = p"),
        # f(P) = (1 + beta P^2)^(3/2), g(p) = p / sqrt(1 - beta p^2)
        "kmm": DeformationSpec("kmm", _kmm, beta, 1.0 / sb, math.inf, True,
                               "f(P) = (1 + beta P^2)^(3/2)"),
        # f(P) = (1 - beta P^2)^(1/2), g(p) = sin(sqrt(beta) p) / sqrt(beta)
        "sine": DeformationSpec("sine", _sine, beta, half_pi, 1.0 / sb, False,
                                "f(P) = (1 - beta P^2)^(1/2)"),
        # f(P) = 1 + beta P^2, g(p) = tan(sqrt(beta) p) / sqrt(beta)
        "tan": DeformationSpec("tan", _tan, beta, half_pi, math.inf, True,
                               "f(P) = 1 + beta P^2"),
    }


_REGISTRY = _make_registry()
DEFORMATIONS: tuple[str, ...] = tuple(_REGISTRY)


def builtin_deformation(name: str, beta: float = 1.0) -> DeformationSpec:
    """Look up a registry deformation by its CLI token."""
    if name not in _REGISTRY:
        raise UnknownDeformation(name, DEFORMATIONS)
    if beta == 1.0:
        return _REGISTRY[name]
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    return _make_registry(beta)[name]


def kinetic_profile(spec: DeformationSpec, y):
    """G(y) for scalar or array ``y``; +inf at |y| = 1 for diverging profiles."""
    arr = np.asarray(y, dtype=float)
    if np.any(np.abs(arr) > 1.0) or np.any(np.isnan(arr)):
        raise DomainError("kinetic profile is defined on [-1, 1] only")
    out = spec.G(arr)
    if np.ndim(out) == 0:
        return float(out)
    return out


def coupling_coefficient(spec: DeformationSpec, alpha0: float, epsilon: float, y):
    """Guarded alpha0 / (G(y) + eps); exactly 0 where G diverges."""
    g = np.asarray(spec.G(np.asarray(y, dtype=float)), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.where(np.isinf(g), 0.0, alpha0 / (g + epsilon))
    if c.ndim == 0:
        return float(c)
    return c


def minimal_length(spec_or_b) -> float:
    """pi hbar / (2 b); zero for an unbounded momentum domain."""
    b = spec_or_b.b if isinstance(spec_or_b, DeformationSpec) else float(spec_or_b)
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    if math.isinf(b):
        return 0.0
    return math.pi * UNITS.hbar / (2.0 * b)


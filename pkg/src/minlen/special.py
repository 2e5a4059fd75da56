"""Complex log-gamma and the Gauss hypergeometric function on z <= 0.

Only the negative real axis is needed (z = -y^2/eps and z = -1/eps), but
the parameters a, b are complex conjugates in the strongly attractive case,
which rules out ``scipy.special.hyp2f1``.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import special as sc

from .errors import NumericError, PoleError

__all__ = ["lngamma_complex", "gamma_ratio", "hyp2f1", "hyp2f1_series"]

MAX_TERMS = 20000
_TINY = 1e-17


def _is_pole(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def lngamma_complex(z) -> complex:
    """Principal branch of log Gamma(z), analytic off the negative real axis."""
    z = complex(z)
    if _is_pole(z):
        raise PoleError(f"log-gamma has a pole at {z}")
    return complex(sc.loggamma(z))


def gamma_ratio(num, den) -> complex:
    """prod Gamma(num) / prod Gamma(den); zero if a denominator sits on a pole."""
    out = 1.0 + 0.0j
    for z in den:
        out *= complex(sc.rgamma(complex(z)))
    if out == 0:
        return 0.0j
    lg = sum(lngamma_complex(z) for z in num)
    return out * cmath.exp(lg)


def hyp2f1_series(a, b, c, z) -> complex:
    """Direct Gauss series; intended for |z| <= 2/3."""
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if _is_pole(c):
        raise PoleError(f"2F1 undefined for c = {c}")
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    small = 0
    for k in range(MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if term == 0:
            return total
        if abs(term) <= _TINY * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NumericError(f"2F1 series did not converge in {MAX_TERMS} terms at z={z}")


def _inverse_z(a, b, c, z) -> complex:
    """1/z connection formula for z < -1:

    2F1(a,b;c;z) = G(c)G(b-a)/(G(b)G(c-a)) (-z)^-a 2F1(a, a-c+1; a-b+1; 1/z)
                 + G(c)G(a-b)/(G(a)G(c-b)) (-z)^-b 2F1(b, b-c+1; b-a+1; 1/z).
    """
    w = 1.0 / z
    mz = -z
    c1 = gamma_ratio((c, b - a), (b, c - a))
    c2 = gamma_ratio((c, a - b), (a, c - b))
    t1 = c1 * cmath.exp(-a * math.log(mz)) * hyp2f1_series(a, a - c + 1, a - b + 1, w)
    t2 = c2 * cmath.exp(-b * math.log(mz)) * hyp2f1_series(b, b - c + 1, b - a + 1, w)
    return t1 + t2


# a - b closer than this to an integer triggers the degenerate-case average
_DEGENERATE = 1e-2
_RADIUS = 5e-2
_CIRCLE = 16


def hyp2f1(a, b, c, z) -> complex:
    """Gauss hypergeometric 2F1(a, b; c; z) for real z <= 0.

    |z| <= 1/2: Gauss series.  -2 <= z < -1/2: Pfaff transformation
    z -> z/(z-1), which maps into [1/3, 2/3].  z < -2: the 1/z connection
    formula.  The latter degenerates when a - b is an integer; there the
    value is taken as the mean over 16 points on a small circle around b,
    which is exact up to O(r^16) because 2F1 is analytic in b.
    """
    a, b, c = complex(a), complex(b), complex(c)
    z = float(z)
    if z > 0:
        raise NumericError(f"hyp2f1 is implemented for z <= 0 only, got {z}")
    if _is_pole(c):
        raise PoleError(f"2F1 undefined for c = {c}")
    if z == 0.0:
        return 1.0 + 0.0j
    if z >= -0.5:
        return hyp2f1_series(a, b, c, z)
    if z >= -2.0:
        return (1.0 - z) ** (-a) * hyp2f1_series(a, c - b, c, z / (z - 1.0))
    d = a - b
    gap = abs(d - round(d.real)) if abs(d.imag) < _DEGENERATE else math.inf
    if gap >= _DEGENERATE:
        return _inverse_z(a, b, c, z)
    shifts = _RADIUS * np.exp(2j * np.pi * (np.arange(_CIRCLE) + 0.5) / _CIRCLE)
    return sum(_inverse_z(a, b + complex(h), c, z) for h in shifts) / _CIRCLE


def hyp2f1_vec(a, b, c, z):
    """Elementwise :func:`hyp2f1` over an array of z."""
    z = np.asarray(z, dtype=float)
    out = np.array([hyp2f1(a, b, c, zz) for zz in z.ravel()], dtype=complex)
    return out.reshape(z.shape)

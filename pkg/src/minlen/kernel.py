"""The inverse-square position operator and its Nystrom discretization.

In the momentum representation X = i hbar d/dp acts on [-b, b] with
Dirichlet conditions, so X^2 is a particle-in-a-box operator.  Its inverse
is the integral operator with kernel

    K(p, q) = sum_n phi_n(p) phi_n(q) / chi_n = (b - max(p, q)) (b + min(p, q)) / (2 b hbar^2),

the Dirichlet Green's function of -hbar^2 d^2/dp^2.  With p = b y and the
Schrodinger equation multiplied by 2m/b^2 the bound-state problem becomes

    (G(y) + eps) psi(y) = alpha0 * int_{-1}^{1} Kd(y, y') psi(y') dy',
    Kd(y, y') = (1 - |y - y'| - y y') / 2,

which :func:`nystrom_matrix` turns into a symmetric matrix eigenproblem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .deformations import DeformationSpec, kinetic_profile
from .errors import DomainError, NumericError
from .levels import EigenLevel, Method, Parity

__all__ = [
    "chi",
    "phi",
    "kernel_closed",
    "kernel_spectral",
    "kernel_dimensionless",
    "graded_gauss_legendre",
    "KernelDiscretization",
    "nystrom_matrix",
    "nystrom_spectrum",
    "spectral_convergence",
    "green_check",
]

HBAR = 1.0


def _check_box(b, *points):
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    for p in points:
        if np.any(np.abs(np.asarray(p, dtype=float)) > b):
            raise DomainError(f"momentum outside [-{b}, {b}]")


def chi(n: int, b: float) -> float:
    """Eigenvalue hbar^2 pi^2 n^2 / (4 b^2) of X^2 on the box [-b, b]."""
    if int(n) != n or n < 1:
        raise DomainError(f"box quantum number must be a positive integer, got {n}")
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    return (HBAR * math.pi * n) ** 2 / (4.0 * b * b)


def phi(n: int, b: float, p):
    """Normalised box eigenfunction sin(n pi (p + b) / 2b) / sqrt(b).

    Exactly zero on the walls |p| = b.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"box quantum number must be a positive integer, got {n}")
    _check_box(b, p)
    p = np.asarray(p, dtype=float)
    val = np.sin(n * math.pi * (p + b) / (2.0 * b)) / math.sqrt(b)
    val = np.where(np.abs(p) == b, 0.0, val)
    return float(val) if val.ndim == 0 else val


def kernel_closed(b: float, p, q):
    """Closed-form kernel -(|p - q| + p q / b - b) / (2 hbar^2).

    Evaluated in the factored form (b - max)(b + min) / (2b), which is
    algebraically identical, exactly symmetric and exactly zero on the walls.
    """
    _check_box(b, p, q)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    hi = np.maximum(p, q)
    lo = np.minimum(p, q)
    val = (b - hi) * (b + lo) / (2.0 * b * HBAR**2)
    return float(val) if val.ndim == 0 else val


def kernel_spectral(b: float, p, q, N: int):
    """Truncated eigen-expansion sum_{n<=N} phi_n(p) phi_n(q) / chi_n.

    ``p`` and ``q`` broadcast against each other.  The worst-case truncation
    error, on the diagonal, is bounded by 4 b / (pi^2 N).
    """
    if int(N) != N or N < 1:
        raise DomainError(f"number of terms must be a positive integer, got {N}")
    _check_box(b, p, q)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pp, qq = np.broadcast_arrays(p, q)
    shape = pp.shape
    pp = pp.ravel()
    qq = qq.ravel()
    out = np.zeros(pp.shape)
    n_all = np.arange(1, int(N) + 1, dtype=float)
    # chunk over n to bound memory for large grids
    chunk = max(1, 2_000_000 // max(1, pp.size))
    for start in range(0, int(N), chunk):
        n = n_all[start:start + chunk][:, None]
        sp = np.sin(n * math.pi * (pp + b) / (2.0 * b))
        sq = np.sin(n * math.pi * (qq + b) / (2.0 * b))
        out += np.sum(sp * sq * (4.0 * b * b / (HBAR * math.pi * n) ** 2), axis=0) / b
    out[(np.abs(pp) == b) | (np.abs(qq) == b)] = 0.0
    out = out.reshape(shape)
    return float(out) if out.ndim == 0 else out


def kernel_dimensionless(y, yp):
    """Kd(y, y') = (1 - |y - y'| - y y') / 2 on [-1, 1]^2.

    Equal to ``kernel_closed(1, y, y')``; b drops out after scaling.
    """
    y = np.asarray(y, dtype=float)
    yp = np.asarray(yp, dtype=float)
    val = 0.5 * (1.0 - np.maximum(y, yp)) * (1.0 + np.minimum(y, yp))
    return float(val) if val.ndim == 0 else val


def graded_gauss_legendre(N: int, grading: float | None = 1e-3):
    """Gauss-Legendre rule on [-1, 1], optionally clustered towards y = 0.

    With ``grading = s`` the standard N-point rule in t is pushed through
    y = s sinh(T t), T = asinh(1/s), resolving structure of width ~ s near
    the origin where weakly bound states concentrate.  ``None`` gives the
    plain rule.
    """
    t, wt = np.polynomial.legendre.leggauss(int(N))
    if grading is None:
        return t, wt
    s = float(grading)
    if not 0 < s:
        raise DomainError(f"grading scale must be positive, got {s}")
    T = math.asinh(1.0 / s)
    y = s * np.sinh(T * t)
    w = s * T * np.cosh(T * t) * wt
    # exact antisymmetry and unit total measure per half line
    y = 0.5 * (y - y[::-1])
    w = 0.5 * (w + w[::-1])
    w *= 2.0 / w.sum()
    return y, w


@dataclass(frozen=True)
class KernelDiscretization:
    """Quadrature nodes/weights and the symmetrised Nystrom matrix.

    ``matrix[i, j] = alpha0 sqrt(w_i) Kd(y_i, y_j) sqrt(w_j) - delta_ij G(y_i)``
    plus, when ``kink_corrected``, the diagonal term alpha0 * d_i with
    d_i = int Kd(y_i, y') dy' - sum_j w_j Kd(y_i, y_j).  Positive
    eigenvalues are the bound-state energies eps.
    """

    nodes: np.ndarray
    weights: np.ndarray
    matrix: np.ndarray
    alpha0: float
    deformation: str
    kink_corrected: bool = True


def nystrom_matrix(spec: DeformationSpec, alpha0: float, N: int,
                   grading: float | None = 1e-3, kink_corrected: bool = True) -> KernelDiscretization:
    """Discretise the integral Schrodinger equation on N quadrature nodes.

    The kink of Kd along y = y' limits plain Nystrom to algebraic
    convergence.  ``kink_corrected`` applies singularity subtraction,
    int Kd(y_i, y') [psi(y') - psi(y_i)] dy' + psi(y_i) (1 - y_i^2) / 2,
    which only changes the diagonal and so keeps the matrix symmetric.
    """
    if not alpha0 > 0:
        raise DomainError(f"alpha0 must be positive, got {alpha0}")
    if int(N) != N or N < 4:
        raise DomainError(f"need at least 4 nodes, got {N}")
    y, w = graded_gauss_legendre(int(N), grading)
    kd = kernel_dimensionless(y[:, None], y[None, :])
    sw = np.sqrt(w)
    A = alpha0 * (sw[:, None] * kd * sw[None, :])
    diag = -np.asarray(kinetic_profile(spec, y), dtype=float)
    if kink_corrected:
        diag += alpha0 * (0.5 * (1.0 - y * y) - kd @ w)
    A[np.diag_indices_from(A)] += diag
    A = 0.5 * (A + A.T)
    return KernelDiscretization(y, w, A, float(alpha0), spec.name, kink_corrected)


def _count_nodes(values, scale):
    v = values[np.abs(values) > 1e-8 * scale]
    if v.size < 2:
        return 0
    return int(np.count_nonzero(np.signbit(v[1:]) != np.signbit(v[:-1])))


def _refine(A, eps, u, sweeps=3):
    """Shifted inverse iteration plus Rayleigh quotient for one eigenpair.

    Profiles that diverge at the walls put entries of size ~1/h^2 on the
    diagonal, and a dense eigensolver is only accurate to machine epsilon
    times that norm.  Shifted solves with a pivoted LU do not suffer from
    this because those rows are diagonally dominant, so the refined pair
    is accurate relative to eps itself.
    """
    shift = eps * (1.0 + 1e-9) if eps != 0 else 1e-300
    lu = lu_factor(A - shift * np.eye(A.shape[0]), check_finite=False)
    for _ in range(sweeps):
        u = lu_solve(lu, u, check_finite=False)
        u /= np.linalg.norm(u)
    return float(u @ (A @ u)), u


def nystrom_spectrum(disc: KernelDiscretization, k: int) -> list[EigenLevel]:
    """Up to ``k`` positive eigenvalues of the Nystrom matrix, descending.

    Negative eigenvalues are discretised continuum and are dropped.  Each
    kept pair is refined by :func:`_refine`; a level shallower than the
    dense solver's absolute error (machine epsilon times max G on the
    nodes) can still be missed because its sign is decided before
    refinement.
    """
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    A = disc.matrix
    try:
        vals, vecs = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"symmetric eigensolver failed for N={A.shape[0]}: {exc}") from exc
    order = np.argsort(vals)[::-1]
    levels = []
    half = disc.nodes > 0
    for rank, j in enumerate(order[:int(k)]):
        eps = float(vals[j])
        if not eps > 0:
            break
        eps, u = _refine(A, eps, vecs[:, j].copy())
        if not eps > 0:
            break
        resid = float(np.max(np.abs(A @ u - eps * u)))
        parity = Parity.EVEN if np.linalg.norm(u - u[::-1]) < np.linalg.norm(u + u[::-1]) else Parity.ODD
        # f = (G + eps) psi, psi = u / sqrt(w)
        psi = u / np.sqrt(disc.weights)
        nodes = _count_nodes(psi[half], np.max(np.abs(psi)))
        levels.append(EigenLevel(eps, parity, rank, nodes, Method.NYSTROM, resid))
    return levels


def spectral_convergence(b: float, grid: int, N: int):
    """Max |kernel_spectral - kernel_closed| on a grid x grid lattice.

    Returns ``(error, (p, q))`` with the worst offending point.
    """
    p = np.linspace(-b, b, int(grid))
    P, Q = np.meshgrid(p, p, indexing="ij")
    err = np.abs(kernel_spectral(b, P, Q, N) - kernel_closed(b, P, Q))
    i, j = np.unravel_index(np.argmax(err), err.shape)
    return float(err[i, j]), (float(p[i]), float(p[j]))


def green_check(b: float, grid: int):
    """Check that -D2 K h is the identity on the interior of a uniform grid.

    D2 is the Dirichlet second-difference matrix on the ``grid - 2``
    interior points of a ``grid``-point lattice on [-b, b], h the spacing.
    Returns ``(max deviation from identity, h, (i, j))``.
    """
    if int(grid) < 3:
        raise DomainError("Green's check needs at least 3 grid points")
    p = np.linspace(-b, b, int(grid))
    h = p[1] - p[0]
    inner = p[1:-1]
    m = inner.size
    K = kernel_closed(b, inner[:, None], inner[None, :])
    D2 = (np.diag(np.full(m, -2.0)) + np.diag(np.ones(m - 1), 1) + np.diag(np.ones(m - 1), -1)) / (h * h)
    R = -(D2 @ K) * h * HBAR**2 - np.eye(m)
    i, j = np.unravel_index(np.argmax(np.abs(R)), R.shape)
    return float(abs(R[i, j])), float(h), (int(i), int(j))

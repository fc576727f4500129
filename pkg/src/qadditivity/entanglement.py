"""Concurrence of the state family, closed form and by the Wootters definition.

The closed form exploits the X shape of the state. The Wootters route builds
``rho * flip(rho)`` explicitly and diagonalizes it with a small dense
eigenvalue routine, so the two routes share nothing beyond the density matrix.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .state import StateParams

_SY_SY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)

EIG_TOL = 1e-12
EIG_MAX_ITER = 200
PSD_TOL = 1e-10


class ConvergenceError(RuntimeError):
    pass


class Branch(Enum):
    INNER = "inner"  # b >= |z|, the only branch reachable by feasible states
    OUTER = "outer"  # b < |z|, infeasible input


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    branch: Branch
    f_value: float

    @property
    def infeasible_branch(self) -> bool:
        return self.branch is Branch.OUTER


def concurrence_closed_form(params: StateParams) -> ConcurrenceResult:
    """Concurrence of rho(p, kappa, z) from its X-state structure.

    With ``a = p^2 + kappa``, ``d = (1-p)^2 + kappa`` and
    ``b = p(1-p) - kappa``, ``F = 2(|z| - sqrt(a d))`` when ``b >= |z|`` and
    ``F = 2(b - sqrt(a d))`` otherwise. The concurrence is ``max(0, F)``.
    The second branch only occurs for infeasible inputs and is flagged.
    """
    p, k, zm = params.p, params.kappa, params.z_mag
    a = p * p + k
    d = (1.0 - p) ** 2 + k
    b = params.b
    root_ad = math.sqrt(max(a, 0.0)) * math.sqrt(max(d, 0.0))
    if b >= zm:
        f = 2.0 * (zm - root_ad)
        branch = Branch.INNER
    else:
        f = 2.0 * (b - root_ad)
        branch = Branch.OUTER
    return ConcurrenceResult(max(0.0, f), branch, f)


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """``(sigma_y x sigma_y) rho* (sigma_y x sigma_y)``."""
    rho = np.asarray(rho, dtype=complex)
    return _SY_SY @ rho.conj() @ _SY_SY


# --- small dense eigenvalue routine --------------------------------------


def _balance(a):
    # Parlett-Reinsch diagonal scaling by powers of two
    n = len(a)
    done = False
    while not done:
        done = True
        for i in range(n):
            c = sum(abs(a[j][i]) for j in range(n) if j != i)
            r = sum(abs(a[i][j]) for j in range(n) if j != i)
            if c == 0.0 or r == 0.0:
                continue
            f = 1.0
            s = c + r
            while c < r / 2.0:
                c *= 2.0
                r /= 2.0
                f *= 2.0
            while c >= r * 2.0:
                c /= 2.0
                r *= 2.0
                f /= 2.0
            if (c + r) < 0.95 * s:
                done = False
                for j in range(n):
                    a[i][j] /= f
                    a[j][i] *= f
    return a


def _hessenberg(a):
    n = len(a)
    for k in range(n - 2):
        x = [a[i][k] for i in range(k + 1, n)]
        if all(v == 0 for v in x[1:]):
            continue
        norm_x = math.hypot(*(abs(v) for v in x))
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = list(x)
        v[0] += phase * norm_x
        norm_v = math.hypot(*(abs(t) for t in v))
        v = [t / norm_v for t in v]
        m = len(v)
        # left: rows k+1.. ; a <- (I - 2 v v^H) a
        for j in range(n):
            s = sum(v[i].conjugate() * a[k + 1 + i][j] for i in range(m))
            for i in range(m):
                a[k + 1 + i][j] -= 2.0 * v[i] * s
        # right: columns k+1.. ; a <- a (I - 2 v v^H)
        for i in range(n):
            s = sum(a[i][k + 1 + j] * v[j] for j in range(m))
            for j in range(m):
                a[i][k + 1 + j] -= 2.0 * s * v[j].conjugate()
        for i in range(k + 2, n):
            a[i][k] = 0j
    return a


def _eig2(a, b, c, d):
    half_tr = 0.5 * (a + d)
    disc = cmath.sqrt(0.25 * (a - d) ** 2 + b * c)
    return [half_tr + disc, half_tr - disc]


def _qr_step(h, mu):
    n = len(h)
    for i in range(n):
        h[i][i] -= mu
    rots = []
    for k in range(n - 1):
        x, y = h[k][k], h[k + 1][k]
        r = math.hypot(abs(x), abs(y))
        if r == 0.0:
            c, s = 1.0 + 0j, 0j
        else:
            c, s = x / r, y / r
        rots.append((c, s))
        for j in range(k, n):
            u, w = h[k][j], h[k + 1][j]
            h[k][j] = c.conjugate() * u + s.conjugate() * w
            h[k + 1][j] = -s * u + c * w
    for k, (c, s) in enumerate(rots):
        for i in range(k + 2):
            u, w = h[i][k], h[i][k + 1]
            h[i][k] = u * c + w * s
            h[i][k + 1] = -u * s.conjugate() + w * c.conjugate()
    for i in range(n):
        h[i][i] += mu


def _hessenberg_eigs(h, scale, budget):
    n = len(h)
    if n == 1:
        return [h[0][0]]
    if n == 2:
        return _eig2(h[0][0], h[0][1], h[1][0], h[1][1])
    it = 0
    while True:
        for k in range(n - 1, 0, -1):
            small = 1e-16 * (abs(h[k][k]) + abs(h[k - 1][k - 1]))
            if abs(h[k][k - 1]) <= max(small, 1e-18 * scale):
                top = [row[:k] for row in h[:k]]
                bottom = [row[k:] for row in h[k:]]
                return _hessenberg_eigs(top, scale, budget) + _hessenberg_eigs(
                    bottom, scale, budget
                )
        if it >= budget:
            raise ConvergenceError(f"eigenvalue iteration did not converge in {budget} steps")
        if it and it % 11 == 0:
            mu = h[n - 1][n - 1] + abs(h[n - 1][n - 2]) * 0.75
        else:
            cand = _eig2(h[n - 2][n - 2], h[n - 2][n - 1], h[n - 1][n - 2], h[n - 1][n - 1])
            mu = min(cand, key=lambda e: abs(e - h[n - 1][n - 1]))
        _qr_step(h, mu)
        it += 1


def eigenvalues_4x4(m: np.ndarray, tol: float = EIG_TOL) -> tuple[float, ...]:
    """Eigenvalues of a 4x4 matrix whose spectrum is real and nonnegative.

    Intended for products of two PSD Hermitian matrices. Uses balancing,
    Householder reduction to Hessenberg form and Wilkinson-shifted QR sweeps.
    Values in [-tol*|m|, 0) are clamped to zero. Returned descending.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    scale = float(np.max(np.abs(m))) or 1.0
    a = [[complex(v) for v in row] for row in m]
    h = _hessenberg(_balance(a))
    eigs = _hessenberg_eigs(h, scale, EIG_MAX_ITER)
    out = []
    for e in eigs:
        if abs(e.imag) > max(tol, 1e-8) * scale or e.real < -max(tol, 1e-8) * scale:
            raise ValueError(f"spectrum is not real and nonnegative: eigenvalue {e}")
        out.append(max(e.real, 0.0))
    return tuple(sorted(out, reverse=True))


def _check_density_matrix(rho):
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=PSD_TOL):
        raise ValueError("matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > PSD_TOL:
        raise ValueError(f"trace is {np.trace(rho).real}, expected 1")
    # PSD up to PSD_TOL
    try:
        np.linalg.cholesky(rho + PSD_TOL * np.eye(4))
    except np.linalg.LinAlgError:
        raise ValueError("matrix is not positive semidefinite") from None


def concurrence_wootters(rho: np.ndarray) -> float:
    """``max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4))`` over the
    descending eigenvalues of ``rho * flip(rho)``."""
    rho = np.asarray(rho, dtype=complex)
    _check_density_matrix(rho)
    lams = eigenvalues_4x4(rho @ spin_flip(rho))
    roots = [math.sqrt(x) for x in lams]
    return max(0.0, roots[0] - roots[1] - roots[2] - roots[3])

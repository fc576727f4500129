"""The correlated two-qubit state family rho(p, kappa, z).

Basis order is fixed to (|11>, |10>, |01>, |00>) everywhere. The coherence z
sits in the (|10>, |01>) slot and its conjugate in (|01>, |10>).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

FEASIBILITY_SLACK = 1e-12

BASIS_LABELS = ("11", "10", "01", "00")


class InfeasibleStateError(ValueError):
    """Raised when an operation needs a physical (positive, unit-trace) state."""


@dataclass(frozen=True)
class StateParams:
    """Parameters of the family: marginal probability ``p``, classical
    correlation ``kappa`` and the coherence ``z = z_mag * exp(i z_phase)``."""

    p: float
    kappa: float = 0.0
    z_mag: float = 0.0
    z_phase: float = 0.0

    def __post_init__(self):
        if self.z_mag < 0:
            raise ValueError(f"z_mag must be >= 0, got {self.z_mag}")

    @property
    def z(self) -> complex:
        if self.z_mag == 0:
            return 0j
        return cmath.rect(self.z_mag, self.z_phase)

    @property
    def b(self) -> float:
        """Inner-block diagonal weight p(1-p) - kappa."""
        return self.p * (1.0 - self.p) - self.kappa


class Spectrum(NamedTuple):
    """Eigenvalues in the order (p^2+k, b+|z|, b-|z|, (1-p)^2+k)."""

    l1: float
    l2: float
    l3: float
    l4: float


@dataclass(frozen=True)
class SpinCoefficients:
    s_z: float
    c_zz: float
    c_pm: complex


@dataclass(frozen=True)
class SeparableDecomposition:
    """Convex sum of product states; ``terms`` holds (weight, rho_A, rho_B)."""

    terms: list[tuple[float, np.ndarray, np.ndarray]]

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((4, 4), dtype=complex)
        for w, a, b in self.terms:
            out += w * np.kron(a, b)
        return out


def diagonal_probs(params: StateParams) -> tuple[float, float, float, float]:
    p, k = params.p, params.kappa
    b = params.b
    return (p * p + k, b, b, (1.0 - p) ** 2 + k)


def eigenvalues(params: StateParams) -> Spectrum:
    p, k, zm = params.p, params.kappa, params.z_mag
    b = params.b
    return Spectrum(p * p + k, b + zm, b - zm, (1.0 - p) ** 2 + k)


def is_feasible(params: StateParams) -> tuple[bool, list[str]]:
    """Check that p is a probability and the whole spectrum lies in [0, 1].

    Returns the flag and a list naming every violated inequality.
    """
    violations = []
    p = params.p
    if p < -FEASIBILITY_SLACK:
        violations.append(f"p = {p:.6g} < 0")
    if p > 1 + FEASIBILITY_SLACK:
        violations.append(f"p = {p:.6g} > 1")
    names = ("λ₁ = p²+κ", "λ₂ = p(1−p)−κ+|z|", "λ₃ = p(1−p)−κ−|z|", "λ₄ = (1−p)²+κ")
    for name, lam in zip(names, eigenvalues(params)):
        if lam < -FEASIBILITY_SLACK:
            violations.append(f"{name} = {lam:.6g} < 0")
        elif lam > 1 + FEASIBILITY_SLACK:
            violations.append(f"{name} = {lam:.6g} > 1")
    return not violations, violations


def require_feasible(params: StateParams) -> None:
    ok, violations = is_feasible(params)
    if not ok:
        raise InfeasibleStateError(f"infeasible state {params}: " + "; ".join(violations))


def feasible_kappa_interval(p: float, z_mag: float) -> tuple[float, float] | None:
    """Range of kappa keeping every eigenvalue nonnegative, or None if empty."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if z_mag < 0:
        raise ValueError(f"z_mag must be >= 0, got {z_mag}")
    k_min = -min(p * p, (1.0 - p) ** 2)
    k_max = p * (1.0 - p) - z_mag
    if k_max < k_min:
        return None
    return k_min, k_max


def build_density_matrix(params: StateParams) -> np.ndarray:
    rho = np.diag(np.array(diagonal_probs(params), dtype=complex))
    z = params.z
    rho[1, 2] = z
    rho[2, 1] = z.conjugate()
    return rho


def marginals(params: StateParams) -> tuple[tuple[float, float], tuple[float, float]]:
    p = params.p
    return (p, 1.0 - p), (p, 1.0 - p)


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Reduce a 4x4 two-qubit matrix to subsystem ``"A"`` or ``"B"``."""
    t = np.asarray(rho).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("jijk->ik", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


# single-qubit operators in the (|1>, |0>) order
_I2 = np.eye(2, dtype=complex)
_SZ = np.diag([1.0, -1.0]).astype(complex)
_SP = np.array([[0, 1], [0, 0]], dtype=complex)  # |1><0|
_SM = np.array([[0, 0], [1, 0]], dtype=complex)  # |0><1|


def spin_decomposition(params: StateParams) -> SpinCoefficients:
    s_z = 2.0 * params.p - 1.0
    return SpinCoefficients(s_z=s_z, c_zz=4.0 * params.kappa + s_z * s_z, c_pm=params.z)


def reconstruct_from_spin(coeffs: SpinCoefficients) -> np.ndarray:
    """Assemble the state from its pseudo-spin expansion."""
    c_pm = complex(coeffs.c_pm)
    m = (
        np.kron(_I2, _I2)
        + coeffs.s_z * (np.kron(_I2, _SZ) + np.kron(_SZ, _I2))
        + coeffs.c_zz * np.kron(_SZ, _SZ)
    )
    # S+ x S- carries the |10><01| element with weight 1, scaled by 1/4 below
    m = m + 4.0 * c_pm * np.kron(_SP, _SM) + 4.0 * c_pm.conjugate() * np.kron(_SM, _SP)
    return m / 4.0


def separable_decomposition(params: StateParams) -> SeparableDecomposition:
    """Write a diagonal (z = 0) state as a convex sum of basis product states."""
    if params.z_mag != 0:
        raise ValueError("separable_decomposition only covers the diagonal case z = 0")
    require_feasible(params)
    one = np.diag([1.0, 0.0]).astype(complex)
    zero = np.diag([0.0, 1.0]).astype(complex)
    factors = [(one, one), (one, zero), (zero, one), (zero, zero)]
    terms = []
    for w, (a, b) in zip(diagonal_probs(params), factors):
        terms.append((min(max(w, 0.0), 1.0), a, b))
    return SeparableDecomposition(terms)


def sample_feasible(rng: np.random.Generator, n: int) -> list[StateParams]:
    """Draw ``n`` feasible states covering the whole region.

    p ~ U(0,1), kappa ~ U over its z = 0 feasible interval, then
    z_mag ~ U[0, b] and z_phase ~ U[0, 2pi).
    """
    out = []
    for _ in range(n):
        p = rng.uniform(0.0, 1.0)
        k_min, k_max = feasible_kappa_interval(p, 0.0)
        kappa = rng.uniform(k_min, k_max)
        z_mag = rng.uniform(0.0, max(p * (1.0 - p) - kappa, 0.0))
        z_phase = rng.uniform(0.0, 2.0 * math.pi)
        out.append(StateParams(p, kappa, z_mag, z_phase))
    return out

"""Solve the q-additivity condition S_q(A,B) = 2 S_q(A) for kappa.

At fixed (p, q, |z|) the residual is scanned over the feasible kappa interval
for sign changes, and each bracket is refined by bisection. Bisection is used
because the residual's kappa-derivative blows up at the interval edges when
q < 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .entropy import _check_q, _tsallis
from .state import StateParams, feasible_kappa_interval, require_feasible

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_CELLS = 64
MAX_BISECTIONS = 200
BOUNDARY_EIGENVALUE = 1e-12


@dataclass(frozen=True)
class AdditivitySolution:
    kappa_star: float
    residual_at_root: float
    bracket: tuple[float, float]
    iterations: int
    # root sits on a feasibility edge (an eigenvalue is zero to ~1e-12)
    on_boundary: bool = False


@dataclass(frozen=True)
class SolvableRange:
    q: float
    z_mag: float
    intervals: list[tuple[float, float]]

    @property
    def measure(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)


def _residual(p, kappa, q, z_mag):
    b = p * (1.0 - p) - kappa
    lams = (p * p + kappa, b + z_mag, b - z_mag, (1.0 - p) ** 2 + kappa)
    joint = _tsallis([lam if lam > 0.0 else 0.0 for lam in lams], q)
    return joint - 2.0 * _tsallis((p, 1.0 - p), q)


def _min_eigenvalue(p, kappa, z_mag):
    b = p * (1.0 - p) - kappa
    return min(p * p + kappa, b - z_mag, (1.0 - p) ** 2 + kappa)


def additivity_residual(p: float, kappa: float, q: float, z_mag: float) -> float:
    """``S_q(A,B) - 2 S_q(A)``; zero exactly where the q-entropy is additive."""
    _check_q(q)
    require_feasible(StateParams(p, kappa, z_mag))
    return _residual(p, kappa, q, z_mag)


def _check_inputs(p, q, z_mag, tol):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    _check_q(q)
    if z_mag < 0:
        raise ValueError(f"z_mag must be >= 0, got {z_mag}")
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")


def _bisect(f, lo, hi, f_lo, f_hi, tol):
    # Narrow to tol in kappa, then keep going while the residual is still
    # large; near the interval edges its slope grows like lambda^(q-1).
    it = 0
    while it < MAX_BISECTIONS:
        if hi - lo <= tol and min(abs(f_lo), abs(f_hi)) <= 10 * tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        it += 1
        if f_mid == 0.0:
            return mid, 0.0, it
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    if abs(f_lo) <= abs(f_hi):
        return lo, f_lo, it
    return hi, f_hi, it


def solve_kappa(
    p: float,
    q: float,
    z_mag: float = 0.0,
    tol: float = DEFAULT_TOL,
    n_cells: int = DEFAULT_CELLS,
) -> list[AdditivitySolution] | None:
    """All roots of the additivity residual in kappa, sorted ascending.

    Returns None when the residual has no sign change on the feasible
    interval, or when that interval is empty. Roots closer together than one
    scan cell may be missed.
    """
    _check_inputs(p, q, z_mag, tol)

    # Degenerate cases where the condition only holds on the product state.
    if q == 1.0 or p in (0.0, 1.0):
        if z_mag != 0.0:
            return None
        return [AdditivitySolution(0.0, 0.0, (0.0, 0.0), 0, on_boundary=p in (0.0, 1.0))]

    interval = feasible_kappa_interval(p, z_mag)
    if interval is None:
        return None
    k_min, k_max = interval

    def f(k):
        return _residual(p, k, q, z_mag)

    if k_max - k_min <= tol:
        k = 0.5 * (k_min + k_max)
        r = f(k)
        if abs(r) <= 10 * tol:
            return [AdditivitySolution(k, r, (k_min, k_max), 0, on_boundary=True)]
        return None

    nodes = [k_min + (k_max - k_min) * i / n_cells for i in range(n_cells + 1)]
    nodes[-1] = k_max
    values = [f(k) for k in nodes]

    roots = []
    for i in range(n_cells + 1):
        if values[i] == 0.0:
            roots.append(
                AdditivitySolution(
                    nodes[i], 0.0, (nodes[i], nodes[i]), 0,
                    on_boundary=i in (0, n_cells),
                )
            )
            continue
        if i == n_cells or values[i + 1] == 0.0:
            continue
        if (values[i] < 0.0) != (values[i + 1] < 0.0):
            k, r, it = _bisect(f, nodes[i], nodes[i + 1], values[i], values[i + 1], tol)
            # An unresolved residual jump next to a vanishing eigenvalue is a
            # root on the feasibility edge, below float resolution in kappa.
            edge = abs(r) > 10 * tol and _min_eigenvalue(p, k, z_mag) <= BOUNDARY_EIGENVALUE
            roots.append(AdditivitySolution(k, r, (nodes[i], nodes[i + 1]), it, on_boundary=edge))

    if not roots:
        return None
    roots.sort(key=lambda s: s.kappa_star)
    return roots


def canonical_root(solutions: list[AdditivitySolution]) -> AdditivitySolution:
    """The positive-correlation branch: the largest kappa among the roots."""
    if len(solutions) > 1:
        log.debug("%d additivity roots: %s", len(solutions), [s.kappa_star for s in solutions])
    return solutions[-1]


def has_solution(p: float, q: float, z_mag: float, n_cells: int = DEFAULT_CELLS) -> bool:
    """Existence test only: same scan as solve_kappa, no bisection."""
    if q == 1.0 or p in (0.0, 1.0):
        return z_mag == 0.0
    interval = feasible_kappa_interval(p, z_mag)
    if interval is None:
        return False
    k_min, k_max = interval
    if k_max - k_min <= DEFAULT_TOL:
        return solve_kappa(p, q, z_mag) is not None
    prev = None
    for i in range(n_cells + 1):
        k = k_max if i == n_cells else k_min + (k_max - k_min) * i / n_cells
        r = _residual(p, k, q, z_mag)
        if r == 0.0 or (prev is not None and (r < 0.0) != (prev < 0.0)):
            return True
        prev = r
    return False


def _refine_edge(q, z_mag, inside, outside, resolution):
    # bisect on existence between a solvable and an unsolvable p
    while abs(inside - outside) > resolution:
        mid = 0.5 * (inside + outside)
        if has_solution(mid, q, z_mag):
            inside = mid
        else:
            outside = mid
    return inside


def solvable_range(q: float, z_mag: float, p_step: float = 0.01) -> SolvableRange:
    """Intervals of p in [0, 1] for which the additivity condition has a root."""
    if not 0.0 < p_step <= 0.1:
        raise ValueError(f"p_step must lie in (0, 0.1], got {p_step}")
    _check_q(q)
    n = round(1.0 / p_step)
    grid = [round(i * p_step, 12) for i in range(1, n) if i * p_step < 1.0 - 1e-12]
    flags = [has_solution(p, q, z_mag) for p in grid]
    resolution = p_step / 100.0

    intervals = []
    i = 0
    while i < len(grid):
        if not flags[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(grid) and flags[j + 1]:
            j += 1
        outer_lo = grid[i - 1] if i > 0 else 0.0
        outer_hi = grid[j + 1] if j + 1 < len(grid) else 1.0
        if i == 0 and has_solution(0.0, q, z_mag):
            lo = 0.0
        else:
            lo = _refine_edge(q, z_mag, grid[i], outer_lo, resolution)
        if j == len(grid) - 1 and has_solution(1.0, q, z_mag):
            hi = 1.0
        else:
            hi = _refine_edge(q, z_mag, grid[j], outer_hi, resolution)
        intervals.append((lo, hi))
        i = j + 1
    return SolvableRange(q, z_mag, intervals)


__all__ = [
    "AdditivitySolution",
    "SolvableRange",
    "additivity_residual",
    "solve_kappa",
    "canonical_root",
    "has_solution",
    "solvable_range",
]

"""Grid sweeps over (p, q, |z|) producing the kappa* curves and region surfaces."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .additivity import additivity_residual, canonical_root, solve_kappa
from .entanglement import concurrence_closed_form
from .entropy import (
    joint_q_entropy,
    marginal_q_entropy,
    mutual_entropy_classical,
    mutual_entropy_quantum,
    quantum_deficit,
)
from .state import StateParams

FIGURE1_Q_VALUES = (0.1, 0.3, 0.5, 0.7, 0.9)
Z_MAX = 0.25  # largest |z| compatible with any p, at p = 1/2


def frange(start: float, end: float, step: float) -> list[float]:
    """Inclusive arithmetic grid, rounded to 12 decimals to kill drift."""
    if step <= 0:
        raise ValueError(f"step must be > 0, got {step}")
    n = int((end - start) / step + 1e-9)
    return [round(start + i * step, 12) for i in range(n + 1)]


@dataclass(frozen=True)
class SweepGrid:
    p_start: float
    p_end: float
    p_step: float
    q_values: tuple[float, ...]
    z_values: tuple[float, ...]
    include_endpoints: bool = False

    def __post_init__(self):
        if not 0.0 <= self.p_start <= self.p_end <= 1.0:
            raise ValueError("need 0 <= p_start <= p_end <= 1")
        if self.p_step <= 0:
            raise ValueError("p_step must be > 0")
        if not self.q_values or not self.z_values:
            raise ValueError("q_values and z_values must be nonempty")
        for q in self.q_values:
            if not 0.0 < q <= 1.0:
                raise ValueError(f"q must lie in (0, 1], got {q}")
        for z in self.z_values:
            if z < 0:
                raise ValueError(f"|z| must be >= 0, got {z}")

    @property
    def p_values(self) -> list[float]:
        ps = frange(self.p_start, self.p_end, self.p_step)
        if not self.include_endpoints:
            ps = [p for p in ps if 0.0 < p < 1.0]
        return ps

    def points(self) -> list[tuple[float, float, float]]:
        """Lattice points in (q, z, p) lexicographic order, as (p, q, z)."""
        return [
            (p, q, z)
            for q, z, p in itertools.product(self.q_values, self.z_values, self.p_values)
        ]


@dataclass
class SweepRecord:
    p: float
    q: float
    z_mag: float
    solvable: bool
    kappa_star: float | None = None
    n_roots: int = 0
    concurrence: float | None = None
    mutual_cl: float | None = None
    mutual_qu: float | None = None
    deficit: float | None = None
    s_q_joint: float | None = None
    s_q_marginal: float | None = None
    all_roots: list[float] = field(default_factory=list, repr=False)

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("all_roots")
        return d


def analyze_point(p: float, q: float, z_mag: float, tol: float = 1e-10) -> SweepRecord:
    solutions = solve_kappa(p, q, z_mag, tol=tol)
    if solutions is None:
        return SweepRecord(p, q, z_mag, solvable=False)
    kappa = canonical_root(solutions).kappa_star
    params = StateParams(p, kappa, z_mag)
    return SweepRecord(
        p,
        q,
        z_mag,
        solvable=True,
        kappa_star=kappa,
        n_roots=len(solutions),
        concurrence=concurrence_closed_form(params).value,
        mutual_cl=mutual_entropy_classical(params),
        mutual_qu=mutual_entropy_quantum(params),
        deficit=quantum_deficit(params),
        s_q_joint=joint_q_entropy(params, q),
        s_q_marginal=marginal_q_entropy(p, q),
        all_roots=[s.kappa_star for s in solutions],
    )


def _analyze_tuple(point):
    return analyze_point(*point)


def run_points(points, workers: int = 1) -> list[SweepRecord]:
    """Analyze (p, q, z) points; results come back in input order."""
    points = list(points)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_analyze_tuple, points, chunksize=64))
    return [_analyze_tuple(pt) for pt in points]


def run_sweep(grid: SweepGrid, workers: int = 1) -> list[SweepRecord]:
    """Evaluate every lattice point; output order is always (q, z, p)."""
    return run_points(grid.points(), workers)


def figure1_dataset(
    z_mag: float, q_values=FIGURE1_Q_VALUES, p_step: float = 0.01, workers: int = 1
) -> list[SweepRecord]:
    """kappa*(p) curves for several q at fixed |z|."""
    grid = SweepGrid(0.0, 1.0, p_step, tuple(q_values), (z_mag,))
    return run_sweep(grid, workers)


def figure23_dataset(
    q: float, p_step: float = 0.01, z_step: float = 0.005, workers: int = 1
) -> list[SweepRecord]:
    """(p, |z|) surfaces of kappa* and concurrence at fixed q."""
    grid = SweepGrid(0.0, 1.0, p_step, (q,), tuple(frange(0.0, Z_MAX, z_step)))
    return run_sweep(grid, workers)


def residual_violations(records: list[SweepRecord], bound: float = 1e-8) -> list[SweepRecord]:
    """Solvable records whose kappa* fails to satisfy the condition to ``bound``."""
    bad = []
    for r in records:
        if r.solvable and abs(additivity_residual(r.p, r.kappa_star, r.q, r.z_mag)) > bound:
            bad.append(r)
    return bad


def monotonicity_report(records: list[SweepRecord]) -> list[tuple[float, float, float, float]]:
    """Points where (p, q, z2) is solvable but (p, q, z1) with z1 < z2 is not.

    Returned as (p, q, z1, z2) tuples for inspection; this is not an error.
    """
    by_pq: dict[tuple[float, float], list[SweepRecord]] = {}
    for r in records:
        by_pq.setdefault((r.p, r.q), []).append(r)
    out = []
    for (p, q), rs in by_pq.items():
        rs = sorted(rs, key=lambda r: r.z_mag)
        for i, lower in enumerate(rs):
            if lower.solvable:
                continue
            for upper in rs[i + 1 :]:
                if upper.solvable:
                    out.append((p, q, lower.z_mag, upper.z_mag))
                    break
    return out

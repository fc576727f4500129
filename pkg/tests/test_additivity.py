import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from qadditivity.additivity import (
    additivity_residual,
    canonical_root,
    has_solution,
    solvable_range,
    solve_kappa,
)
from qadditivity.entropy import tsallis_entropy
from qadditivity.state import InfeasibleStateError, StateParams, build_density_matrix, feasible_kappa_interval

from conftest import tsallis_of_matrix

# closed form at p = q = 1/2: with R = 2 sqrt 2 - 1 the condition reads
# sqrt(1/4 + k) + sqrt(1/4 - k) = R / 2; squaring once gives
# sqrt(1/16 - k^2) = (R^2 / 4 - 1/2) / 2
_R = 2 * math.sqrt(2) - 1
KAPPA_HALF_HALF = math.sqrt(1 / 16 - ((_R**2 / 4 - 0.5) / 2) ** 2)

# frozen from scipy.brentq on the matrix-based residual below
KAPPA_P03_Q05 = 0.15437753470983578
KAPPA_P05_Q05_Z02 = 0.03690536730519981


def oracle_residual(p, k, q, z):
    """Residual from a numerically diagonalized matrix."""
    rho = build_density_matrix(StateParams(p, k, z))
    return tsallis_of_matrix(rho, q) - 2 * tsallis_entropy([p, 1 - p], q)


def test_closed_form_value():
    assert KAPPA_HALF_HALF == pytest.approx(0.1852346, abs=1e-7)
    assert oracle_residual(0.5, KAPPA_HALF_HALF, 0.5, 0.0) == pytest.approx(0, abs=1e-12)


def test_frozen_oracle_roots():
    assert brentq(lambda k: oracle_residual(0.3, k, 0.5, 0), 0.154, 0.155, xtol=1e-14) == pytest.approx(
        KAPPA_P03_Q05, abs=1e-12
    )
    assert brentq(lambda k: oracle_residual(0.5, k, 0.5, 0.2), 0.03, 0.04, xtol=1e-14) == pytest.approx(
        KAPPA_P05_Q05_Z02, abs=1e-12
    )


def test_residual_examples():
    assert additivity_residual(0.5, 0.0, 1.0, 0.0) == pytest.approx(0, abs=1e-15)
    r = additivity_residual(0.5, 0.0, 0.5, 0.0)
    assert r == pytest.approx(2.0 - 2 * (1 - 2 * math.sqrt(0.5)) / -0.5, abs=1e-14)
    assert r == pytest.approx(0.3431458, abs=1e-7)
    assert additivity_residual(0.5, KAPPA_HALF_HALF, 0.5, 0.0) == pytest.approx(0, abs=1e-9)


def test_residual_rejects_infeasible():
    with pytest.raises(InfeasibleStateError):
        additivity_residual(0.5, 0.0, 0.5, 0.3)


@settings(max_examples=100)
# the naive matrix oracle loses accuracy for q within ~1e-3 of 1
@given(st.floats(0.01, 0.99), st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.05, 0.999))
def test_residual_matches_matrix_oracle(p, t, u, q):
    k_min, k_max = feasible_kappa_interval(p, 0.0)
    k = k_min + t * (k_max - k_min)
    z = u * (p * (1 - p) - k)
    assert additivity_residual(p, k, q, z) == pytest.approx(oracle_residual(p, k, q, z), abs=1e-10)


def test_solve_examples():
    best = canonical_root(solve_kappa(0.5, 0.5, 0.0, tol=1e-10))
    assert best.kappa_star == pytest.approx(KAPPA_HALF_HALF, abs=1e-9)

    for p in (0.3, 0.7):
        best = canonical_root(solve_kappa(p, 0.5, 0.0, tol=1e-8))
        assert best.kappa_star == pytest.approx(KAPPA_P03_Q05, abs=1e-8)

    best = canonical_root(solve_kappa(0.5, 0.5, 0.2, tol=1e-8))
    assert best.kappa_star == pytest.approx(KAPPA_P05_Q05_Z02, abs=1e-8)


def test_solve_returns_all_roots_sorted():
    sols = solve_kappa(0.5, 0.5, 0.0)
    ks = [s.kappa_star for s in sols]
    assert ks == sorted(ks)
    assert ks == pytest.approx([-KAPPA_HALF_HALF, KAPPA_HALF_HALF], abs=1e-9)
    for s in sols:
        lo, hi = s.bracket
        assert lo <= s.kappa_star <= hi


def test_solve_q_one():
    [sol] = solve_kappa(0.4, 1.0, 0.0)
    assert sol.kappa_star == 0.0
    assert solve_kappa(0.4, 1.0, 0.1) is None


def test_solve_degenerate_p():
    for p in (0.0, 1.0):
        [sol] = solve_kappa(p, 0.5, 0.0)
        assert sol.kappa_star == 0.0 and sol.on_boundary
        assert solve_kappa(p, 0.5, 0.1) is None


def test_solve_infeasible_interval():
    assert solve_kappa(0.9, 0.5, 0.2) is None


@pytest.mark.parametrize(
    "args", [(-0.1, 0.5, 0.0), (1.1, 0.5, 0.0), (0.5, 0.0, 0.0), (0.5, 1.2, 0.0), (0.5, 0.5, -0.1)]
)
def test_solve_rejects(args):
    with pytest.raises(ValueError):
        solve_kappa(*args)


def test_solve_rejects_bad_tol():
    with pytest.raises(ValueError):
        solve_kappa(0.5, 0.5, 0.0, tol=0.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0.05, 0.99), st.floats(0.0, 1.0))
def test_roots_valid_and_symmetric(p, q, u):
    z = u * 0.25
    tol = 1e-10
    sols = solve_kappa(p, q, z, tol=tol)
    mirror = solve_kappa(1 - p, q, z, tol=tol)
    assert (sols is None) == (mirror is None)
    if sols is None:
        return
    assert len(sols) == len(mirror)
    for a, b in zip(sols, mirror):
        assert abs(a.kappa_star - b.kappa_star) <= 1e-8
    for s in sols:
        if s.on_boundary:
            b = p * (1 - p) - s.kappa_star
            assert min(p * p + s.kappa_star, b - z, (1 - p) ** 2 + s.kappa_star) <= 1e-12
        else:
            assert abs(additivity_residual(p, s.kappa_star, q, z)) <= 10 * tol
        k_min, k_max = feasible_kappa_interval(p, z)
        assert k_min <= s.kappa_star <= k_max


@settings(max_examples=30, deadline=None)
@given(st.floats(0.02, 0.98), st.floats(0.1, 0.95), st.floats(0.0, 0.9))
def test_roots_stable_under_tighter_tol(p, q, u):
    z = u * p * (1 - p)
    tol = 1e-8
    a = solve_kappa(p, q, z, tol=tol)
    b = solve_kappa(p, q, z, tol=tol / 10)
    assert (a is None) == (b is None)
    if a is not None:
        for x, y in zip(a, b):
            assert abs(x.kappa_star - y.kappa_star) < tol


def test_edge_root_flagged():
    # small q: the lower root hugs kappa_min closer than float resolution
    sols = solve_kappa(0.25, 0.125, 0.0)
    assert sols[0].on_boundary
    assert sols[0].kappa_star == pytest.approx(-0.0625, abs=1e-13)
    assert not sols[-1].on_boundary
    assert abs(sols[-1].residual_at_root) <= 1e-9


def test_q_to_one_limit():
    for p in np.arange(0.1, 0.95, 0.1):
        assert abs(canonical_root(solve_kappa(p, 0.999, 0.0)).kappa_star) < 0.01


def test_has_solution_agrees_with_solve():
    for p in np.linspace(0.01, 0.99, 41):
        for q, z in [(0.5, 0.0), (0.5, 0.2), (0.7, 0.2), (0.9, 0.1)]:
            assert has_solution(p, q, z) == (solve_kappa(p, q, z) is not None)


def test_solvable_range_examples():
    full = solvable_range(0.5, 0.0, 0.01)
    assert full.intervals == [(0.0, 1.0)]

    assert solvable_range(1.0, 0.2, 0.01).intervals == []

    r5 = solvable_range(0.5, 0.2, 0.01)
    r7 = solvable_range(0.7, 0.2, 0.01)
    assert r7.intervals and r7.measure < r5.measure
    for lo, hi in r7.intervals:
        assert 0.0 < lo < hi < 1.0


def test_solvable_range_edges_are_refined():
    r = solvable_range(0.5, 0.2, 0.01)
    [(lo, hi)] = r.intervals
    assert has_solution(lo, 0.5, 0.2)
    assert not has_solution(lo - 0.01 / 100, 0.5, 0.2)
    assert has_solution(hi, 0.5, 0.2)
    assert not has_solution(hi + 0.01 / 100, 0.5, 0.2)
    # symmetric under p <-> 1 - p up to the edge resolution
    assert lo == pytest.approx(1 - hi, abs=0.01 / 100)


def test_solvable_range_rejects_step():
    with pytest.raises(ValueError):
        solvable_range(0.5, 0.0, 0.2)

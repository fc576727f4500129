"""Tsallis q-entropies, mutual entropies and the quantum deficit (k = 1, natural log)."""

from __future__ import annotations

import math
from collections.abc import Sequence

from .state import StateParams, diagonal_probs, eigenvalues, require_feasible

ZERO_CUTOFF = 1e-15
NEGATIVE_SLACK = 1e-12
SUM_TOL = 1e-9


def _check_q(q: float) -> None:
    if not 0.0 < q <= 1.0:
        raise ValueError(f"q must lie in (0, 1], got {q}")


def _check_probs(probs: Sequence[float]) -> list[float]:
    values = [float(x) for x in probs]
    if not values:
        raise ValueError("empty probability vector")
    for x in values:
        if not x >= -NEGATIVE_SLACK:
            raise ValueError(f"negative probability {x}")
    if abs(sum(values) - 1.0) > SUM_TOL:
        raise ValueError(f"probabilities sum to {sum(values)}, expected 1")
    return [max(x, 0.0) for x in values]


def xlogx(x: float) -> float:
    """x ln x with the 0 ln 0 = 0 convention."""
    if x < ZERO_CUTOFF:
        return 0.0
    return x * math.log(x)


def _tsallis(values, q):
    # unchecked kernel shared with the additivity solver; values already >= 0
    if q == 1.0:
        return -sum(xlogx(x) for x in values)
    # (1 - sum x^q)/(q-1) rewritten with sum x = 1 so it stays accurate as q -> 1
    s = 0.0
    for x in values:
        if x >= ZERO_CUTOFF:
            s += x * math.expm1((q - 1.0) * math.log(x))
    return -s / (q - 1.0)


def tsallis_entropy(probs: Sequence[float], q: float) -> float:
    """Tsallis entropy ``(1 - sum p_i^q) / (q - 1)``.

    ``q = 1`` selects the Shannon limit ``-sum p_i ln p_i``. Entries below
    1e-15 count as zero, so ``0^q = 0`` and ``0 ln 0 = 0``.
    """
    _check_q(q)
    return _tsallis(_check_probs(probs), q)


def shannon_entropy(probs: Sequence[float]) -> float:
    return tsallis_entropy(probs, 1.0)


def joint_q_entropy(params: StateParams, q: float) -> float:
    """q-entropy of the full bipartite state, evaluated on its spectrum."""
    _check_q(q)
    require_feasible(params)
    return _tsallis([max(x, 0.0) for x in eigenvalues(params)], q)


def marginal_q_entropy(p: float, q: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return tsallis_entropy([p, 1.0 - p], q)


def _marginal_sum(p):
    return 2.0 * shannon_entropy([p, 1.0 - p])


def mutual_entropy_classical(params: StateParams) -> float:
    """S(A) + S(B) - S(A,B) on the diagonal probabilities; z is ignored."""
    require_feasible(params)
    joint = -sum(xlogx(max(x, 0.0)) for x in diagonal_probs(params))
    return _marginal_sum(params.p) - joint


def mutual_entropy_quantum(params: StateParams) -> float:
    """S(A) + S(B) - S(A,B) on the eigenvalues, so coherence is included."""
    require_feasible(params)
    joint = -sum(xlogx(max(x, 0.0)) for x in eigenvalues(params))
    return _marginal_sum(params.p) - joint


def quantum_deficit(params: StateParams) -> float:
    """Classical minus quantum mutual entropy, in closed form.

    ``2 b ln b - (b+|z|) ln(b+|z|) - (b-|z|) ln(b-|z|)`` with
    ``b = p(1-p) - kappa``. Convexity of ``x ln x`` makes this nonpositive:
    it is zero iff ``|z| = 0`` and strictly negative otherwise. The sign is
    returned as is.
    """
    require_feasible(params)
    b, zm = params.b, params.z_mag
    return 2.0 * xlogx(b) - xlogx(b + zm) - xlogx(max(b - zm, 0.0))

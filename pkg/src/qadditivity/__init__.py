"""Tsallis q-additivity, concurrence and quantum deficit for a correlated
two-qubit X-state family rho(p, kappa, z)."""

from .additivity import (
    AdditivitySolution,
    SolvableRange,
    additivity_residual,
    canonical_root,
    solvable_range,
    solve_kappa,
)
from .entanglement import (
    ConcurrenceResult,
    concurrence_closed_form,
    concurrence_wootters,
    eigenvalues_4x4,
    spin_flip,
)
from .entropy import (
    joint_q_entropy,
    marginal_q_entropy,
    mutual_entropy_classical,
    mutual_entropy_quantum,
    quantum_deficit,
    tsallis_entropy,
)
from .state import (
    InfeasibleStateError,
    SpinCoefficients,
    StateParams,
    build_density_matrix,
    diagonal_probs,
    eigenvalues,
    feasible_kappa_interval,
    is_feasible,
    marginals,
    reconstruct_from_spin,
    separable_decomposition,
    spin_decomposition,
)
from .sweep import SweepGrid, SweepRecord, figure1_dataset, figure23_dataset, run_sweep

__version__ = "0.1.0"

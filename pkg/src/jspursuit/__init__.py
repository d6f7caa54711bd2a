"""Greedy subspace pursuit toolkit for joint sparse recovery.

Recovers a row-sparse signal matrix from multiple measurement vectors via
subspace-aware greedy selection, with two-stage candidate-pool pruning,
classification baselines, recoverability diagnostics, and a Monte Carlo
experiment harness.
"""

from .baselines import music, sa_music_osmp, somp
from .diagnostics import (
    BoundInputs,
    BudgetExceededError,
    MeasureReport,
    WripConstant,
    coherence_level,
    coherence_level_inverse,
    eval_bound_functions,
    gram_gershgorin_radius,
    krank,
    lcp,
    mutual_coherence,
    osmp_theorem4_check,
    pool_failure_prob,
    projected_normalized_columns,
    rip_constant,
    row_nondegenerate,
    sample_bounds,
    theorem3_quantities,
    tsmp_theorem7_check,
    uniqueness_oracles,
    wrip_constant,
)
from .harness import (
    ExperimentConfig,
    K95Row,
    SweepRow,
    k95,
    make_problem,
    read_csv,
    register_solver,
    registered_solvers,
    run_trial,
    sweep,
    write_csv,
    write_k95_csv,
)
from .matmodel import (
    RecoveryProblem,
    Seed,
    SignalSpec,
    add_noise,
    gen_gaussian_phi,
    gen_partial_dft,
    gen_signal,
    gen_spherical_phi,
    support,
)
from .mmio import load_matrix, load_problem, save_matrix, save_problem, save_result
from .pursuit import (
    ExhaustedCandidatesError,
    PursuitParams,
    RecoveryResult,
    esms1,
    esms2,
    kappa_largest_gap,
    kappa_noise_level,
    least_squares_rows,
    osmp,
    submp,
    tsmp1,
    tsmp1_qr,
    tsmp2,
)
from .subspace import (
    RankPolicy,
    SubspaceBasis,
    compute_rho,
    estimate_signal_subspace,
    orthonormal_basis,
    proj_complement_apply,
)

__version__ = "0.1.0"

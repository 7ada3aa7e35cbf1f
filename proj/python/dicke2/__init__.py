"""Two-ensemble Dicke model toolkit.

Steady states, linear stability, semiclassical dynamics, phase-diagram
sweeps, and a small-scale Lindblad solver with Husimi-Q readout.
"""

from ._core import (  # noqa: F401
    AttractorVerdict,
    CriticalCouplings,
    DomainError,
    EvolveResult,
    FixedPointRecord,
    HilbertSpec,
    Lobe,
    LobeReport,
    MeanFieldState,
    ModelParams,
    NumericalError,
    ObservableSample,
    PhaseLabel,
    QFunctionGrid,
    ResourceError,
    StabilityReport,
    Trajectory,
    Verdict,
    __version__,
    all_fixed_points,
    classify_attractor,
    classify_stability,
    coherent_field_state,
    coherent_spin_state,
    count_q_lobes,
    critical_couplings,
    distance,
    eigenvalues,
    energy,
    eom_rhs,
    evolve_master,
    hamiltonian_dense,
    husimi_q,
    husimi_q_auto,
    integrate,
    jacobian,
    normal_fixed_points,
    parity_transform,
    partial_trace_field,
    perturbed_fixed_point,
    phase_label_str,
    product_state,
    q_grid_integral,
    scale_transform,
    superradiant_fixed_points,
    to_coords,
)

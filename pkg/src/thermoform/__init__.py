"""Thermodynamic formalism on full shifts with finite-memory potentials.

Transfer operators, normalization, Gibbs measures, the variance metric,
pressure gradient flows and constrained equilibrium states, all reduced to
finite-dimensional linear algebra.
"""

__version__ = "0.1.0"

from .errors import (
    AlphabetMismatch,
    BoundaryPoint,
    ConvergenceError,
    DependentConstraints,
    LevelMismatch,
    MemoryOverflow,
    NotMeanZero,
    TargetOutsideRotationSet,
    ThermoformError,
)
from .sft import FnTable, ShiftSpec, Word, add_coboundary, lift_memory, word_index, word_symbols
from .transfer import (
    RpfData,
    TransferMatrix,
    apply_transfer,
    dn_projection,
    log_lambda,
    m_operator,
    normalize,
    quotient_decompose,
    resolvent_solve,
    rpf,
    transfer_matrix,
)
from .gibbs import (
    MarkovMeasure,
    center,
    cylinder_mass,
    entropy,
    gibbs_measure,
    integrate,
    legendre_gap,
    p_functional,
    pressure,
    sample_path,
    word_masses,
)
from .calculus import (
    GramMatrix,
    asymptotic_variance,
    dlog_lambda,
    gibbs_derivative,
    gram_matrix,
    hessian_fd_log_lambda,
    monte_carlo_variance,
    variance_metric,
)
from .equilibria import (
    ConstraintProblem,
    Equilibrium,
    constrained_equilibrium,
    entropy_surface,
    prescribe,
    rotation_vector,
)
from .flow import FlowState, flow_state, flow_trace
from .wasserstein import DyadicMeasure, project_dyadic, roughness_scan, w_distance

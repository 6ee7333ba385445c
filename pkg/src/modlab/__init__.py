"""modlab: a finite-dimensional laboratory for modular operator theory.

The package builds modular data (Delta, J, K) for matrix algebras from
faithful states, realizes conditional expectations and the Jones basic
construction, interpolates between the identity channel and an expectation
along two routes (a convex CP path with a measured idempotency defect, and
idempotent state-path surrogates with K'(0) = -P and generator 2P), and runs
thermofield-double correlator and resolvent-stability experiments.
"""

from .algebra import (
    MatrixAlgebra,
    StateDensity,
    TakesakiReport,
    TomiyamaReport,
    center,
    commutant,
    intersect,
    omega_expectation,
    span_distance,
    takesaki_check,
    trace_expectation,
    trace_expectation_superop,
    verify_tomiyama,
)
from .experiments import (
    CorrelatorSeries,
    TfdModel,
    build_tfd,
    build_tfd_preset,
    correlator_scan,
    hamiltonian_preset,
    modular_momentum,
    resolvent_stability,
    stability_fit,
    translation_fidelity,
)
from .interpolation import (
    CpPathPoint,
    Filtration,
    RnData,
    StatePath,
    cocycle_scaling_residual,
    filtration_check,
    kadison_schwarz_residual,
    modular_momentum_states,
    patha_absorption_violation,
    patha_defect,
    patha_gns_operator,
    patha_map,
    path_generator,
    path_hamiltonian,
    rn_data,
    state_path,
    traceless,
)
from .jones import (
    BasicExtension,
    Inclusion,
    basic_extension,
    basic_extension_from_conjugation,
    canonical_shift,
    index_estimate,
    jones_projection,
    relative_commutant,
    represented_algebra,
)
from .linalg import (
    AntilinearOperator,
    SingularityError,
    SpectralDecomposition,
    choi_matrix,
    herm_exp,
    herm_log,
    herm_power,
    herm_sqrt,
    matrix_function,
    partial_trace,
    polar_decompose_antilinear,
    spectral_decompose,
)
from .modular import (
    GnsSpace,
    ModularData,
    gns_build,
    kms_residual,
    tomita,
    verify_commutation,
)
from .rng import seed_stream

__version__ = "0.1.0"

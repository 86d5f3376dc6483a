"""pfkit: pseudo-fermion analysis of 2x2 non-self-adjoint Hamiltonians.

The package decomposes diagonalizable 2x2 matrices with a nonzero (0, 1)
entry as H = omega*N + rho*1 for a pseudo-fermionic number operator N,
builds the biorthogonal eigenbases and positive metric operators with
closed-form square roots, classifies PT-type symmetry phases, detects
exceptional points, and ships identifications for six model families from
the non-Hermitian literature together with a sweep/analysis CLI.
"""

__version__ = "0.1.0"

from .algebra import (
    FamilyOne,
    FamilyTwo,
    General,
    PFPair,
    PFParameters,
    build,
    excited_states,
    family_two_limit,
    number_operators,
    sample_parameters,
    vacuum_states,
)
from .decomposition import (
    BiorthogonalSystem,
    Branch,
    Decomposition,
    FermionicPicture,
    MetricPair,
    assemble,
    biorthogonal_system,
    decompose,
    fermionize,
    intertwining_check,
    metrics,
    pf_pair,
    pf_parameters,
)
from .errors import (
    ConstraintViolated,
    DegenerateParameters,
    DegenerateSpectrum,
    EigenvectorDegenerate,
    ExceptionalPoint,
    InternalInconsistency,
    InvalidGrid,
    NoPseudoFermions,
    NotHermitian,
    NotInPTForm,
    NotPositiveDefinite,
    NotReducible,
    PfkitError,
    TrivialCommutant,
    UnsupportedShape,
    ZeroParameter,
)
from .mat2 import (
    EigenPair,
    anticommutator,
    commutator,
    dagger,
    eigenpairs,
    eigvals2,
    hermitian_sqrt_oracle,
    identity2,
    is_hermitian,
    is_positive_definite,
    mat2,
    max_abs,
    vec2,
)
from .symmetry import (
    Phase,
    PhaseResult,
    PTReport,
    check_pt,
    classify_phase,
    commutant,
    involutive_symmetry,
)
from .catalog import (
    DG,
    GMM,
    JSM,
    MO,
    Part,
    Rel,
    dg_metrics,
    ep_condition,
    identify,
    model_from_dict,
    model_to_dict,
    phase_of,
    reduce_model,
    to_matrix,
)
from .sweep import GridAxis, SweepConfig, config_from_dict, run_sweep
from .verify import run_verification

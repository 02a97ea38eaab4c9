"""walklab: simulation and numerical-verification lab for decoherent
two-dimensional discrete-time quantum walks on the torus Z_N x Z_N."""

__version__ = "0.1.0"

from .walk_model import (  # noqa: F401
    WalkConfig,
    KrausFamily,
    build_hadamard2d_coin,
    build_fourier_coin,
    build_kraus,
    build_shift,
    validate_config,
)
from .evolution_direct import (  # noqa: F401
    DensityOperator,
    PositionDistribution,
    classical_walk_oracle,
    evolve,
    initial_state,
    position_distribution,
    step,
)
from .evolution_fourier import (  # noqa: F401
    FourierBlockSet,
    MomentumReducedWalker,
    coin_reduced_density,
    init_blocks,
    probability_at,
    reconstruct_full_rho,
    step_blocks,
    walker_reduced_density,
)
from .infotheory import (  # noqa: F401
    EntropyTrace,
    LimitReport,
    entropy_trace,
    limit_report,
    mutual_information,
    partial_trace_coin,
    partial_trace_position,
    trace_norm_distance,
    von_neumann_entropy,
)
from .numerics import (  # noqa: F401
    HermitianEigenResult,
    dagger,
    general_eigenvalues,
    hermitian_eig,
    kron,
    trace_norm,
)
from .spectral import (  # noqa: F401
    CharPolyParams,
    Reference1DMatrix,
    SpectralReport,
    SuperoperatorMatrix,
    audit_block_limits,
    audit_contraction,
    audit_factorization,
    audit_proposition1,
    build_reference_1d,
    build_superoperator,
    char_poly_f,
    char_poly_roots,
    subunit_spectral_radius,
)

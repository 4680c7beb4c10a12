"""Entanglement dynamics of noisy qubit graph states via boundary reduction.

The package computes the negativity of graph states evolving under
independent noise: exactly for Pauli maps, through an effective dephasing
distribution on the boundary subsystem, and as lower/upper bounds for general
channels such as thermal baths.  A dense brute-force oracle validates every
fast path.
"""

__version__ = "0.1.0"

from .exceptions import (
    ChannelCompatibilityError,
    ConfigError,
    GraphentError,
    LimitExceededError,
)
from .graphs import (
    Graph,
    build_graph_state,
    chord_labels,
    graph_basis_matrix,
    graph_basis_state,
    load_graph,
    pauli_string_matrix,
    pauli_to_z_image,
    preset_graph,
    random_connected_graph,
    resolve_graph,
    stabilizer_matrix,
)
from .partitions import (
    BoundaryDecomposition,
    Partition,
    bipartition_mask,
    decompose,
    factored_graph_state,
    parse_partition,
)
from .channels import (
    ChannelSpec,
    KrausQubitChannel,
    PauliQubitChannel,
    ProductChannel,
    amplitude_damping,
    bit_flip,
    bit_phase_flip,
    check_completeness,
    completeness_residual,
    dephasing,
    depolarizing,
    diffusive_pauli,
    gad,
    identity_channel,
    kraus_terms,
    parse_channel_spec,
)
from .negativity import (
    assert_density_matrix,
    graph_diagonal_density,
    negativity,
    partial_transpose,
    record_eig_dims,
)
from .effective import (
    EffectiveDistribution,
    FlagConditional,
    compose_graph_diagonal_prior,
    effective_distribution,
    entanglement_from_distribution,
    exact_entanglement_pauli,
    flag_conditional,
    project_to_graph_diagonal,
    xor_convolve,
)
from .bounds import (
    Certificate,
    FlagEnsemble,
    FlagGroup,
    ModifiedKrausTerm,
    ThetaScanResult,
    build_ensemble,
    commute_through_cz,
    exactness_certificate,
    group_flags,
    lower_bound_measured,
    lowest_lower_bound,
    theta_scan,
    upper_bound,
)
from .oracle import evolve_density, graph_state_density, oracle_negativity
from .experiments import ExperimentConfig, GridSpec, RunResult, format_presets_table, presets, run

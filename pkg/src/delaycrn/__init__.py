"""Persistence analysis and simulation of delayed complex-balanced mass-action networks."""

from importlib import resources

from .boundary import (
    BoundaryClassification,
    CapExceededError,
    DecompositionRecord,
    PersistenceCertificate,
    SemilockingSet,
    boundary_empty_by_conservation,
    certificate_json,
    certificate_to_dict,
    certify_persistence,
    classify_boundary,
    enumerate_semilocking,
    interaction_components,
    is_facet,
    is_locking,
    is_semilocking,
    is_vertex,
    restricted_subspace_dim,
    try_independent_decomposition,
    try_subsystem_decomposition,
)
from .network import (
    Complex,
    Network,
    NetworkError,
    ParseError,
    Reaction,
    SpeciesTable,
    format_network,
    parse_network,
)
from .reduced import ReducedNetwork, reduce, reduced_rate, reduced_rhs
from .sim import (
    HistoryFunction,
    SimConfig,
    SimulationError,
    Trajectory,
    c_functional,
    complex_balance_residual,
    full_rhs,
    simulate,
    trajectory_stats,
)
from .structure import (
    LinkageStructure,
    StoichiometryDecomposition,
    complex_balanced_eligibility,
    deficiency,
    is_weakly_reversible,
    linkage_classes,
    stoichiometric_matrix,
    stoichiometry_decomposition,
)

__version__ = "0.1.0"


def load_fixture(name: str) -> Network:
    """Load a bundled network: ``ex1_distinct``, ``ex1_same`` or ``ex2``."""
    text = resources.files(__package__).joinpath("data", f"{name}.crn").read_text(encoding="utf-8")
    return parse_network(text)


def fixture_path(name: str) -> str:
    return str(resources.files(__package__).joinpath("data", f"{name}.crn"))

"""Edge-disjoint T-path packings in finite multigraphs and T-arc systems in
locally finite infinite graphs with ends."""

from .arcs import Arc, ArcSystem, PipelineState, assemble_arcs, compute_separating_cuts, mu_estimate, verify_arc_system
from .ends import (
    End,
    Presentation,
    TerminalSpec,
    Window,
    check_cut_parity_premise,
    check_discrete,
    end_degree_parity,
    handshake_check,
    is_inner_eulerian_with_ends,
    lambda_end,
    window,
)
from .errors import (
    BudgetError,
    ConsistencyError,
    DomainError,
    InfeasibleError,
    PreconditionError,
    PresentationError,
    RefusalError,
    TPackError,
    UnstabilizedError,
)
from .multigraph import (
    ContractionMinor,
    Cut,
    MultiGraph,
    Path,
    boundary_size,
    contract,
    decompose_flow,
    degree,
    edge_disjoint_paths,
    max_flow,
    min_cut,
)
from .packing import (
    PackingCertificate,
    PathSystem,
    brute_force_pack,
    is_inner_eulerian,
    lambda_profile,
    pack_tpaths,
    verify_packing,
)
from .rays import RaySystem, extend, max_ray_system, start_edge_index

__all__ = [
    "Arc",
    "ArcSystem",
    "BudgetError",
    "ConsistencyError",
    "ContractionMinor",
    "Cut",
    "DomainError",
    "End",
    "InfeasibleError",
    "MultiGraph",
    "PackingCertificate",
    "Path",
    "PathSystem",
    "PipelineState",
    "PreconditionError",
    "Presentation",
    "PresentationError",
    "RaySystem",
    "RefusalError",
    "TPackError",
    "TerminalSpec",
    "UnstabilizedError",
    "Window",
    "assemble_arcs",
    "boundary_size",
    "brute_force_pack",
    "check_cut_parity_premise",
    "check_discrete",
    "compute_separating_cuts",
    "contract",
    "decompose_flow",
    "degree",
    "edge_disjoint_paths",
    "end_degree_parity",
    "extend",
    "handshake_check",
    "is_inner_eulerian",
    "is_inner_eulerian_with_ends",
    "lambda_end",
    "lambda_profile",
    "max_flow",
    "max_ray_system",
    "min_cut",
    "mu_estimate",
    "pack_tpaths",
    "start_edge_index",
    "verify_arc_system",
    "verify_packing",
    "window",
]

__version__ = "0.1.0"

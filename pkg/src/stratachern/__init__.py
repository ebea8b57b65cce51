"""stratachern: lattice Chern numbers, witness-filtered sector responses, and
filtered quantum geometry for two-band Bloch Hamiltonians on a discretized
Brillouin torus."""

from .config import (
    MeshSpec,
    MultiConfig,
    QfiScanConfig,
    RunConfig,
    SweepConfig,
    WitnessConfig,
    canonical_dict,
    config_from_dict,
    default_config,
    load_config,
)
from .errors import (
    DegenerateOverlap,
    DegeneratePhase,
    GaplessMesh,
    GaplessPoint,
    MissingProbe,
    NonIntegerTotal,
    NonUnitProbe,
    NonUnitary,
    NotPartialIsometry,
    OnWall,
    ParseError,
    StrataChernError,
    ValidationError,
    ViolationFound,
)
from .geometry import (
    InequalityReport,
    MultiOrbitalBoundsReport,
    QgtSample,
    coherence_gradient,
    concurrence,
    curvature_riemann_total,
    eta_value,
    filtered_chern_from_qgt,
    filtered_qgt,
    inequality_suite,
    multiorbital_bounds,
    qfi,
    qgt,
    qgt_sample_arrays,
    saturation_case,
    sign_operator_matrix,
)
from .harness import PanelOutput, Workspace, run_all, run_panel, thread_cap
from .mesh import (
    CurvatureField,
    TorusMesh,
    build_mesh,
    chern_number,
    link_variable,
    plaquette_curvature,
)
from .model import (
    BlochState,
    DVector,
    ModelParams,
    analytic_chern,
    d_derivatives,
    d_vector,
    dirac_masses,
    min_gap_on_mesh,
    valence_state,
)
from .multiorbital import (
    CoherenceMatrix,
    LeviType,
    MultiState,
    coherence_matrix,
    embed_state,
    hecke_pairing,
    levi_type,
    multi_witness_expectation,
    reconstruct_JF,
    sector_response_multi,
    unitary_invariance_check,
    witness_block,
)
from .witness import (
    JumpRecord,
    SectorReport,
    WitnessSpec,
    reference_phase,
    sector_responses,
    sweep_mass,
    theta_grid,
    theta_scan,
    tomography_reconstruct,
    weight_alpha,
)

__version__ = "0.1.0"
VERSION = "v0.1.0"

__all__ = [
    "BlochState",
    "CoherenceMatrix",
    "CurvatureField",
    "DVector",
    "DegenerateOverlap",
    "DegeneratePhase",
    "GaplessMesh",
    "GaplessPoint",
    "InequalityReport",
    "JumpRecord",
    "LeviType",
    "MeshSpec",
    "MissingProbe",
    "ModelParams",
    "MultiConfig",
    "MultiOrbitalBoundsReport",
    "MultiState",
    "NonIntegerTotal",
    "NonUnitProbe",
    "NonUnitary",
    "NotPartialIsometry",
    "OnWall",
    "PanelOutput",
    "ParseError",
    "QfiScanConfig",
    "QgtSample",
    "RunConfig",
    "SectorReport",
    "StrataChernError",
    "SweepConfig",
    "TorusMesh",
    "ValidationError",
    "ViolationFound",
    "WitnessConfig",
    "WitnessSpec",
    "Workspace",
    "analytic_chern",
    "build_mesh",
    "canonical_dict",
    "chern_number",
    "coherence_gradient",
    "coherence_matrix",
    "concurrence",
    "config_from_dict",
    "curvature_riemann_total",
    "d_derivatives",
    "d_vector",
    "default_config",
    "dirac_masses",
    "embed_state",
    "eta_value",
    "filtered_chern_from_qgt",
    "filtered_qgt",
    "hecke_pairing",
    "inequality_suite",
    "levi_type",
    "link_variable",
    "load_config",
    "min_gap_on_mesh",
    "multi_witness_expectation",
    "multiorbital_bounds",
    "plaquette_curvature",
    "qfi",
    "qgt",
    "qgt_sample_arrays",
    "reconstruct_JF",
    "reference_phase",
    "run_all",
    "run_panel",
    "saturation_case",
    "sector_response_multi",
    "sector_responses",
    "sign_operator_matrix",
    "sweep_mass",
    "theta_grid",
    "theta_scan",
    "thread_cap",
    "tomography_reconstruct",
    "unitary_invariance_check",
    "valence_state",
    "weight_alpha",
    "witness_block",
]

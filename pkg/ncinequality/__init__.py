"""
Package ncinequality

Exact derivation of noise-robust noncontextuality inequalities from
contextuality scenarios, and floating-point evaluation of quantum
realizations against them.
"""

__version__ = "0.1.0"

from .exceptions import (
    DegenerateScenarioError,
    IncompatibleMeasurementsError,
    InfeasibleSystemError,
    LogicalProofError,
    NCIError,
    NotAStatisticalProofError,
    RealizationError,
    ScenarioParseError,
    ScenarioValidationError,
    TranslationError,
)
from .inequality import (
    BoundEvaluation,
    Derivation,
    InequalityParameters,
    VertexScores,
    bound_rhs,
    compute_parameters,
    corr_of_vertex,
    derivation_report,
    derive,
    evaluate_bound,
    logical_bound,
    maximal_sets,
    noise_threshold,
    r_of_vertex,
    saturating_model_exists,
    score_vertices,
    specialize_xu,
    xu_rhs,
)
from .polytope import (
    HRep,
    Vertex,
    VertexKind,
    build_hrep,
    classify_vertex,
    classify_vertices,
    enumerate_vertices,
    marginal_response,
    satisfies,
    vertex_table,
    write_vertex_csv,
)
from .quantum import (
    ContextPOVM,
    CycleFragment,
    QuantumMeasurement,
    QuantumRealization,
    SourceEnsemble,
    check_operational_equivalences,
    depolarize,
    evaluate_realization,
    joint_povm_from_commuting,
    joint_povm_zero_coincidence,
    kcbs_realization,
    realization_from_json,
    realization_to_json,
    translate_tri_to_quad,
    tri_form,
)
from .scenario import (
    Context,
    FunctionalTerm,
    Measurement,
    Scenario,
    Violation,
    WitnessFunctional,
    build_cycle,
    build_n_cycle,
    load_scenario,
    read_scenario,
    serialize_scenario,
    validate,
    write_scenario,
)

__all__ = [
    "__version__",
    # scenario
    "Context",
    "FunctionalTerm",
    "Measurement",
    "Scenario",
    "Violation",
    "WitnessFunctional",
    "build_cycle",
    "build_n_cycle",
    "load_scenario",
    "read_scenario",
    "serialize_scenario",
    "validate",
    "write_scenario",
    # polytope
    "HRep",
    "Vertex",
    "VertexKind",
    "build_hrep",
    "classify_vertex",
    "classify_vertices",
    "enumerate_vertices",
    "marginal_response",
    "satisfies",
    "vertex_table",
    "write_vertex_csv",
    # inequality
    "BoundEvaluation",
    "Derivation",
    "InequalityParameters",
    "VertexScores",
    "bound_rhs",
    "compute_parameters",
    "corr_of_vertex",
    "derivation_report",
    "derive",
    "evaluate_bound",
    "logical_bound",
    "maximal_sets",
    "noise_threshold",
    "r_of_vertex",
    "saturating_model_exists",
    "score_vertices",
    "specialize_xu",
    "xu_rhs",
    # quantum
    "ContextPOVM",
    "CycleFragment",
    "QuantumMeasurement",
    "QuantumRealization",
    "SourceEnsemble",
    "check_operational_equivalences",
    "depolarize",
    "evaluate_realization",
    "joint_povm_from_commuting",
    "joint_povm_zero_coincidence",
    "kcbs_realization",
    "realization_from_json",
    "realization_to_json",
    "translate_tri_to_quad",
    "tri_form",
    # errors
    "DegenerateScenarioError",
    "IncompatibleMeasurementsError",
    "InfeasibleSystemError",
    "LogicalProofError",
    "NCIError",
    "NotAStatisticalProofError",
    "RealizationError",
    "ScenarioParseError",
    "ScenarioValidationError",
    "TranslationError",
]

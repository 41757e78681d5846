"""Maximal-clique estimation and clique-based point cloud registration."""

from .bench import (
    AlgorithmRun,
    BenchRecord,
    SweepAggregate,
    SweepConfig,
    bench_dimacs,
    bench_synthetic,
    records_to_csv,
    run_algorithm,
    scenario_seed,
    write_records,
)
from .clipper_plus import (
    ClipperPlusReport,
    PrunedGraph,
    accuracy_ratio,
    clipper_plus,
    max_clique_exact,
    prune_by_core,
)
from .dimacs import DimacsWarning, load_dimacs, parse_dimacs
from .errors import (
    BudgetExceeded,
    DimacsParseError,
    InputError,
    RegistrationError,
    SolverFailure,
)
from .graph import (
    Clique,
    CliqueCheck,
    CoreNumbers,
    Graph,
    core_numbers,
    sparsity,
    validate_clique,
)
from .greedy import GreedyResult, greedy_maximal_clique
from .registration import (
    Association,
    PointCloud,
    RegistrationErrors,
    RegistrationResult,
    RigidTransform,
    Scenario,
    build_consistency_graph,
    estimate_rigid_transform,
    load_scenario,
    mean_nearest_neighbor_distance,
    register_clouds,
    registration_errors,
    save_scenario,
    synthetic_scene,
)
from .relaxation import (
    PenalizedMatrix,
    RelaxationDiagnostics,
    SolverParams,
    objective,
    penalized_matrix,
    projected_gradient,
    solve_relaxation,
    uniform_initial_guess,
)

__all__ = [
    "AlgorithmRun",
    "Association",
    "BenchRecord",
    "BudgetExceeded",
    "Clique",
    "CliqueCheck",
    "ClipperPlusReport",
    "CoreNumbers",
    "DimacsParseError",
    "DimacsWarning",
    "Graph",
    "GreedyResult",
    "InputError",
    "PenalizedMatrix",
    "PointCloud",
    "PrunedGraph",
    "RegistrationError",
    "RegistrationErrors",
    "RegistrationResult",
    "RelaxationDiagnostics",
    "RigidTransform",
    "Scenario",
    "SolverFailure",
    "SolverParams",
    "SweepAggregate",
    "SweepConfig",
    "accuracy_ratio",
    "bench_dimacs",
    "bench_synthetic",
    "build_consistency_graph",
    "clipper_plus",
    "core_numbers",
    "estimate_rigid_transform",
    "greedy_maximal_clique",
    "load_dimacs",
    "load_scenario",
    "max_clique_exact",
    "mean_nearest_neighbor_distance",
    "objective",
    "parse_dimacs",
    "penalized_matrix",
    "projected_gradient",
    "prune_by_core",
    "records_to_csv",
    "register_clouds",
    "registration_errors",
    "run_algorithm",
    "save_scenario",
    "scenario_seed",
    "solve_relaxation",
    "sparsity",
    "synthetic_scene",
    "uniform_initial_guess",
    "validate_clique",
    "write_records",
]

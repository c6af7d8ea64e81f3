"""trsat - a meta-path graph transformer for MaxSAT and SAT.

Formulas become signed variable/clause bipartite graphs; a graph transformer predicts
soft assignments trained without labels by a differentiable clause-satisfaction loss,
and an iterative loop turns one-shot MaxSAT predictions into exact SAT answers.

Usage:
    import trsat

    f = trsat.read_dimacs(Path("instance.cnf"))
    model = trsat.load_checkpoint(Path("model.trsat"))
    assignment, stats = trsat.solve_max_sat(model, f, seed=0)
    result = trsat.solve_exact(model, f)
    print(trsat.format_report(result))
"""

from __future__ import annotations

__version__ = "0.1.0a1"
__license__ = "MIT"

from trsat.cnf import (
    Assignment,
    Clause,
    CnfFormula,
    CompletionStats,
    Literal,
    Polarity,
    brute_force_max_sat,
    count_satisfied,
    is_satisfiable,
    parse_dimacs,
    read_dimacs,
    write_dimacs,
    write_dimacs_file,
)
from trsat.core.config import (
    config,
    set_external_solver_path,
    set_oracle_cap,
    set_timeout,
    set_verbose,
)
from trsat.exceptions import (
    AssignmentError,
    AutodiffError,
    CheckpointError,
    CheckpointFormatError,
    CheckpointVersionError,
    CnfError,
    ConfigurationError,
    DimacsError,
    GeneratorError,
    ModelConfigError,
    NetlistError,
    OracleCapError,
    ShapeError,
    SolverExecutionError,
    SolverNotFoundError,
    TrainingError,
    TrsatError,
)
from trsat.generators import (
    encode_circuit,
    encode_k_clique,
    encode_k_coloring,
    encode_k_cover,
    gen_random_3sat,
    gen_random_graph,
    parse_netlist,
)
from trsat.graph import build_biadjacency, build_graph_artifacts, meta_paths
from trsat.nn import (
    ModelConfig,
    TrsatModel,
    forward,
    init_model,
    load_checkpoint,
    neg_log_loss,
    phi_approx,
    save_checkpoint,
    threshold,
)
from trsat.solve import (
    SatResult,
    SatStatus,
    WalkSatConfig,
    format_report,
    solve_exact,
    solve_max_sat,
    verify_result,
    walksat,
)
from trsat.training import TrainConfig, evaluate, train

__all__ = [
    "Assignment",
    "AssignmentError",
    "AutodiffError",
    "CheckpointError",
    "CheckpointFormatError",
    "CheckpointVersionError",
    "Clause",
    "CnfError",
    "CnfFormula",
    "CompletionStats",
    "ConfigurationError",
    "DimacsError",
    "GeneratorError",
    "Literal",
    "ModelConfig",
    "ModelConfigError",
    "NetlistError",
    "OracleCapError",
    "Polarity",
    "SatResult",
    "SatStatus",
    "ShapeError",
    "SolverExecutionError",
    "SolverNotFoundError",
    "TrainConfig",
    "TrainingError",
    "TrsatError",
    "TrsatModel",
    "WalkSatConfig",
    "__version__",
    "brute_force_max_sat",
    "build_biadjacency",
    "build_graph_artifacts",
    "config",
    "count_satisfied",
    "encode_circuit",
    "encode_k_clique",
    "encode_k_coloring",
    "encode_k_cover",
    "evaluate",
    "format_report",
    "forward",
    "gen_random_3sat",
    "gen_random_graph",
    "init_model",
    "is_satisfiable",
    "load_checkpoint",
    "meta_paths",
    "neg_log_loss",
    "parse_dimacs",
    "parse_netlist",
    "phi_approx",
    "read_dimacs",
    "save_checkpoint",
    "set_external_solver_path",
    "set_oracle_cap",
    "set_timeout",
    "set_verbose",
    "solve_exact",
    "solve_max_sat",
    "threshold",
    "train",
    "verify_result",
    "walksat",
    "write_dimacs",
    "write_dimacs_file",
]

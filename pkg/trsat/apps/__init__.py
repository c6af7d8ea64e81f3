"""Command implementations behind the ``trsat`` CLI."""

from __future__ import annotations

from trsat.apps.generate import (
    GENERATOR_KINDS,
    generate_circuit,
    generate_graph_problem,
    generate_rand3,
    parse_constraint,
    read_netlist,
)
from trsat.apps.learning import evaluate_datasets, train_model
from trsat.apps.manifest import RunManifest, sha256_file
from trsat.apps.solving import (
    SOLVE_MODES,
    BenchRow,
    benchmark,
    load_model,
    oracle_report,
    solve_formula_file,
)

__all__ = [
    "GENERATOR_KINDS",
    "SOLVE_MODES",
    "BenchRow",
    "RunManifest",
    "benchmark",
    "evaluate_datasets",
    "generate_circuit",
    "generate_graph_problem",
    "generate_rand3",
    "load_model",
    "oracle_report",
    "parse_constraint",
    "read_netlist",
    "sha256_file",
    "solve_formula_file",
    "train_model",
]

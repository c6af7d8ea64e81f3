"""Instance generators: random 3-SAT, graph-problem encodings and circuits."""

from __future__ import annotations

from trsat.generators.circuits import (
    Gate,
    GateKind,
    GateNetlist,
    encode_circuit,
    format_netlist,
    parse_netlist,
    read_word,
    ripple_carry_adder,
    simulate,
    topological_netlist,
    word_constraints,
)
from trsat.generators.graphs import (
    RandomGraph,
    decode_clique,
    decode_coloring,
    decode_cover,
    encode_k_clique,
    encode_k_coloring,
    encode_k_cover,
    gen_random_graph,
    has_k_clique,
    has_vertex_cover,
    is_k_colorable,
)
from trsat.generators.random_sat import gen_random_3sat

__all__ = [
    "Gate",
    "GateKind",
    "GateNetlist",
    "RandomGraph",
    "decode_clique",
    "decode_coloring",
    "decode_cover",
    "encode_circuit",
    "encode_k_clique",
    "encode_k_coloring",
    "encode_k_cover",
    "format_netlist",
    "gen_random_3sat",
    "gen_random_graph",
    "has_k_clique",
    "has_vertex_cover",
    "is_k_colorable",
    "parse_netlist",
    "read_word",
    "ripple_carry_adder",
    "simulate",
    "topological_netlist",
    "word_constraints",
]

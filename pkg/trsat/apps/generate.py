"""Instance generation to DIMACS files."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Final

from trsat.cnf.dimacs import write_dimacs_file
from trsat.exceptions import GeneratorError
from trsat.generators.circuits import (
    encode_circuit,
    parse_netlist,
    ripple_carry_adder,
    word_constraints,
)
from trsat.generators.graphs import (
    encode_k_clique,
    encode_k_coloring,
    encode_k_cover,
    gen_random_graph,
)
from trsat.generators.random_sat import gen_random_3sat

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from trsat.cnf.formula import CnfFormula
    from trsat.generators.circuits import GateNetlist

logger = logging.getLogger(__name__)

GENERATOR_KINDS: Final = ("rand3", "color", "cover", "clique", "circuit")

_GRAPH_ENCODERS = {
    "color": encode_k_coloring,
    "cover": encode_k_cover,
    "clique": encode_k_clique,
}


def parse_constraint(text: str) -> tuple[str, bool]:
    """Parse ``wire=0`` / ``wire=1``."""
    wire, sep, value = text.partition("=")
    if not sep or not wire or value not in ("0", "1"):
        raise GeneratorError(f"Constraint must look like wire=0 or wire=1, got {text!r}")
    return wire, value == "1"


def generate_rand3(out_dir: Path, n: int, m: int, count: int, seed: int) -> list[Path]:
    """``count`` random 3-SAT files; file ``i`` uses seed ``seed + i``."""
    paths = []
    for i in range(count):
        f = gen_random_3sat(n, m, seed + i)
        paths.append(_write(out_dir, f"rand3-{i:04d}.cnf", f, f"rand3 n={n} m={m} seed={seed + i}"))
    return paths


def generate_graph_problem(
    kind: str, out_dir: Path, vertices: int, p: float, k: int, count: int, seed: int
) -> list[Path]:
    """``count`` graph-problem encodings over fresh G(N, p) graphs."""
    if kind not in _GRAPH_ENCODERS:
        raise GeneratorError(f"Unknown graph problem {kind!r}")
    encoder = _GRAPH_ENCODERS[kind]
    paths = []
    for i in range(count):
        g = gen_random_graph(vertices, p, seed + i)
        f = encoder(g, k)
        comment = f"{kind} N={vertices} p={p} k={k} edges={g.num_edges} seed={seed + i}"
        paths.append(_write(out_dir, f"{kind}-{i:04d}.cnf", f, comment))
    return paths


def generate_circuit(
    out_dir: Path,
    netlist: GateNetlist | None = None,
    constraints: Sequence[tuple[str, bool]] = (),
    adder_bits: int | None = None,
    adder_sum: int | None = None,
) -> list[Path]:
    """One circuit CNF from a netlist, or from a ripple-carry adder with a fixed sum."""
    if netlist is None:
        if adder_bits is None:
            raise GeneratorError("circuit generation needs a netlist or --adder-bits")
        netlist = ripple_carry_adder(adder_bits)
        if adder_sum is not None:
            constraints = [*constraints, *word_constraints("s", adder_bits + 1, adder_sum)]
    f = encode_circuit(netlist, constraints)
    comment = f"circuit inputs={len(netlist.inputs)} gates={len(netlist.gates)}"
    return [_write(out_dir, "circuit-0000.cnf", f, comment)]


def read_netlist(path: Path) -> GateNetlist:
    return parse_netlist(path.read_text(encoding="utf-8"))


def _write(out_dir: Path, name: str, f: CnfFormula, comment: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    write_dimacs_file(path, f, comments=[comment])
    return path

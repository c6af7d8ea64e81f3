"""Gate netlists and their Tseitin-style CNF translation.

Netlist text format, one statement per line (``#`` starts a comment)::

    INPUT a
    INPUT b
    GATE AND z a b
    OUTPUT z

``GATE`` takes the gate kind, the output wire and one (NOT) or two input wires.
Gates may appear in any order in text; :func:`parse_netlist` sorts them
topologically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

import networkx as nx

from trsat.cnf.formula import Clause, CnfFormula
from trsat.exceptions import NetlistError

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)


class GateKind(str, Enum):
    AND = "AND"
    OR = "OR"
    NOT = "NOT"
    XOR = "XOR"

    @property
    def arity(self) -> int:
        return 1 if self is GateKind.NOT else 2


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    output: str
    inputs: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if len(self.inputs) != self.kind.arity:
            raise NetlistError(
                f"{self.kind.value} gate {self.output!r} takes {self.kind.arity} inputs, "
                f"got {len(self.inputs)}"
            )
        if len(set(self.inputs)) != len(self.inputs):
            raise NetlistError(f"Gate {self.output!r} repeats input wire {self.inputs[0]!r}")
        if self.output in self.inputs:
            raise NetlistError(f"Gate {self.output!r} feeds itself")


@dataclass(frozen=True)
class GateNetlist:
    """Combinational circuit with gates in topological order."""

    inputs: tuple[str, ...]
    gates: tuple[Gate, ...] = field(default_factory=tuple)
    outputs: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))

        defined: set[str] = set()
        for wire in self.inputs:
            if wire in defined:
                raise NetlistError(f"Duplicate wire {wire!r}")
            defined.add(wire)
        for gate in self.gates:
            for wire in gate.inputs:
                if wire not in defined:
                    raise NetlistError(
                        f"Gate {gate.output!r} reads wire {wire!r} before it is driven"
                    )
            if gate.output in defined:
                raise NetlistError(f"Duplicate wire {gate.output!r}")
            defined.add(gate.output)
        for wire in self.outputs:
            if wire not in defined:
                raise NetlistError(f"Unknown output wire {wire!r}")

    @property
    def wires(self) -> tuple[str, ...]:
        """All wires: primary inputs first, then gate outputs in gate order."""
        return self.inputs + tuple(g.output for g in self.gates)

    def wire_variables(self) -> dict[str, int]:
        """1-based CNF variable of each wire."""
        return {wire: i for i, wire in enumerate(self.wires, start=1)}


def topological_netlist(
    inputs: Sequence[str], gates: Iterable[Gate], outputs: Sequence[str]
) -> GateNetlist:
    """Order gates topologically and build the netlist.

    Raises:
        NetlistError: On unknown wires, duplicate drivers or cycles
    """
    gates = list(gates)
    drivers: dict[str, Gate] = {}
    for gate in gates:
        if gate.output in drivers or gate.output in inputs:
            raise NetlistError(f"Duplicate wire {gate.output!r}")
        drivers[gate.output] = gate

    known = set(inputs) | set(drivers)
    dependency = nx.DiGraph()
    dependency.add_nodes_from(drivers)
    for gate in gates:
        for wire in gate.inputs:
            if wire not in known:
                raise NetlistError(f"Gate {gate.output!r} reads unknown wire {wire!r}")
            if wire in drivers:
                dependency.add_edge(wire, gate.output)

    position = {g.output: i for i, g in enumerate(gates)}
    try:
        order = list(nx.lexicographical_topological_sort(dependency, key=position.__getitem__))
    except nx.NetworkXUnfeasible as e:
        cycle = " -> ".join(u for u, _ in nx.find_cycle(dependency))
        raise NetlistError(f"Cyclic netlist: {cycle}") from e

    return GateNetlist(tuple(inputs), tuple(drivers[w] for w in order), tuple(outputs))


def parse_netlist(text: str) -> GateNetlist:
    """Parse the line-oriented netlist format.

    Raises:
        NetlistError: On syntax errors (with the line number), unknown wires or cycles
    """
    inputs: list[str] = []
    gates: list[Gate] = []
    outputs: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        keyword = fields[0].upper()
        if keyword in ("INPUT", "OUTPUT"):
            if len(fields) != 2:
                raise NetlistError(f"{keyword} takes one wire name", line=lineno)
            (inputs if keyword == "INPUT" else outputs).append(fields[1])
        elif keyword == "GATE":
            if len(fields) < 4:
                raise NetlistError("GATE needs kind, output and inputs", line=lineno)
            try:
                kind = GateKind(fields[1].upper())
            except ValueError:
                raise NetlistError(f"unknown gate kind {fields[1]!r}", line=lineno) from None
            try:
                gates.append(Gate(kind, fields[2], tuple(fields[3:])))
            except NetlistError as e:
                raise NetlistError(str(e), line=lineno) from e
        else:
            raise NetlistError(f"unknown statement {fields[0]!r}", line=lineno)

    netlist = topological_netlist(inputs, gates, outputs)
    logger.debug(f"Parsed netlist: {len(netlist.inputs)} inputs, {len(netlist.gates)} gates")
    return netlist


def format_netlist(c: GateNetlist) -> str:
    lines = [f"INPUT {w}" for w in c.inputs]
    lines.extend(f"GATE {g.kind.value} {g.output} {' '.join(g.inputs)}" for g in c.gates)
    lines.extend(f"OUTPUT {w}" for w in c.outputs)
    return "\n".join(lines) + "\n"


def _gate_clauses(kind: GateKind, z: int, ins: Sequence[int]) -> list[tuple[int, ...]]:
    if kind is GateKind.NOT:
        (a,) = ins
        return [(a, z), (-a, -z)]
    a, b = ins
    if kind is GateKind.AND:
        return [(a, -z), (b, -z), (-a, -b, z)]
    if kind is GateKind.OR:
        return [(-a, z), (-b, z), (a, b, -z)]
    return [(-a, -b, -z), (a, b, -z), (a, -b, z), (-a, b, z)]


def encode_circuit(
    c: GateNetlist, output_constraints: Sequence[tuple[str, bool]] = ()
) -> CnfFormula:
    """Translate a netlist to CNF, one variable per wire.

    Args:
        c: Netlist
        output_constraints: ``(wire, value)`` pairs, each added as a unit clause

    Returns:
        Formula satisfiable iff some input vector drives the constrained wires to
        the requested values

    Raises:
        NetlistError: If a constrained wire does not exist or nothing is encoded
    """
    variables = c.wire_variables()
    clauses: list[Clause] = []
    for gate in c.gates:
        z = variables[gate.output]
        ins = [variables[w] for w in gate.inputs]
        clauses.extend(Clause.from_ints(lits) for lits in _gate_clauses(gate.kind, z, ins))
    for wire, value in output_constraints:
        if wire not in variables:
            raise NetlistError(f"Constraint on unknown wire {wire!r}")
        var = variables[wire]
        clauses.append(Clause.from_ints((var if value else -var,)))
    if not clauses:
        raise NetlistError("Netlist without gates or constraints encodes no clauses")

    logger.debug(f"Circuit CNF: {len(variables)} variables, {len(clauses)} clauses")
    return CnfFormula(len(variables), tuple(clauses))


def simulate(c: GateNetlist, inputs: Mapping[str, bool]) -> dict[str, bool]:
    """Evaluate every wire for one input vector.

    Raises:
        NetlistError: If a primary input is missing from ``inputs``
    """
    values: dict[str, bool] = {}
    for wire in c.inputs:
        if wire not in inputs:
            raise NetlistError(f"No value for input {wire!r}")
        values[wire] = bool(inputs[wire])
    for gate in c.gates:
        ins = [values[w] for w in gate.inputs]
        if gate.kind is GateKind.NOT:
            out = not ins[0]
        elif gate.kind is GateKind.AND:
            out = ins[0] and ins[1]
        elif gate.kind is GateKind.OR:
            out = ins[0] or ins[1]
        else:
            out = ins[0] != ins[1]
        values[gate.output] = out
    return values


def ripple_carry_adder(bits: int) -> GateNetlist:
    """Unsigned adder ``s = a + b`` with ``bits``-wide operands.

    Inputs are ``a0..``, ``b0..`` (bit 0 least significant); outputs are
    ``s0..s{bits}`` where ``s{bits}`` is the carry out.
    """
    if bits < 1:
        raise NetlistError(f"Adder width must be >= 1, got {bits}")
    inputs = [f"a{i}" for i in range(bits)] + [f"b{i}" for i in range(bits)]
    gates: list[Gate] = []

    def carry(i: int) -> str:
        return f"s{bits}" if i == bits else f"c{i}"

    gates.append(Gate(GateKind.XOR, "s0", ("a0", "b0")))
    gates.append(Gate(GateKind.AND, carry(1), ("a0", "b0")))
    for i in range(1, bits):
        gates.extend(
            [
                Gate(GateKind.XOR, f"t{i}", (f"a{i}", f"b{i}")),
                Gate(GateKind.XOR, f"s{i}", (f"t{i}", carry(i))),
                Gate(GateKind.AND, f"g{i}", (f"a{i}", f"b{i}")),
                Gate(GateKind.AND, f"p{i}", (f"t{i}", carry(i))),
                Gate(GateKind.OR, carry(i + 1), (f"g{i}", f"p{i}")),
            ]
        )
    outputs = [f"s{i}" for i in range(bits + 1)]
    return GateNetlist(tuple(inputs), tuple(gates), tuple(outputs))


def word_constraints(prefix: str, width: int, value: int) -> list[tuple[str, bool]]:
    """Constraints fixing wires ``prefix0..`` to the binary digits of ``value`` (LSB first)."""
    if not 0 <= value < (1 << width):
        raise NetlistError(f"{value} does not fit in {width} bits")
    return [(f"{prefix}{i}", bool((value >> i) & 1)) for i in range(width)]


def read_word(values: Mapping[str, bool], prefix: str, width: int) -> int:
    """Integer held on wires ``prefix0..`` (LSB first)."""
    return sum(1 << i for i in range(width) if values[f"{prefix}{i}"])

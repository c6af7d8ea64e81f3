"""Random graphs and their k-coloring, k-cover and k-clique CNF encodings.

Variable numbering (1-based, as written to DIMACS):

- coloring: ``x(v, c) = v*k + c + 1``
- cover: ``s(v) = v + 1`` then counter registers ``R(v, j) = N + v*k + j + 1``
- clique: ``y(i, v) = i*N + v + 1``
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import networkx as nx

from trsat.cnf.formula import Clause, CnfFormula
from trsat.exceptions import GeneratorError

if TYPE_CHECKING:
    from collections.abc import Iterable

    from trsat.cnf.formula import Assignment

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RandomGraph:
    """Undirected simple graph on vertices ``0..num_vertices-1``.

    Edges are stored as ``(u, v)`` pairs with ``u < v``.
    """

    num_vertices: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.num_vertices < 0:
            raise GeneratorError(f"Vertex count must be non-negative, got {self.num_vertices}")
        for u, v in self.edges:
            if u == v:
                raise GeneratorError(f"Self-loop on vertex {u}")
            if not u < v:
                raise GeneratorError(f"Edge ({u}, {v}) must be stored with u < v")
            if v >= self.num_vertices:
                raise GeneratorError(f"Edge ({u}, {v}) outside 0..{self.num_vertices - 1}")

    @classmethod
    def from_edges(
        cls, num_vertices: int, edges: Iterable[tuple[int, int]], seed: int | None = None
    ) -> RandomGraph:
        """Build a graph from unordered pairs; duplicates collapse, self-loops are rejected."""
        normalised: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise GeneratorError(f"Self-loop on vertex {u}")
            normalised.add((min(u, v), max(u, v)))
        return cls(num_vertices, frozenset(normalised), seed)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.num_vertices))
        graph.add_edges_from(self.edges)
        return graph

    @property
    def num_edges(self) -> int:
        return len(self.edges)


def gen_random_graph(n: int, p: float, seed: int) -> RandomGraph:
    """Erdős–Rényi G(n, p) graph.

    Args:
        n: Number of vertices
        p: Edge probability in [0, 1]
        seed: RNG seed

    Raises:
        GeneratorError: If ``p`` is outside [0, 1] or ``n`` is negative
    """
    if not 0.0 <= p <= 1.0:
        raise GeneratorError(f"Edge probability must be in [0, 1], got {p}")
    if n < 0:
        raise GeneratorError(f"Vertex count must be non-negative, got {n}")
    graph = nx.gnp_random_graph(n, p, seed=seed)
    return RandomGraph.from_edges(n, graph.edges(), seed=seed)


def _at_most_one(variables: list[int]) -> list[Clause]:
    return [Clause.from_ints((-a, -b)) for a, b in itertools.combinations(variables, 2)]


def encode_k_coloring(g: RandomGraph, k: int) -> CnfFormula:
    """Encode k-colorability of ``g``; ``k * N`` variables.

    Raises:
        GeneratorError: If ``k < 1`` or the graph has no vertices
    """
    if k < 1:
        raise GeneratorError(f"Color count must be >= 1, got {k}")
    n = g.num_vertices
    if n < 1:
        raise GeneratorError("k-coloring needs at least one vertex")

    def x(v: int, c: int) -> int:
        return v * k + c + 1

    clauses: list[Clause] = []
    for v in range(n):
        colors = [x(v, c) for c in range(k)]
        clauses.append(Clause.from_ints(colors))
        clauses.extend(_at_most_one(colors))
    for u, v in sorted(g.edges):
        clauses.extend(Clause.from_ints((-x(u, c), -x(v, c))) for c in range(k))

    logger.debug(f"{k}-coloring: N={n}, |E|={g.num_edges}, {len(clauses)} clauses")
    return CnfFormula(k * n, tuple(clauses))


def encode_k_cover(g: RandomGraph, k: int) -> CnfFormula:
    """Encode "vertex cover of size <= k"; ``(k + 1) * N`` variables.

    The cardinality bound is a sequential counter: register ``R(i, j)`` holds when
    at least ``j + 1`` of the vertices ``0..i`` are selected.

    Raises:
        GeneratorError: Unless ``1 <= k < N``
    """
    n = g.num_vertices
    if not 1 <= k < n:
        raise GeneratorError(f"k-cover needs 1 <= k < N, got k={k}, N={n}")

    def s(v: int) -> int:
        return v + 1

    def r(i: int, j: int) -> int:
        return n + i * k + j + 1

    clauses: list[Clause] = [Clause.from_ints((s(u), s(v))) for u, v in sorted(g.edges)]

    clauses.append(Clause.from_ints((-s(0), r(0, 0))))
    clauses.extend(Clause.from_ints((-r(0, j),)) for j in range(1, k))
    for i in range(1, n):
        clauses.append(Clause.from_ints((-s(i), r(i, 0))))
        for j in range(k):
            clauses.append(Clause.from_ints((-r(i - 1, j), r(i, j))))
        for j in range(1, k):
            clauses.append(Clause.from_ints((-s(i), -r(i - 1, j - 1), r(i, j))))
        clauses.append(Clause.from_ints((-s(i), -r(i - 1, k - 1))))

    logger.debug(f"{k}-cover: N={n}, |E|={g.num_edges}, {len(clauses)} clauses")
    return CnfFormula((k + 1) * n, tuple(clauses))


def encode_k_clique(g: RandomGraph, k: int) -> CnfFormula:
    """Encode "g contains a k-clique"; ``k * N`` slot variables.

    Raises:
        GeneratorError: Unless ``1 <= k <= N``
    """
    n = g.num_vertices
    if not 1 <= k <= n:
        raise GeneratorError(f"k-clique needs 1 <= k <= N, got k={k}, N={n}")

    def y(i: int, v: int) -> int:
        return i * n + v + 1

    clauses: list[Clause] = []
    for i in range(k):
        slot = [y(i, v) for v in range(n)]
        clauses.append(Clause.from_ints(slot))
        clauses.extend(_at_most_one(slot))
    for i, j in itertools.combinations(range(k), 2):
        clauses.extend(Clause.from_ints((-y(i, v), -y(j, v))) for v in range(n))
        for u, v in itertools.permutations(range(n), 2):
            if not g.has_edge(u, v):
                clauses.append(Clause.from_ints((-y(i, u), -y(j, v))))

    logger.debug(f"{k}-clique: N={n}, |E|={g.num_edges}, {len(clauses)} clauses")
    return CnfFormula(k * n, tuple(clauses))


def decode_coloring(g: RandomGraph, k: int, a: Assignment) -> list[int]:
    """Color of each vertex (the first true color variable) from a coloring assignment."""
    values = a.values
    colors = []
    for v in range(g.num_vertices):
        chosen = [c for c in range(k) if values[v * k + c]]
        if not chosen:
            raise GeneratorError(f"Vertex {v} has no color in the assignment")
        colors.append(chosen[0])
    return colors


def decode_cover(g: RandomGraph, a: Assignment) -> frozenset[int]:
    """Selected vertices of a cover assignment."""
    return frozenset(v for v in range(g.num_vertices) if a.values[v])


def decode_clique(g: RandomGraph, k: int, a: Assignment) -> tuple[int, ...]:
    """Vertex held by each slot of a clique assignment."""
    n = g.num_vertices
    members = []
    for i in range(k):
        chosen = [v for v in range(n) if a.values[i * n + v]]
        if len(chosen) != 1:
            raise GeneratorError(f"Slot {i} holds {len(chosen)} vertices")
        members.append(chosen[0])
    return tuple(members)


def is_k_colorable(g: RandomGraph, k: int) -> bool:
    """Backtracking check for a proper k-coloring."""
    n = g.num_vertices
    neighbours = g.to_networkx()
    colors: list[int] = [-1] * n

    def place(v: int) -> bool:
        if v == n:
            return True
        used = {colors[u] for u in neighbours[v] if colors[u] >= 0}
        for c in range(k):
            if c not in used:
                colors[v] = c
                if place(v + 1):
                    return True
        colors[v] = -1
        return False

    return place(0)


def has_vertex_cover(g: RandomGraph, k: int) -> bool:
    """Whether some set of at most k vertices touches every edge."""
    for size in range(min(k, g.num_vertices) + 1):
        for chosen in itertools.combinations(range(g.num_vertices), size):
            picked = set(chosen)
            if all(u in picked or v in picked for u, v in g.edges):
                return True
    return False


def has_k_clique(g: RandomGraph, k: int) -> bool:
    """Whether ``g`` has a clique of at least ``k`` vertices."""
    if k <= 0:
        return True
    return any(len(clique) >= k for clique in nx.find_cliques(g.to_networkx()))

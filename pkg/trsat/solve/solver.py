"""One-shot MaxSAT inference and the iterative clause-removal loop for exact SAT."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

import torch

from trsat.cnf.formula import Assignment, CnfFormula, clause_satisfaction, count_satisfied
from trsat.exceptions import TrsatError
from trsat.graph.bipartite import build_graph_artifacts
from trsat.nn.model import TrsatModel, threshold

if TYPE_CHECKING:
    from collections.abc import Sequence

    from trsat.cnf.formula import CompletionStats

logger = logging.getLogger(__name__)

MaxSatFn = Callable[[CnfFormula, int], Assignment]
Solver = TrsatModel | MaxSatFn

DEFAULT_MAX_ITERS = 20


class SatStatus(str, Enum):
    SATISFIED = "satisfied"
    PARTIAL = "partial"
    UNSOLVABLE_REPORTED = "unsolvable_reported"


@dataclass(frozen=True)
class IterationTrace:
    """Size of the subproblem one pass worked on, and the variables it fixed (1-based)."""

    remaining_vars: int
    remaining_clauses: int
    newly_fixed: tuple[int, ...] = ()


@dataclass(frozen=True)
class SatResult:
    status: SatStatus
    assignment: Assignment
    satisfied_count: int
    total_clauses: int
    iterations: int
    trace: tuple[IterationTrace, ...] = field(default_factory=tuple)
    fixed: frozenset[int] = frozenset()


def solve_max_sat(
    model: TrsatModel, f: CnfFormula, instance_seed: int
) -> tuple[Assignment, CompletionStats]:
    """Forward pass, threshold, count. Parameters are not touched."""
    artifacts = build_graph_artifacts(f)
    with torch.no_grad():
        out = model(f, artifacts.biadjacency, artifacts.meta_paths, instance_seed)
    assignment = threshold(out, model.config.epsilon_threshold)
    return assignment, count_satisfied(f, assignment)


def _as_maxsat_fn(solver: Solver) -> MaxSatFn:
    if isinstance(solver, TrsatModel):
        return lambda f, seed: solve_max_sat(solver, f, seed)[0]
    return solver


def _subformula(
    f: CnfFormula, clause_ids: Sequence[int], var_ids: Sequence[int]
) -> CnfFormula:
    """Clauses ``clause_ids`` of ``f`` over ``var_ids`` (0-based), renumbered densely."""
    renumber = {v + 1: i + 1 for i, v in enumerate(var_ids)}
    clauses = [
        [renumber[abs(lit)] * (1 if lit > 0 else -1) for lit in f.clauses[j].to_ints()]
        for j in clause_ids
    ]
    return CnfFormula.from_ints(len(var_ids), clauses)


def _removable(
    f: CnfFormula,
    active: Sequence[int],
    satisfied: dict[int, bool],
    values: dict[int, bool],
    unsolved_vars: set[int],
) -> set[int]:
    """Satisfied clauses with a true literal on a variable no kept clause mentions.

    Starts from clauses witnessed outside the unsolved variables and shrinks to a
    fixpoint, so every removed clause stays satisfied once its witness is fixed.
    """

    def witnesses(j: int) -> set[int]:
        return {
            lit.variable_index - 1
            for lit in f.clauses[j].literals
            if lit.is_true(values[lit.variable_index - 1])
        }

    removed = {j for j in active if satisfied[j] and witnesses(j) - unsolved_vars}
    while removed:
        kept_vars = {
            lit.variable_index - 1 for j in active if j not in removed for lit in f.clauses[j].literals
        }
        still = {j for j in removed if witnesses(j) - kept_vars}
        if still == removed:
            break
        removed = still
    return removed


def solve_exact(
    model: Solver,
    f: CnfFormula,
    max_iters: int = DEFAULT_MAX_ITERS,
    seed: int = 0,
) -> SatResult:
    """Repeated one-shot MaxSAT on a shrinking formula.

    Each pass solves the current subproblem with seed ``seed + pass``. If every
    clause is satisfied the combined assignment is returned. Otherwise satisfied
    clauses that keep a true literal on a variable outside the unsatisfied clauses
    are removed, the variables no remaining clause mentions are fixed, and the
    loop continues on what is left. The loop stops early when the unsatisfied
    clauses mention every variable, when nothing can be removed, or after
    ``max_iters`` passes. Unlike removing every satisfied clause, a clause is only
    dropped while some true literal of it sits on a variable that no remaining
    clause mentions, so fixing that variable cannot undo it.

    Args:
        model: Trained model, or any ``(formula, seed) -> Assignment`` callable
        f: Formula
        max_iters: Pass limit (>= 1)
        seed: Base noise seed

    Returns:
        Result over the original variables. A ``satisfied`` result carries the
        combined assignment; any other status carries the best assignment any pass
        produced, with ``fixed`` as it stood at that pass
    """
    if max_iters < 1:
        raise TrsatError(f"max_iters must be >= 1, got {max_iters}")
    maxsat = _as_maxsat_fn(model)

    fixed: dict[int, bool] = {}
    active_vars = list(range(f.num_variables))
    active_clauses = list(range(f.num_clauses))
    composite = [False] * f.num_variables
    best: tuple[int, tuple[bool, ...], frozenset[int]] = (-1, tuple(composite), frozenset())
    trace: list[IterationTrace] = []
    status = SatStatus.PARTIAL

    for it in range(max_iters):
        sub = _subformula(f, active_clauses, active_vars)
        a = maxsat(sub, seed + it)
        if len(a) != sub.num_variables:
            raise TrsatError(f"Solver returned {len(a)} values for {sub.num_variables} variables")

        values = dict(fixed)
        values.update({v: a.values[i] for i, v in enumerate(active_vars)})
        composite = [values.get(v, False) for v in range(f.num_variables)]
        score = count_satisfied(f, Assignment(tuple(composite))).satisfied
        if score > best[0]:
            best = (score, tuple(composite), frozenset(v + 1 for v in fixed))

        sat_flags = clause_satisfaction(sub, a.as_array())
        satisfied = {j: bool(sat_flags[k]) for k, j in enumerate(active_clauses)}
        unsolved = [j for j in active_clauses if not satisfied[j]]
        if not unsolved:
            trace.append(IterationTrace(len(active_vars), len(active_clauses)))
            status = SatStatus.SATISFIED
            break

        unsolved_vars = {lit.variable_index - 1 for j in unsolved for lit in f.clauses[j].literals}
        if not set(active_vars) - unsolved_vars:
            trace.append(IterationTrace(len(active_vars), len(active_clauses)))
            status = SatStatus.UNSOLVABLE_REPORTED
            break

        removed = _removable(f, active_clauses, satisfied, values, unsolved_vars)
        if not removed:
            trace.append(IterationTrace(len(active_vars), len(active_clauses)))
            logger.debug(f"Pass {it + 1}: no clause can be removed, stopping")
            break

        kept = [j for j in active_clauses if j not in removed]
        kept_vars = {lit.variable_index - 1 for j in kept for lit in f.clauses[j].literals}
        newly_fixed = [v for v in active_vars if v not in kept_vars]
        for v in newly_fixed:
            fixed[v] = values[v]
        trace.append(
            IterationTrace(len(active_vars), len(active_clauses), tuple(v + 1 for v in newly_fixed))
        )
        logger.debug(
            f"Pass {it + 1}: removed {len(removed)} clauses, fixed {len(newly_fixed)} variables"
        )
        active_clauses = kept
        active_vars = sorted(kept_vars)

    assignment = Assignment(tuple(composite))
    stats = count_satisfied(f, assignment)
    reported_fixed = frozenset(v + 1 for v in fixed)
    if status is SatStatus.SATISFIED and not stats.all_satisfied:
        logger.error(f"Combined assignment leaves clauses {stats.unsat_clause_ids} unsatisfied")
        status = SatStatus.PARTIAL
    if status is not SatStatus.SATISFIED:
        _, best_values, reported_fixed = best
        assignment = Assignment(best_values)
        stats = count_satisfied(f, assignment)

    result = SatResult(
        status=status,
        assignment=assignment,
        satisfied_count=stats.satisfied,
        total_clauses=f.num_clauses,
        iterations=len(trace),
        trace=tuple(trace),
        fixed=reported_fixed,
    )
    logger.info(
        f"solve_exact: {status.value} after {result.iterations} passes "
        f"({stats.satisfied}/{f.num_clauses} clauses)"
    )
    return result


def verify_result(f_original: CnfFormula, r: SatResult) -> bool:
    """Re-check a ``satisfied`` claim against the original formula; other statuses pass."""
    if r.status is not SatStatus.SATISFIED:
        return True
    if len(r.assignment) != f_original.num_variables:
        logger.error(
            f"Satisfied result covers {len(r.assignment)} of {f_original.num_variables} variables"
        )
        return False
    return count_satisfied(f_original, r.assignment).all_satisfied


def format_report(r: SatResult) -> str:
    """Plain-text report: status, counts, a DIMACS ``v`` line and the pass trace."""
    lines = [
        f"status {r.status.value}",
        f"satisfied {r.satisfied_count} of {r.total_clauses}",
        f"iterations {r.iterations}",
        "v " + " ".join(str(lit) for lit in r.assignment.to_literals()) + " 0",
    ]
    for i, step in enumerate(r.trace, start=1):
        fixed = ",".join(str(v) for v in step.newly_fixed) or "-"
        lines.append(
            f"pass {i} vars={step.remaining_vars} clauses={step.remaining_clauses} fixed={fixed}"
        )
    return "\n".join(lines) + "\n"

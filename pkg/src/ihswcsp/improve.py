"""Core improvement: transform a core into a dominating core, optionally
discovering better solutions along the way.

Every strategy starts from the lazy core the oracle provides for free, then
raises components one level at a time, always picking the candidate with the
lowest current value (ties toward the smaller index), probing after each
raise and keeping it only while the vector stays a core.
"""

from __future__ import annotations

from dataclasses import dataclass

from .encoding import InducedCspEncoding, Satisfiable
from .model import Assignment, CostVector, cost

STRATEGIES = ("lazy", "cost-bounded", "partial-max", "maximal")


@dataclass
class ImproveOutcome:
    core: CostVector
    new_ub: int | None
    new_ub_assignment: Assignment | None
    probes: int


def improve_lazy(h: CostVector, oracle: InducedCspEncoding) -> ImproveOutcome:
    """No improvement beyond the failed-assumption core; zero extra probes
    when the oracle just answered for ``h``."""
    before = oracle.num_solves
    core = oracle.lazy_core_of(h)
    return ImproveOutcome(core, None, None, oracle.num_solves - before)


def _raise_loop(
    h: CostVector,
    oracle: InducedCspEncoding,
    ub: int | None,
    stop_on_sat: bool,
) -> ImproveOutcome:
    funcs = oracle.instance.cost_functions
    before = oracle.num_solves
    k = list(oracle.lazy_core_of(h))
    best_cost: int | None = None
    best_assignment: Assignment | None = None
    next_index = [
        {lv: j for j, lv in enumerate(f.levels)} for f in funcs
    ]
    candidates = [i for i in range(len(k)) if k[i] < funcs[i].levels[-1]]
    while candidates:
        if ub is not None and sum(k) >= ub:
            break
        i = min(candidates, key=lambda i: (k[i], i))
        raised = funcs[i].levels[next_index[i][k[i]] + 1]
        probe = list(k)
        probe[i] = raised
        res = oracle.solve_induced(tuple(probe))
        if isinstance(res, Satisfiable):
            sv_cost = cost(res.solution_vector)
            if best_cost is None or sv_cost < best_cost:
                best_cost, best_assignment = sv_cost, res.assignment
            candidates.remove(i)
            if stop_on_sat:
                break
        else:
            k[i] = raised
            if k[i] >= funcs[i].levels[-1]:
                candidates.remove(i)
    return ImproveOutcome(tuple(k), best_cost, best_assignment, oracle.num_solves - before)


def improve_maximal(h: CostVector, oracle: InducedCspEncoding) -> ImproveOutcome:
    """Destructive raise-and-probe until no component can rise: the result is
    a maximal core."""
    return _raise_loop(h, oracle, ub=None, stop_on_sat=False)


def improve_cost_bounded(
    h: CostVector, ub: int | None, oracle: InducedCspEncoding
) -> ImproveOutcome:
    """Raise-and-probe until the core's cost reaches ``ub`` (or nothing can
    rise); with an infinite bound this equals improve_maximal."""
    return _raise_loop(h, oracle, ub=ub, stop_on_sat=False)


def improve_partial_maximal(h: CostVector, oracle: InducedCspEncoding) -> ImproveOutcome:
    """Raise-and-probe, stopping the first time a probe is satisfiable;
    components at their maximum are skipped, not counted as a stop."""
    return _raise_loop(h, oracle, ub=None, stop_on_sat=True)


def improve_core(
    strategy: str, h: CostVector, ub: int | None, oracle: InducedCspEncoding
) -> ImproveOutcome:
    if strategy == "lazy":
        return improve_lazy(h, oracle)
    if strategy == "cost-bounded":
        return improve_cost_bounded(h, ub, oracle)
    if strategy == "partial-max":
        return improve_partial_maximal(h, oracle)
    if strategy == "maximal":
        return improve_maximal(h, oracle)
    raise ValueError(f"unknown core strategy {strategy!r}")

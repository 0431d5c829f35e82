"""The implicit-hitting-set main loops.

Four hitting-vector flavors (exact lower-bound driven, cost-bounded
upper-bound driven, and the two greedy variants falling back to either exact
flavor after a useless greedy iteration) combined with four core-improvement
strategies and optional cost-function merging and disjoint-core extraction.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .encoding import InducedCspEncoding, Satisfiable, SolveDeadlineExceeded, Unsatisfiable
from .hitting import HittingProblem, LevelSpace, cost_bounded_hv, greedy_hv, min_cost_hv
from .improve import STRATEGIES, improve_core
from .merge import build_merged
from .model import Assignment, CoreSet, CostVector, WcspInstance, cost

HV_STRATEGIES = ("lb", "ub", "grd-lb", "grd-ub")


class IterationCapExceeded(RuntimeError):
    """The run exceeded the configured iteration cap."""


@dataclass(frozen=True)
class SolverConfig:
    hv: str = "lb"
    core: str = "maximal"
    merge: bool = False
    disjoint: bool = False
    merge_cap: int = 4096
    time_limit: float = 3600.0
    seed: int = 0
    iteration_cap: int = 10_000_000
    keep_cores: bool = False

    def validate(self) -> None:
        if self.hv not in HV_STRATEGIES:
            raise ValueError(f"unknown hitting-vector strategy {self.hv!r}")
        if self.core not in STRATEGIES:
            raise ValueError(f"unknown core strategy {self.core!r}")
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.merge_cap < 1:
            raise ValueError("merge_cap must be >= 1")


@dataclass
class RunReport:
    """Per-run outcome and counters.

    ``sat_calls`` counts every induced-CSP solve (including improvement
    probes and the feasibility pre-check); ``improve_probes`` is the subset
    spent inside core improvement and the disjoint-core phase.  Bounds and
    the optimum include the instance's constant offset."""

    status: str
    optimum: int | None
    final_lb: int | None
    final_ub: int | None
    iterations: int
    hv_calls: int
    sat_calls: int
    improve_probes: int
    core_set_size: int
    core_insertions: int
    components: int
    exact_fallbacks: int
    bounds_trace: list[tuple[int | None, int | None]]
    hv_time: float
    sat_time: float
    improve_time: float
    total_time: float
    best_assignment: Assignment | None = None
    final_cores: list[CostVector] | None = None
    inserted_cores: list[CostVector] | None = None


class _Run:
    def __init__(self, view: WcspInstance, cfg: SolverConfig, started: float):
        self.cfg = cfg
        self.view = view
        self.enc = InducedCspEncoding(view)
        self.enc.deadline = started + cfg.time_limit
        self.space = LevelSpace.from_instance(view)
        self.cores = CoreSet()
        self.lb = 0
        self.ub: int | None = None
        self.best_assignment: Assignment | None = None
        self.iterations = 0
        self.hv_calls = 0
        self.improve_probes = 0
        self.exact_fallbacks = 0
        self.trace: list[tuple[int | None, int | None]] = []
        self.hv_time = 0.0
        self.sat_time = 0.0
        self.improve_time = 0.0
        self.inserted: list[CostVector] = []

    # -- timed primitives ------------------------------------------------------

    def oracle(self, v: CostVector):
        t = time.perf_counter()
        try:
            return self.enc.solve_induced(v)
        finally:
            self.sat_time += time.perf_counter() - t

    def hitting(self, kind: str):
        if self.enc.deadline is not None and time.perf_counter() > self.enc.deadline:
            raise SolveDeadlineExceeded
        problem = HittingProblem(self.space, self.cores)
        t = time.perf_counter()
        try:
            if kind == "min":
                return min_cost_hv(problem)
            if kind == "bounded":
                return cost_bounded_hv(problem, self.ub)
            return greedy_hv(problem)
        finally:
            self.hv_time += time.perf_counter() - t
            self.hv_calls += 1

    def _record_solution(self, sv_cost: int, assignment: Assignment | None) -> None:
        if self.ub is None or sv_cost < self.ub:
            self.ub = sv_cost
            self.best_assignment = assignment

    def improve_and_add(self, h: CostVector) -> None:
        t = time.perf_counter()
        before = self.enc.num_solves
        outcome = improve_core(self.cfg.core, h, self.ub, self.enc)
        self.cores.add(outcome.core)
        if self.cfg.keep_cores:
            self.inserted.append(outcome.core)
        if outcome.new_ub is not None:
            self._record_solution(outcome.new_ub, outcome.new_ub_assignment)
        if self.cfg.disjoint:
            self._disjoint_phase(h, outcome.core)
        self.improve_probes += self.enc.num_solves - before
        self.improve_time += time.perf_counter() - t

    def _disjoint_phase(self, h: CostVector, k: CostVector, limit: int | None = None) -> None:
        max_levels = tuple(f.levels[-1] for f in self.view.cost_functions)
        if limit is None:
            limit = len(max_levels)
        used = {i for i in range(len(k)) if k[i] < max_levels[i]}
        extras = 0
        while extras < limit:
            probe = tuple(
                max_levels[i] if i in used else h[i] for i in range(len(h))
            )
            res = self.enc.solve_induced(probe)
            if isinstance(res, Satisfiable):
                self._record_solution(cost(res.solution_vector), res.assignment)
                return
            outcome = improve_core(self.cfg.core, probe, self.ub, self.enc)
            self.cores.add(outcome.core)
            if self.cfg.keep_cores:
                self.inserted.append(outcome.core)
            if outcome.new_ub is not None:
                self._record_solution(outcome.new_ub, outcome.new_ub_assignment)
            extras += 1
            active = {i for i in range(len(outcome.core)) if outcome.core[i] < max_levels[i]}
            if not active:
                return
            used |= active

    # -- iteration bookkeeping ---------------------------------------------------

    def tick(self) -> None:
        self.iterations += 1
        if self.iterations > self.cfg.iteration_cap:
            raise IterationCapExceeded(f"iteration cap {self.cfg.iteration_cap} exceeded")

    def snap(self) -> None:
        self.trace.append((self.lb, self.ub))

    def open_bounds(self) -> bool:
        return self.ub is None or self.lb < self.ub


def disjoint_core_phase(
    h: CostVector,
    k: CostVector,
    enc: InducedCspEncoding,
    limit: int,
    strategy: str = "maximal",
) -> list[CostVector]:
    """Standalone disjoint-core extraction: repeatedly re-solve with all
    previously active components released to their maximum, improving each
    new conflict into a core whose active components are disjoint from the
    earlier ones by construction."""
    max_levels = tuple(f.levels[-1] for f in enc.instance.cost_functions)
    used = {i for i in range(len(k)) if k[i] < max_levels[i]}
    out: list[CostVector] = []
    while len(out) < limit:
        probe = tuple(max_levels[i] if i in used else h[i] for i in range(len(h)))
        res = enc.solve_induced(probe)
        if isinstance(res, Satisfiable):
            break
        outcome = improve_core(strategy, probe, None, enc)
        out.append(outcome.core)
        active = {i for i in range(len(outcome.core)) if outcome.core[i] < max_levels[i]}
        if not active:
            break
        used |= active
    return out


# ---------------------------------------------------------------------------
# the four loops


def _loop_lb(run: _Run) -> None:
    while run.open_bounds():
        run.tick()
        h = run.hitting("min")
        run.lb = cost(h)
        res = run.oracle(h)
        if isinstance(res, Satisfiable):
            run.ub = cost(h)
            run.best_assignment = res.assignment
        else:
            run.improve_and_add(h)
        run.snap()


def _exact_ub_iteration(run: _Run) -> bool:
    """One cost-bounded iteration; returns True when the NUL answer closed
    the bounds."""
    h = run.hitting("bounded")
    if h is None:
        run.lb = run.ub
        return True
    res = run.oracle(h)
    if isinstance(res, Satisfiable):
        run._record_solution(cost(res.solution_vector), res.assignment)
    else:
        run.improve_and_add(h)
    return False


def _loop_ub(run: _Run) -> None:
    while run.open_bounds():
        run.tick()
        done = _exact_ub_iteration(run)
        run.snap()
        if done:
            return


def _loop_grd(run: _Run, fallback: str) -> None:
    force_exact = False
    while run.open_bounds():
        run.tick()
        if force_exact:
            force_exact = False
            run.exact_fallbacks += 1
            if fallback == "lb":
                h = run.hitting("min")
                run.lb = cost(h)
                res = run.oracle(h)
                if isinstance(res, Satisfiable):
                    run.ub = cost(h)
                    run.best_assignment = res.assignment
                else:
                    run.improve_and_add(h)
                run.snap()
            else:
                done = _exact_ub_iteration(run)
                run.snap()
                if done:
                    return
            continue
        h = run.hitting("greedy")
        res = run.oracle(h)
        if isinstance(res, Satisfiable):
            sv_cost = cost(res.solution_vector)
            if run.ub is None or sv_cost < run.ub:
                run.ub = sv_cost
                run.best_assignment = res.assignment
            else:
                force_exact = True
        else:
            run.improve_and_add(h)
        run.snap()


# ---------------------------------------------------------------------------
# entry point


def solve(instance: WcspInstance, cfg: SolverConfig | None = None) -> RunReport:
    """Solve a WCSP to optimality with the configured IHS variant.

    Deterministic for a fixed (instance, config); the reported optimum equals
    the instance's true minimum cost, merging on or off."""
    cfg = cfg or SolverConfig()
    cfg.validate()
    started = time.perf_counter()
    if cfg.merge:
        view = build_merged(instance, cfg.merge_cap).view
    else:
        view = instance
    run = _Run(view, cfg, started)
    offset = view.constant_offset
    status = "optimal"
    try:
        res = run.oracle(run.enc.max_vector())
        if isinstance(res, Unsatisfiable):
            return _report(run, "infeasible", None, started, offset)
        if cfg.hv == "lb":
            _loop_lb(run)
        elif cfg.hv == "ub":
            _loop_ub(run)
        elif cfg.hv == "grd-lb":
            _loop_grd(run, "lb")
        else:
            _loop_grd(run, "ub")
    except SolveDeadlineExceeded:
        status = "timeout"
    if status == "optimal":
        optimum = run.lb + offset
    else:
        optimum = None
    return _report(run, status, optimum, started, offset)


def _report(
    run: _Run, status: str, optimum: int | None, started: float, offset: int
) -> RunReport:
    def off(x: int | None) -> int | None:
        return None if x is None else x + offset

    return RunReport(
        status=status,
        optimum=optimum,
        final_lb=off(run.lb),
        final_ub=off(run.ub),
        iterations=run.iterations,
        hv_calls=run.hv_calls,
        sat_calls=run.enc.num_solves,
        improve_probes=run.improve_probes,
        core_set_size=len(run.cores),
        core_insertions=run.cores.insertions,
        components=run.enc.num_components,
        exact_fallbacks=run.exact_fallbacks,
        bounds_trace=[(off(lb), off(ub)) for lb, ub in run.trace],
        hv_time=run.hv_time,
        sat_time=run.sat_time,
        improve_time=run.improve_time,
        total_time=time.perf_counter() - started,
        best_assignment=run.best_assignment,
        final_cores=list(run.cores) if run.cfg.keep_cores else None,
        inserted_cores=list(run.inserted) if run.cfg.keep_cores else None,
    )

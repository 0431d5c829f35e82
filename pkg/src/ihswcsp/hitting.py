"""Hitting vectors over a core set: exact minimum-cost, cost-bounded decision,
and greedy ratio heuristic.

All three operate on the level grid: a vector hits a core iff some component
reaches that core's witness level (the smallest level strictly above the
core's entry).  The exact search is a depth-first branch and bound over cores
with a disjoint-residual lower bound; it replaces an external 0/1 IP solver.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .model import CostVector, WcspInstance


class Unhittable(RuntimeError):
    """A core sits at the all-max vector; no vector can hit it.  This cannot
    happen for cores produced by a sound run and signals an internal bug."""


@dataclass(frozen=True)
class LevelSpace:
    """Per-component sorted level lists defining the cost-vector grid."""

    levels: tuple[tuple[int, ...], ...]

    @classmethod
    def from_instance(cls, w: WcspInstance) -> "LevelSpace":
        return cls(tuple(f.levels for f in w.cost_functions))

    @property
    def baseline(self) -> CostVector:
        return tuple(ls[0] for ls in self.levels)

    def witness_level(self, i: int, value: int) -> int | None:
        """Smallest level of component i strictly above ``value``."""
        ls = self.levels[i]
        j = bisect_right(ls, value)
        return ls[j] if j < len(ls) else None


class HittingProblem:
    """A level space plus the cores to hit, with per-core witness tables."""

    def __init__(self, space: LevelSpace, cores: Iterable[CostVector]):
        self.space = space
        self.cores = [tuple(k) for k in cores]
        self.witnesses: list[dict[int, int]] = []
        for k in self.cores:
            ws = {}
            for i in range(len(space.levels)):
                wl = space.witness_level(i, k[i])
                if wl is not None:
                    ws[i] = wl
            self.witnesses.append(ws)

    def _check_hittable(self) -> None:
        for k, ws in zip(self.cores, self.witnesses):
            if not ws:
                raise Unhittable(f"core {k} is at the maximum level everywhere")

    def _unhit(self, h: list[int]) -> list[int]:
        out = []
        for idx, k in enumerate(self.cores):
            if all(h[i] <= k[i] for i in range(len(h))):
                out.append(idx)
        return out

    def _residual_bound(self, h: list[int], unhit: list[int]) -> int:
        """Admissible bound: cheapest witness increments of a greedily chosen
        set of unhit cores with pairwise-disjoint witness components."""
        items = []
        for idx in unhit:
            ws = self.witnesses[idx]
            delta = min(wl - h[i] for i, wl in ws.items())
            items.append((-delta, idx))
        items.sort()
        used: set[int] = set()
        bound = 0
        for neg_delta, idx in items:
            supp = self.witnesses[idx].keys()
            if used.isdisjoint(supp):
                bound -= neg_delta
                used.update(supp)
        return bound


def min_cost_hv(problem: HittingProblem) -> CostVector:
    """Minimum-cost vector hitting every core; ties broken toward the
    lexicographically smallest vector."""
    problem._check_hittable()
    space = problem.space
    h = list(space.baseline)
    cores = problem.cores
    witnesses = problem.witnesses
    best_cost: int | None = None
    best_vec: CostVector | None = None
    visited: set[CostVector] = set()

    def dfs(current_cost: int, unhit: list[int]) -> None:
        nonlocal best_cost, best_vec
        if not unhit:
            vec = tuple(h)
            if best_cost is None or current_cost < best_cost or (
                current_cost == best_cost and vec < best_vec
            ):
                best_cost, best_vec = current_cost, vec
            return
        if best_cost is not None:
            if current_cost + problem._residual_bound(h, unhit) > best_cost:
                return
        state = tuple(h)
        if state in visited:  # the same vector is reachable by permuted raises
            return
        visited.add(state)
        pick = min(unhit, key=lambda idx: (len(witnesses[idx]), idx))
        branches = sorted((wl - h[i], i, wl) for i, wl in witnesses[pick].items())
        for _, i, wl in branches:
            old = h[i]
            h[i] = wl
            dfs(current_cost + wl - old, [idx for idx in unhit if cores[idx][i] >= wl])
            h[i] = old

    dfs(sum(h), problem._unhit(h))
    assert best_vec is not None
    return best_vec


def cost_bounded_hv(problem: HittingProblem, ub: int | None) -> CostVector | None:
    """Any hitting vector of cost strictly below ``ub`` (None means no bound),
    or None when none exists; stops at the first feasible leaf."""
    problem._check_hittable()
    space = problem.space
    h = list(space.baseline)
    cores = problem.cores
    witnesses = problem.witnesses
    visited: set[CostVector] = set()

    def dfs(current_cost: int, unhit: list[int]) -> CostVector | None:
        if not unhit:
            if ub is None or current_cost < ub:
                return tuple(h)
            return None
        if ub is not None:
            if current_cost + problem._residual_bound(h, unhit) >= ub:
                return None
        state = tuple(h)
        if state in visited:
            return None
        visited.add(state)
        pick = min(unhit, key=lambda idx: (len(witnesses[idx]), idx))
        branches = sorted((wl - h[i], i, wl) for i, wl in witnesses[pick].items())
        for _, i, wl in branches:
            old = h[i]
            h[i] = wl
            found = dfs(current_cost + wl - old, [idx for idx in unhit if cores[idx][i] >= wl])
            h[i] = old
            if found is not None:
                return found
        return None

    return dfs(sum(h), problem._unhit(h))


def greedy_hv(problem: HittingProblem) -> CostVector:
    """Ratio-greedy hitting vector: repeatedly raise the component/level pair
    minimizing (cost increase) / (newly hit cores).  Ties prefer the smaller
    increase, then the smaller component, then the smaller level.  Candidates
    are the witness levels of currently-unhit cores."""
    problem._check_hittable()
    h = list(problem.space.baseline)
    while True:
        unhit = problem._unhit(h)
        if not unhit:
            return tuple(h)
        candidates = sorted(
            {(i, problem.witnesses[idx][i]) for idx in unhit for i in problem.witnesses[idx]}
        )
        best_key = None
        best = None
        for i, wl in candidates:
            delta = wl - h[i]
            if delta <= 0:
                continue
            newly = sum(1 for idx in unhit if problem.cores[idx][i] < wl)
            key = (Fraction(delta, newly), delta, i, wl)
            if best_key is None or key < best_key:
                best_key, best = key, (i, wl)
        assert best is not None
        h[best[0]] = best[1]

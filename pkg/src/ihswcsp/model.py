"""Data model for weighted CSPs: instances, cost vectors, and the domination order."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Iterator

CostVector = tuple[int, ...]
Assignment = tuple[int, ...]


def cost(v: CostVector) -> int:
    """Sum of a vector's components."""
    return sum(v)


def dominates(v: CostVector, u: CostVector) -> bool:
    """True iff ``u <= v`` componentwise, i.e. ``v`` dominates ``u``."""
    if len(v) != len(u):
        raise ValueError(f"vector length mismatch: {len(v)} != {len(u)}")
    return all(a <= b for a, b in zip(u, v))


def hits(h: CostVector, cores: Iterable[CostVector]) -> bool:
    """True iff no vector in ``cores`` dominates ``h``."""
    return all(not dominates(k, h) for k in cores)


def maximal_subset(vectors: Iterable[CostVector]) -> set[CostVector]:
    """The members of ``vectors`` not dominated by any other member."""
    vs = set(vectors)
    return {u for u in vs if not any(v != u and dominates(v, u) for v in vs)}


class CoreSet:
    """A set of core vectors kept as an antichain under domination.

    Inserting a vector dominated by an existing member is a no-op; inserting
    a new vector drops the members it dominates.  ``insertions`` counts the
    vectors actually stored over the set's lifetime.
    """

    def __init__(self) -> None:
        self.cores: list[CostVector] = []
        self.insertions = 0

    def add(self, k: CostVector) -> bool:
        for c in self.cores:
            if dominates(c, k):
                return False
        self.cores = [c for c in self.cores if not dominates(k, c)]
        self.cores.append(k)
        self.insertions += 1
        return True

    def __len__(self) -> int:
        return len(self.cores)

    def __iter__(self) -> Iterator[CostVector]:
        return iter(self.cores)

    def __contains__(self, v: CostVector) -> bool:
        return v in self.cores


@dataclass(frozen=True)
class HardConstraint:
    """Forbidden value combinations over an ordered variable scope."""

    scope: tuple[int, ...]
    forbidden: frozenset[tuple[int, ...]]

    def violates(self, assignment: Assignment) -> bool:
        return tuple(assignment[x] for x in self.scope) in self.forbidden


@dataclass(frozen=True)
class CostFunction:
    """Table-defined cost function over an ordered variable scope.

    ``levels`` is the sorted set of costs the function ranges over; every
    explicit cost appears in it, and it may carry extra levels (they only
    enlarge the vector space, never change the optimum).
    """

    scope: tuple[int, ...]
    default_cost: int
    explicit: dict[tuple[int, ...], int]
    levels: tuple[int, ...]

    def value(self, assignment: Assignment) -> int:
        return self.explicit.get(tuple(assignment[x] for x in self.scope), self.default_cost)

    @property
    def min_level(self) -> int:
        return self.levels[0]

    @property
    def max_level(self) -> int:
        return self.levels[-1]


def make_cost_function(
    scope: tuple[int, ...],
    default_cost: int | None,
    explicit: dict[tuple[int, ...], int],
    domains: tuple[int, ...],
    blocked: frozenset[tuple[int, ...]] = frozenset(),
) -> CostFunction | None:
    """Build a cost function, computing its level set.

    Levels are the distinct costs the function can take over non-blocked
    tuples, plus 0 when the default cost is 0 (even if the explicit table
    covers the whole cross product).  ``default_cost=None`` means unlisted
    tuples are all blocked (hard-forbidden upstream).  Returns None when no
    cost level remains (pure hard constraint).
    """
    table_size = prod(domains[x] for x in scope)
    costs = set(explicit.values())
    if default_cost is not None:
        has_unlisted = len(explicit) + len(blocked) < table_size
        if has_unlisted or default_cost == 0:
            costs.add(default_cost)
    if not costs:
        return None
    levels = tuple(sorted(costs))
    if default_cost is None:
        default_cost = levels[0]
    return CostFunction(scope, default_cost, dict(explicit), levels)


@dataclass(frozen=True)
class WcspInstance:
    """A weighted CSP: variables with finite domains, hard constraints, and
    cost functions.  ``top`` is the hard-cost threshold; all stored costs are
    below it.  ``constant_offset`` accumulates folded constant functions and
    is added to reported optima, never to solution vectors."""

    name: str
    domains: tuple[int, ...]
    hard_constraints: tuple[HardConstraint, ...]
    cost_functions: tuple[CostFunction, ...]
    top: int
    constant_offset: int = 0

    @property
    def num_vars(self) -> int:
        return len(self.domains)

    def __post_init__(self) -> None:
        if self.top < 1:
            raise ValueError("top must be >= 1")
        n = len(self.domains)
        if any(d < 1 for d in self.domains):
            raise ValueError("every domain must be nonempty")
        for hc in self.hard_constraints:
            self._check_scope(hc.scope, n)
            for t in hc.forbidden:
                self._check_tuple(t, hc.scope)
        for f in self.cost_functions:
            self._check_scope(f.scope, n)
            if not all(a < b for a, b in zip(f.levels, f.levels[1:])):
                raise ValueError("levels must be strictly increasing")
            if not f.levels:
                raise ValueError("cost function without levels")
            if not (0 <= f.levels[0] and f.levels[-1] < self.top):
                raise ValueError("levels must lie in [0, top)")
            level_set = set(f.levels)
            for t, c in f.explicit.items():
                self._check_tuple(t, f.scope)
                if c not in level_set:
                    raise ValueError(f"explicit cost {c} missing from levels")

    def _check_scope(self, scope: tuple[int, ...], n: int) -> None:
        if len(set(scope)) != len(scope):
            raise ValueError(f"repeated variable in scope {scope}")
        if any(not (0 <= x < n) for x in scope):
            raise ValueError(f"scope {scope} out of range for {n} variables")

    def _check_tuple(self, t: tuple[int, ...], scope: tuple[int, ...]) -> None:
        if len(t) != len(scope):
            raise ValueError(f"tuple {t} does not match scope arity {len(scope)}")
        if any(not (0 <= a < self.domains[x]) for x, a in zip(scope, t)):
            raise ValueError(f"tuple {t} outside domain of scope {scope}")


def evaluate(w: WcspInstance, assignment: Assignment) -> tuple[bool, CostVector, int]:
    """Check feasibility and evaluate the per-function solution vector.

    Returns ``(feasible, solution_vector, total_cost)`` with ``total_cost``
    equal to the plain sum of the solution vector (the instance's constant
    offset, if any, is applied by optimum-reporting callers).
    """
    if len(assignment) != w.num_vars:
        raise ValueError("assignment length does not match variable count")
    sv = tuple(f.value(assignment) for f in w.cost_functions)
    feasible = all(not hc.violates(assignment) for hc in w.hard_constraints)
    feasible = feasible and all(v < w.top for v in sv)
    return feasible, sv, sum(sv)

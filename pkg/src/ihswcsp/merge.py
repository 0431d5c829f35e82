"""Cost-function merging guided by a min-fill tree decomposition.

Functions whose scopes land in the same decomposition cluster are merged into
a single cost function by enumerating the union scope and summing member
costs, shrinking the dimension of the cost-vector space while preserving the
optimum.  Clusters whose enumeration would exceed the cap fall back to the
original unmerged functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Iterable

from .model import CostFunction, WcspInstance, make_cost_function


def min_fill_order(
    num_vertices: int, edges: Iterable[tuple[int, int]]
) -> tuple[list[int], list[tuple[int, ...]]]:
    """Eliminate the vertex adding the fewest fill edges (ties: lowest index);
    returns the order and the induced clusters (vertex plus its neighbors at
    elimination time)."""
    adj: list[set[int]] = [set() for _ in range(num_vertices)]
    for u, v in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    remaining = set(range(num_vertices))
    order: list[int] = []
    clusters: list[tuple[int, ...]] = []
    while remaining:
        best_v = -1
        best_fill = None
        for v in sorted(remaining):
            nb = adj[v]
            fill = 0
            nb_list = sorted(nb)
            for a_i, a in enumerate(nb_list):
                for b in nb_list[a_i + 1 :]:
                    if b not in adj[a]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best_fill = fill
                best_v = v
        nb_list = sorted(adj[best_v])
        order.append(best_v)
        clusters.append(tuple(sorted([best_v, *nb_list])))
        for a_i, a in enumerate(nb_list):
            for b in nb_list[a_i + 1 :]:
                adj[a].add(b)
                adj[b].add(a)
        for a in nb_list:
            adj[a].discard(best_v)
        adj[best_v].clear()
        remaining.discard(best_v)
    return order, clusters


@dataclass(frozen=True)
class MergedProblem:
    """The merged view of an instance: ``view`` is a regular WcspInstance
    whose cost functions are the merged clusters, sharing the base instance's
    variables and hard constraints."""

    base: WcspInstance
    clusters: tuple[tuple[int, ...], ...]
    view: WcspInstance
    merged_clusters: int
    split_clusters: int


def _merge_group(
    w: WcspInstance, group: tuple[int, ...]
) -> CostFunction:
    scope = tuple(sorted(set(itertools.chain.from_iterable(w.cost_functions[i].scope for i in group))))
    members = [w.cost_functions[i] for i in group]
    positions = [
        [scope.index(x) for x in f.scope] for f in members
    ]
    table: dict[tuple[int, ...], int] = {}
    for assignment in itertools.product(*(range(w.domains[x]) for x in scope)):
        total = 0
        for f, posn in zip(members, positions):
            total += f.explicit.get(tuple(assignment[p] for p in posn), f.default_cost)
        table[assignment] = total
    merged = make_cost_function(scope, min(table.values()), table, w.domains)
    assert merged is not None
    return merged


def build_merged(w: WcspInstance, cap: int = 4096) -> MergedProblem:
    """Group cost functions by the smallest decomposition cluster containing
    their scope and materialize each multi-function group whose union-scope
    assignment count is within ``cap``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    edges = set()
    for f in w.cost_functions:
        for a_i, a in enumerate(f.scope):
            for b in f.scope[a_i + 1 :]:
                edges.add((min(a, b), max(a, b)))
    _, dclusters = min_fill_order(w.num_vars, edges)

    cluster_sets = [set(c) for c in dclusters]
    groups: dict[int, list[int]] = {}
    for i, f in enumerate(w.cost_functions):
        candidates = [
            (len(dclusters[ci]), ci)
            for ci, cs in enumerate(cluster_sets)
            if set(f.scope) <= cs
        ]
        ci = min(candidates)[1]
        groups.setdefault(ci, []).append(i)

    merged_count = 0
    split_count = 0
    final_groups: list[tuple[int, ...]] = []
    for group in groups.values():
        if len(group) == 1:
            final_groups.append(tuple(group))
            continue
        scope_union = set(itertools.chain.from_iterable(w.cost_functions[i].scope for i in group))
        if prod(w.domains[x] for x in scope_union) > cap:
            split_count += 1
            final_groups.extend((i,) for i in group)
        else:
            merged_count += 1
            final_groups.append(tuple(group))
    final_groups.sort(key=lambda g: g[0])
    merged_funcs = [
        w.cost_functions[g[0]] if len(g) == 1 else _merge_group(w, g)
        for g in final_groups
    ]

    top = max(w.top, max((f.levels[-1] for f in merged_funcs), default=0) + 1)
    view = WcspInstance(
        w.name,
        w.domains,
        w.hard_constraints,
        tuple(merged_funcs),
        top,
        w.constant_offset,
    )
    return MergedProblem(w, tuple(final_groups), view, merged_count, split_count)

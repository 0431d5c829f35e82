import itertools
import random

import pytest

from ihswcsp.merge import build_merged, min_fill_order
from ihswcsp.model import WcspInstance, evaluate, make_cost_function
from ihswcsp.wcsp_io import GeneratorParams, brute_force_optimum, gen_uniform
from oracles import random_tiny_instance


def test_min_fill_triangle():
    order, clusters = min_fill_order(3, [(0, 1), (1, 2), (0, 2)])
    assert order[0] == 0  # already chordal, ties break to the lowest index
    assert clusters[0] == (0, 1, 2)


def test_min_fill_star():
    # center 4: eliminating it first would cost C(4,2)=6 fill edges
    edges = [(4, leaf) for leaf in (0, 1, 2, 3)]
    order, clusters = min_fill_order(5, edges)
    assert order == [0, 1, 2, 3, 4]
    assert clusters == [(0, 4), (1, 4), (2, 4), (3, 4), (4,)]


def test_min_fill_empty_graph():
    order, clusters = min_fill_order(3, [])
    assert order == [0, 1, 2]
    assert clusters == [(0,), (1,), (2,)]


def test_merge_two_functions_on_same_scope():
    f1 = make_cost_function((0, 1), 0, {(0, 0): 1, (1, 1): 2}, (2, 2))
    f2 = make_cost_function((0, 1), 0, {(0, 1): 3, (1, 1): 1}, (2, 2))
    w = WcspInstance("pair", (2, 2), (), (f1, f2), 20)
    merged = build_merged(w, cap=4)
    assert merged.clusters == ((0, 1),)
    assert len(merged.view.cost_functions) == 1
    f = merged.view.cost_functions[0]
    # achievable sums over the four assignments: 1, 3, 0, 3
    assert f.levels == (0, 1, 3)
    assert merged.merged_clusters == 1


def test_disjoint_scopes_stay_singletons():
    f1 = make_cost_function((0,), 0, {(1,): 1}, (2, 2))
    f2 = make_cost_function((1,), 0, {(1,): 2}, (2, 2))
    w = WcspInstance("disjoint", (2, 2), (), (f1, f2), 10)
    merged = build_merged(w)
    assert merged.clusters == ((0,), (1,))
    assert merged.view.cost_functions == w.cost_functions


def test_cap_one_means_no_merging():
    w = gen_uniform(GeneratorParams(6, 2, 8, 2, 3, seed=4))
    merged = build_merged(w, cap=1)
    assert merged.view.cost_functions == w.cost_functions
    assert merged.merged_clusters == 0


def test_cap_fallback_counts_splits():
    f1 = make_cost_function((0, 1), 0, {(0, 0): 1}, (4, 4, 4))
    f2 = make_cost_function((1, 2), 0, {(0, 0): 2}, (4, 4, 4))
    f3 = make_cost_function((0, 2), 0, {(0, 0): 3}, (4, 4, 4))
    w = WcspInstance("tri", (4, 4, 4), (), (f1, f2, f3), 10)
    merged = build_merged(w, cap=8)  # union scope needs 64 assignments
    assert merged.split_clusters >= 1
    assert merged.view.cost_functions == w.cost_functions


def test_sum_decomposition_invariant():
    rng = random.Random(12)
    for _ in range(25):
        w = random_tiny_instance(rng)
        merged = build_merged(w)
        for _ in range(40):
            a = tuple(rng.randrange(d) for d in w.domains)
            base_total = evaluate(w, a)[2]
            merged_total = evaluate(merged.view, a)[2]
            assert base_total == merged_total


def test_materialized_levels_contain_sampled_costs():
    rng = random.Random(13)
    for _ in range(15):
        w = random_tiny_instance(rng, max_vars=3)
        merged = build_merged(w)
        for f in merged.view.cost_functions:
            for a in itertools.product(*(range(w.domains[x]) for x in f.scope)):
                full = [0] * w.num_vars
                for x, val in zip(f.scope, a):
                    full[x] = val
                assert f.value(tuple(full)) in f.levels


def test_merge_preserves_optimum():
    rng = random.Random(14)
    for _ in range(30):
        w = random_tiny_instance(rng)
        merged = build_merged(w)
        assert brute_force_optimum(merged.view) == brute_force_optimum(w)
        assert len(merged.view.cost_functions) <= len(w.cost_functions)


def test_merged_top_covers_summed_costs():
    # two functions whose sum exceeds the base top must stay representable
    f1 = make_cost_function((0, 1), 0, {(1, 1): 6}, (2, 2))
    f2 = make_cost_function((0, 1), 0, {(1, 1): 6}, (2, 2))
    w = WcspInstance("sum", (2, 2), (), (f1, f2), 7)
    merged = build_merged(w)
    f = merged.view.cost_functions[0]
    assert f.levels == (0, 12)
    assert merged.view.top > 12
    assert brute_force_optimum(merged.view) == 0


def test_rejects_bad_cap():
    w = gen_uniform(GeneratorParams(4, 2, 2, 1, 1, seed=1))
    with pytest.raises(ValueError):
        build_merged(w, cap=0)

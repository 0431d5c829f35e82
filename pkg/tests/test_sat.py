import random

from ihswcsp.sat import Solver, neg, parse_dimacs, pos, to_dimacs
from oracles import random_cnf, truth_table_sat


def test_new_var_monotone():
    s = Solver()
    assert s.new_var() == 0
    assert s.new_var() == 1
    s.add_clause([pos(5)])
    assert s.new_var() >= 6


def test_empty_clause_is_permanent_unsat():
    s = Solver()
    s.add_clause([])
    res = s.solve()
    assert not res.sat and res.failed == []
    assert not s.solve([pos(0)]).sat


def test_unit_contradiction():
    s = Solver()
    s.add_clause([pos(0)])
    s.add_clause([neg(0)])
    assert not s.solve().sat


def test_tautology_has_no_effect():
    s = Solver()
    s.add_clause([pos(0), neg(0)])
    assert not s.clauses
    assert s.solve().sat


def test_assumption_respected():
    s = Solver()
    s.new_var()
    res = s.solve([pos(0)])
    assert res.sat and res.model[0] is True
    res = s.solve([neg(0)])
    assert res.sat and res.model[0] is False


def test_failed_assumption_contains_cause():
    s = Solver()
    s.add_clause([neg(0)])
    res = s.solve([pos(0)])
    assert not res.sat
    assert pos(0) in res.failed


def test_failed_assumptions_narrow():
    # chain: a forces b, b conflicts with assumption !b; c is irrelevant
    s = Solver()
    s.add_clause([neg(0), pos(1)])
    s.new_var()  # variable 2, unconstrained
    res = s.solve([pos(0), pos(2), neg(1)])
    assert not res.sat
    assert set(res.failed) <= {pos(0), pos(2), neg(1)}
    assert pos(2) not in res.failed
    # failed order follows the assumption list
    assert res.failed == [a for a in [pos(0), pos(2), neg(1)] if a in set(res.failed)]


def test_random_cnf_against_truth_table():
    rng = random.Random(77)
    for _ in range(250):
        n, clauses = random_cnf(rng, max_vars=12)
        assumptions = []
        if rng.random() < 0.6:
            for v in rng.sample(range(n), rng.randint(0, min(4, n))):
                assumptions.append(pos(v) if rng.random() < 0.5 else neg(v))
        s = Solver()
        for c in clauses:
            s.add_clause(c)
        res = s.solve(assumptions)
        assert res.sat == truth_table_sat(n, clauses, assumptions)
        if res.sat:
            model = res.model
            for c in clauses:
                assert any(model[l >> 1] == (not l & 1) for l in c)
            for a in assumptions:
                assert model[a >> 1] == (not a & 1)
        else:
            assert set(res.failed) <= set(assumptions)


def test_failed_sets_reverify_on_fresh_solver():
    rng = random.Random(78)
    checked = 0
    while checked < 60:
        n, clauses = random_cnf(rng, max_vars=10)
        assumptions = [pos(v) if rng.random() < 0.5 else neg(v) for v in rng.sample(range(n), min(4, n))]
        s = Solver()
        for c in clauses:
            s.add_clause(c)
        res = s.solve(assumptions)
        if res.sat:
            continue
        fresh = Solver()
        for c in clauses:
            fresh.add_clause(c)
        for a in res.failed:
            fresh.add_clause([a])
        assert not fresh.solve().sat
        checked += 1


def test_incremental_solving_stays_correct():
    rng = random.Random(79)
    s = Solver()
    clauses = []
    for round_no in range(30):
        n, extra = random_cnf(rng, max_vars=8)
        for c in extra:
            s.add_clause(c)
            clauses.append(c)
        nv = max(
            (max(l >> 1 for l in c) for c in clauses if c),
            default=0,
        ) + 1
        res = s.solve()
        assert res.sat == truth_table_sat(nv, clauses)
        if not res.sat:
            break


def test_determinism():
    rng = random.Random(80)
    n, clauses = random_cnf(rng, max_vars=12)
    assumptions = [pos(0), neg(1)]

    def run():
        s = Solver()
        for c in clauses:
            s.add_clause(c)
        first = s.solve(assumptions)
        second = s.solve(assumptions)
        return first, second

    a1, a2 = run()
    b1, b2 = run()
    assert a1 == b1
    assert a2 == b2


def test_dimacs_roundtrip():
    rng = random.Random(81)
    n, clauses = random_cnf(rng, max_vars=9)
    text = to_dimacs(n, clauses)
    n2, clauses2 = parse_dimacs(text)
    assert n2 == n
    assert [sorted(c) for c in clauses2] == [sorted(c) for c in clauses]


def test_hard_random_formulas_near_phase_transition():
    rng = random.Random(82)
    for _ in range(15):
        n = 16
        clauses = [
            [pos(v) if rng.random() < 0.5 else neg(v) for v in rng.sample(range(n), 3)]
            for _ in range(int(4.26 * n))
        ]
        s = Solver()
        for c in clauses:
            s.add_clause(c)
        assert s.solve().sat == truth_table_sat(n, clauses)

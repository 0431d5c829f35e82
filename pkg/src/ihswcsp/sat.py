"""Assumption-based CDCL SAT solver.

MiniSat-style architecture: two watched literals, first-UIP clause learning,
activity-driven branching with phase saving, geometric restarts, and
activity-based reduction of the learnt-clause database.  Assumptions are
enqueued as decisions in list order; on UNSAT the failed subset is extracted
by final-conflict analysis over the trail (sufficient, not minimized).

Literal encoding: variable ``v`` yields literals ``2*v`` (positive) and
``2*v + 1`` (negative); ``lit ^ 1`` negates.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heapify, heappop, heappush


def pos(v: int) -> int:
    return v << 1


def neg(v: int) -> int:
    return (v << 1) | 1


def lit_var(lit: int) -> int:
    return lit >> 1


def lit_is_negative(lit: int) -> bool:
    return bool(lit & 1)


class Clause(list):
    __slots__ = ("learnt", "act")

    def __init__(self, lits, learnt=False):
        super().__init__(lits)
        self.learnt = learnt
        self.act = 0.0


@dataclass
class SatResult:
    """SAT outcome: a full model, or a failed subset of the assumptions that
    is already sufficient for unsatisfiability."""

    sat: bool
    model: list[bool] | None = None
    failed: list[int] | None = None


class Solver:
    """Incremental CDCL solver; state (learnt clauses, activities, phases)
    persists across solve() calls and never affects correctness."""

    def __init__(self) -> None:
        self.num_vars = 0
        self.clauses: list[Clause] = []
        self.learnts: list[Clause] = []
        self.watches: list[list[Clause]] = []
        self.assign: list[int] = []  # -1 unassigned, 0 false, 1 true
        self.level: list[int] = []
        self.reason: list[Clause | None] = []
        self.polarity: list[int] = []
        self.activity: list[float] = []
        self.heap: list[tuple[float, int]] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.seen = bytearray()
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.ok = True
        self.conflicts = 0

    # -- variables and clauses ------------------------------------------------

    def new_var(self) -> int:
        v = self.num_vars
        self.num_vars += 1
        self.watches.append([])
        self.watches.append([])
        self.assign.append(-1)
        self.level.append(0)
        self.reason.append(None)
        self.polarity.append(0)
        self.activity.append(0.0)
        self.seen.append(0)
        heappush(self.heap, (-0.0, v))
        return v

    def _ensure_var(self, v: int) -> None:
        while self.num_vars <= v:
            self.new_var()

    def add_clause(self, lits) -> None:
        """Add a permanent clause.  Tautologies are dropped, duplicate and
        root-level-false literals removed; an effectively empty clause makes
        the solver permanently UNSAT."""
        lits = list(lits)
        if lits:
            self._ensure_var(max(l >> 1 for l in lits))
        if not self.ok:
            return
        self.cancel_until(0)
        out: list[int] = []
        prev = -1
        for l in sorted(set(lits)):
            if l == prev ^ 1 and prev >= 0:
                return  # tautology
            prev = l
            val = self.assign[l >> 1] ^ (l & 1)
            if val == 1:
                return  # satisfied at root level
            if val == 0:
                continue  # false at root level
            out.append(l)
        if not out:
            self.ok = False
            return
        if len(out) == 1:
            self._enqueue(out[0], None)
            if self.propagate() is not None:
                self.ok = False
            return
        c = Clause(out)
        self.clauses.append(c)
        self.watches[c[0] ^ 1].append(c)
        self.watches[c[1] ^ 1].append(c)

    # -- assignment trail ------------------------------------------------------

    def _enqueue(self, lit: int, reason: Clause | None) -> None:
        v = lit >> 1
        self.assign[v] = (lit & 1) ^ 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        bound = self.trail_lim[lvl]
        trail, assign = self.trail, self.assign
        for idx in range(len(trail) - 1, bound - 1, -1):
            l = trail[idx]
            v = l >> 1
            self.polarity[v] = assign[v]
            assign[v] = -1
            self.reason[v] = None
            heappush(self.heap, (-self.activity[v], v))
        del trail[bound:]
        del self.trail_lim[lvl:]
        self.qhead = bound

    # -- propagation -----------------------------------------------------------

    def propagate(self) -> Clause | None:
        assign, watches, trail = self.assign, self.watches, self.trail
        level, reason = self.level, self.reason
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            level_now = len(self.trail_lim)
            false_lit = p ^ 1
            ws = watches[p]
            i = j = 0
            n_ws = len(ws)
            while i < n_ws:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                fv = assign[first >> 1] ^ (first & 1)
                if fv == 1:
                    ws[j] = c
                    j += 1
                    continue
                # look for a non-false replacement watch
                moved = False
                for k in range(2, len(c)):
                    lk = c[k]
                    if (assign[lk >> 1] ^ (lk & 1)) != 0:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk ^ 1].append(c)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = c
                j += 1
                if fv == 0:
                    while i < n_ws:  # conflict: keep remaining watches intact
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.qhead = len(trail)
                    return c
                v = first >> 1
                assign[v] = (first & 1) ^ 1
                level[v] = level_now
                reason[v] = c
                trail.append(first)
            del ws[j:]
        return None

    # -- conflict analysis -----------------------------------------------------

    def _bump_var(self, v: int) -> None:
        act = self.activity[v] + self.var_inc
        self.activity[v] = act
        if act > 1e100:
            self._rescale_var_activity()
        else:
            heappush(self.heap, (-act, v))

    def _rescale_var_activity(self) -> None:
        self.activity = [a * 1e-100 for a in self.activity]
        self.var_inc *= 1e-100
        self.heap = [(-self.activity[v], v) for v in range(self.num_vars) if self.assign[v] < 0]
        heapify(self.heap)

    def _bump_cla(self, c: Clause) -> None:
        c.act += self.cla_inc
        if c.act > 1e20:
            for lc in self.learnts:
                lc.act *= 1e-20
            self.cla_inc *= 1e-20

    def analyze(self, confl: Clause) -> tuple[list[int], int]:
        """First-UIP learning; returns the learnt clause (asserting literal
        first) and the backjump level."""
        seen = self.seen
        cur = len(self.trail_lim)
        learnt: list[int] = [0]
        to_clear: list[int] = []
        counter = 0
        p = -1
        index = len(self.trail) - 1
        while True:
            if confl.learnt:
                self._bump_cla(confl)
            for k in range(0 if p == -1 else 1, len(confl)):
                q = confl[k]
                v = q >> 1
                if not seen[v] and self.level[v] > 0:
                    seen[v] = 1
                    to_clear.append(v)
                    self._bump_var(v)
                    if self.level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[index] >> 1]:
                index -= 1
            p = self.trail[index]
            index -= 1
            counter -= 1
            if counter == 0:
                break
            confl = self.reason[p >> 1]
        learnt[0] = p ^ 1
        if len(learnt) == 1:
            bt = 0
        else:
            max_i = 1
            for i in range(2, len(learnt)):
                if self.level[learnt[i] >> 1] > self.level[learnt[max_i] >> 1]:
                    max_i = i
            learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
            bt = self.level[learnt[1] >> 1]
        for v in to_clear:
            seen[v] = 0
        return learnt, bt

    def _analyze_final(self, p: int | None, confl: Clause | None) -> set[int]:
        """Walk the trail from a falsified assumption (or final conflict) and
        collect the assumption literals it depends on."""
        seen = self.seen
        to_clear: list[int] = []
        out: set[int] = set()
        if p is not None:
            out.add(p)
            if self.level[p >> 1] > 0:
                seen[p >> 1] = 1
                to_clear.append(p >> 1)
        if confl is not None:
            for q in confl:
                v = q >> 1
                if self.level[v] > 0 and not seen[v]:
                    seen[v] = 1
                    to_clear.append(v)
        if self.trail_lim:
            for idx in range(len(self.trail) - 1, self.trail_lim[0] - 1, -1):
                l = self.trail[idx]
                v = l >> 1
                if not seen[v]:
                    continue
                r = self.reason[v]
                if r is None:
                    out.add(l)
                else:
                    for q in r[1:]:
                        u = q >> 1
                        if self.level[u] > 0 and not seen[u]:
                            seen[u] = 1
                            to_clear.append(u)
        for v in to_clear:
            seen[v] = 0
        return out

    # -- learnt DB and branching -----------------------------------------------

    def _record(self, learnt: list[int]) -> None:
        if len(learnt) == 1:
            self._enqueue(learnt[0], None)
            return
        c = Clause(learnt, learnt=True)
        c.act = self.cla_inc
        self.learnts.append(c)
        self.watches[c[0] ^ 1].append(c)
        self.watches[c[1] ^ 1].append(c)
        self._enqueue(c[0], c)

    def reduce_db(self) -> None:
        """Drop the less active half of the learnt clauses (locked ones stay)."""
        self.learnts.sort(key=lambda c: c.act, reverse=True)
        keep = len(self.learnts) // 2
        kept: list[Clause] = []
        for i, c in enumerate(self.learnts):
            locked = self.reason[c[0] >> 1] is c
            if i < keep or locked:
                kept.append(c)
            else:
                for wl in (c[0] ^ 1, c[1] ^ 1):
                    ws = self.watches[wl]
                    for k in range(len(ws)):
                        if ws[k] is c:
                            ws.pop(k)
                            break
        self.learnts = kept

    def _pick_branch(self) -> int:
        heap, assign = self.heap, self.assign
        while heap:
            _, v = heappop(heap)
            if assign[v] < 0:
                return (v << 1) | (self.polarity[v] ^ 1)
        return -1

    # -- main search -----------------------------------------------------------

    def solve(self, assumptions=()) -> SatResult:
        assumptions = list(assumptions)
        if assumptions:
            self._ensure_var(max(l >> 1 for l in assumptions))
        if not self.ok:
            return SatResult(False, failed=[])
        self.cancel_until(0)
        restart_limit = 100
        conflicts_here = 0
        while True:
            confl = self.propagate()
            if confl is not None:
                self.conflicts += 1
                conflicts_here += 1
                if not self.trail_lim:
                    self.ok = False
                    return SatResult(False, failed=[])
                learnt, bt = self.analyze(confl)
                self.cancel_until(bt)
                self._record(learnt)
                self.var_inc /= 0.95
                self.cla_inc /= 0.999
                if conflicts_here >= restart_limit:
                    conflicts_here = 0
                    restart_limit = restart_limit + (restart_limit >> 1) + 1
                    self.cancel_until(0)
                if len(self.learnts) > 500 + 2 * len(self.clauses):
                    self.reduce_db()
                continue
            dl = len(self.trail_lim)
            if dl < len(assumptions):
                p = assumptions[dl]
                val = self.assign[p >> 1] ^ (p & 1)
                if val == 1:
                    self.trail_lim.append(len(self.trail))  # dummy level
                elif val == 0:
                    failed = self._analyze_final(p, None)
                    ordered = [a for a in assumptions if a in failed]
                    self.cancel_until(0)
                    return SatResult(False, failed=ordered)
                else:
                    self.trail_lim.append(len(self.trail))
                    self._enqueue(p, None)
            else:
                lit = self._pick_branch()
                if lit == -1:
                    model = [x == 1 for x in self.assign]
                    self.cancel_until(0)
                    return SatResult(True, model=model)
                self.trail_lim.append(len(self.trail))
                self._enqueue(lit, None)


# ---------------------------------------------------------------------------
# DIMACS helpers (debugging interface)


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    """Parse DIMACS CNF into (num_vars, clauses) in this module's literal
    encoding."""
    num_vars = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            d = int(tok)
            if d == 0:
                clauses.append(current)
                current = []
            else:
                v = abs(d) - 1
                num_vars = max(num_vars, v + 1)
                current.append(pos(v) if d > 0 else neg(v))
    if current:
        clauses.append(current)
    return num_vars, clauses


def to_dimacs(num_vars: int, clauses) -> str:
    lines = [f"p cnf {num_vars} {len(clauses)}"]
    for c in clauses:
        lines.append(
            " ".join(str((l >> 1) + 1 if not (l & 1) else -((l >> 1) + 1)) for l in c) + " 0"
        )
    return "\n".join(lines) + "\n"

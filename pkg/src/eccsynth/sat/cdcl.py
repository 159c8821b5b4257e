"""Conflict-driven clause-learning SAT solver.

A self-contained incremental solver with two-watched-literal propagation,
first-UIP learning, VSIDS-style activities, phase saving, Luby restarts and
solving under assumptions.  It exists because this package must run without
any external solver; for larger workloads point the DIMACS process backend
at a real solver instead.

Interface conventions: variables are positive integers allocated through
``new_var``; literals are signed ints.  The clause store is monotone --
clauses can be added between ``solve`` calls but never removed.
"""

from __future__ import annotations

import time
from heapq import heappop, heappush
from typing import Iterable, List, Optional, Sequence

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"

_RESCALE_LIMIT = 1e100
_ACTIVITY_DECAY = 1.05  # var_inc multiplier per conflict (1/0.952...)


def _luby(i: int) -> int:
    """i-th element (0-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) // 2
        seq -= 1
        i %= size
    return 1 << seq


class CdclSolver:
    def __init__(self, restart_base: int = 100):
        self.num_vars = 0
        # values[v]: 0 when unassigned, else the signed literal that is true
        self.values: List[int] = [0]
        self.level: List[int] = [0]
        self.reason: List[Optional[list]] = [None]
        self.activity: List[float] = [0.0]
        self.phase: List[bool] = [False]
        self.watches: List[list] = [[], []]
        self.clauses: List[list] = []
        self.stored_units: List[int] = []
        self.learnts: List[list] = []
        self.trail: List[int] = []
        self.trail_lim: List[int] = []
        self.qhead = 0
        self.seen = bytearray(1)
        self.order: List[tuple] = []  # lazy max-activity heap of (-act, var)
        self.var_inc = 1.0
        self.unsat = False  # empty clause derived at level 0
        self.restart_base = restart_base
        # statistics, cumulative over the solver's lifetime
        self.stats = {"solves": 0, "conflicts": 0, "decisions": 0, "propagations": 0}

    # -- variables and clauses -------------------------------------------

    def new_var(self, polarity: bool = False) -> int:
        """Allocate a fresh variable; ``polarity`` seeds its saved phase."""
        self.num_vars += 1
        v = self.num_vars
        self.values.append(0)
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        self.phase.append(polarity)
        self.watches.append([])
        self.watches.append([])
        self.seen.append(0)
        self.order.append((0.0, v))
        return v

    def set_polarity(self, var: int, polarity: bool):
        self.phase[var] = polarity

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a clause; returns False if the store became trivially UNSAT.

        Must be called at decision level 0 (i.e. between solves), which the
        solver guarantees by construction.
        """
        if self.unsat:
            return False
        seen_here = {}
        out = []
        for lit in lits:
            v = abs(lit)
            if not 0 < v <= self.num_vars:
                raise ValueError(f"literal {lit} references unallocated variable")
            if -lit in seen_here:
                return True  # tautology
            if lit not in seen_here:
                seen_here[lit] = True
                val = self.values[v]
                if val == lit:
                    return True  # satisfied at level 0
                if val != -lit:
                    out.append(lit)  # drop literals false at level 0
        if not out:
            self.unsat = True
            return False
        if len(out) == 1:
            self.stored_units.append(out[0])
            if not self._enqueue(out[0], None):
                self.unsat = True
                return False
            if self._propagate() is not None:
                self.unsat = True
                return False
            return True
        self.clauses.append(out)
        self._watch(out)
        return True

    def _watch(self, clause: list):
        self.watches[self._widx(clause[0])].append(clause)
        self.watches[self._widx(clause[1])].append(clause)

    @staticmethod
    def _widx(lit: int) -> int:
        return (lit << 1) if lit > 0 else ((-lit << 1) | 1)

    # -- assignment machinery --------------------------------------------

    def _enqueue(self, lit: int, reason: Optional[list]) -> bool:
        v = abs(lit)
        val = self.values[v]
        if val != 0:
            return val == lit
        self.values[v] = lit
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)
        return True

    def _propagate(self) -> Optional[list]:
        """Unit propagation; returns a conflicting clause or None."""
        values = self.values
        watches = self.watches
        trail = self.trail
        props = 0
        confl = None
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            props += 1
            false_lit = -p
            widx = (false_lit << 1) if false_lit > 0 else ((-false_lit << 1) | 1)
            ws = watches[widx]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                v0 = first if first > 0 else -first
                if values[v0] == first:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    vk = lk if lk > 0 else -lk
                    if values[vk] != -lk:
                        c[1] = lk
                        c[k] = false_lit
                        watches[(lk << 1) if lk > 0 else ((-lk << 1) | 1)].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if values[v0] == -first:
                        # conflict: keep remaining watchers and bail out
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        self.qhead = len(trail)
                        confl = c
                        break
                    self.values[v0] = first
                    self.level[v0] = len(self.trail_lim)
                    self.reason[v0] = c
                    trail.append(first)
            del ws[j:]
            if confl is not None:
                break
        self.stats["propagations"] += props
        return confl

    def _cancel_until(self, target_level: int):
        if len(self.trail_lim) <= target_level:
            return
        bound = self.trail_lim[target_level]
        values = self.values
        for idx in range(len(self.trail) - 1, bound - 1, -1):
            lit = self.trail[idx]
            v = abs(lit)
            self.phase[v] = lit > 0
            values[v] = 0
            self.reason[v] = None
            heappush(self.order, (-self.activity[v], v))
        del self.trail[bound:]
        del self.trail_lim[target_level:]
        self.qhead = len(self.trail)

    def _bump(self, v: int):
        act = self.activity[v] + self.var_inc
        self.activity[v] = act
        if act > _RESCALE_LIMIT:
            inv = 1.0 / _RESCALE_LIMIT
            for u in range(1, self.num_vars + 1):
                self.activity[u] *= inv
            self.var_inc *= inv

    def _analyze(self, confl: list) -> tuple:
        """First-UIP conflict analysis; returns (learnt clause, backjump level)."""
        seen = self.seen
        trail = self.trail
        level = self.level
        cur_level = len(self.trail_lim)
        learnt = [0]
        counter = 0
        p = 0
        index = len(trail) - 1
        c = confl
        while True:
            for q in c:
                if q == p:
                    continue
                v = abs(q)
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(trail[index])]:
                index -= 1
            p = trail[index]
            v = abs(p)
            index -= 1
            seen[v] = 0
            counter -= 1
            if counter == 0:
                break
            c = self.reason[v]
        learnt[0] = -p
        # cheap self-subsumption: drop literals implied by the rest
        keep = [learnt[0]]
        marked = {abs(l) for l in learnt}
        for q in learnt[1:]:
            r = self.reason[abs(q)]
            if r is None or any(abs(x) not in marked and level[abs(x)] > 0
                                for x in r if x != -q):
                keep.append(q)
        for q in learnt:
            seen[abs(q)] = 0
        learnt = keep
        if len(learnt) == 1:
            return learnt, 0
        # place a highest-level literal (below current) at slot 1
        max_i = 1
        for i in range(2, len(learnt)):
            if level[abs(learnt[i])] > level[abs(learnt[max_i])]:
                max_i = i
        learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
        return learnt, level[abs(learnt[1])]

    def _pick_branch_var(self) -> int:
        order = self.order
        values = self.values
        while order:
            act, v = heappop(order)
            if values[v] == 0 and -act == self.activity[v]:
                return v
        for v in range(1, self.num_vars + 1):
            if values[v] == 0:
                return v
        return 0

    def _reduce_learnts(self):
        """Drop the less useful half of learned clauses (locked ones stay)."""
        locked = {id(self.reason[abs(l)]) for l in self.trail if self.reason[abs(l)] is not None}
        self.learnts.sort(key=len)
        keep_n = len(self.learnts) // 2
        kept, dropped = [], set()
        for i, c in enumerate(self.learnts):
            if i < keep_n or len(c) <= 2 or id(c) in locked:
                kept.append(c)
            else:
                dropped.add(id(c))
        if not dropped:
            return
        self.learnts = kept
        for ws in self.watches:
            ws[:] = [c for c in ws if id(c) not in dropped]

    # -- main search -------------------------------------------------------

    def solve(self, assumptions: Sequence[int] = (),
              time_limit: Optional[float] = None) -> str:
        """Decide satisfiability of the clause store plus assumptions.

        Returns "SAT", "UNSAT" or "UNKNOWN" (time limit hit).  On SAT the
        model is available through ``model_value``/``model``.  An UNSAT under
        assumptions leaves the clause store usable for later calls.
        """
        self.stats["solves"] += 1
        self._cancel_until(0)
        if self.unsat:
            return UNSAT
        if self._propagate() is not None:
            self.unsat = True
            return UNSAT
        for lit in assumptions:
            if not 0 < abs(lit) <= self.num_vars:
                raise ValueError(f"assumption {lit} references unallocated variable")

        deadline = None if time_limit is None else time.monotonic() + time_limit
        restart_count = 0
        conflict_budget = self.restart_base * _luby(0)
        learnt_cap = max(4000, len(self.clauses) // 2)
        result = None
        while result is None:
            confl = self._propagate()
            if confl is not None:
                self.stats["conflicts"] += 1
                if not self.trail_lim:
                    self.unsat = True
                    result = UNSAT
                    break
                learnt, bt_level = self._analyze(confl)
                self._cancel_until(bt_level)
                if len(learnt) == 1:
                    if not self._enqueue(learnt[0], None):
                        self.unsat = True
                        result = UNSAT
                        break
                else:
                    self.learnts.append(learnt)
                    self._watch(learnt)
                    self._enqueue(learnt[0], learnt)
                self.var_inc *= _ACTIVITY_DECAY
                conflict_budget -= 1
                if conflict_budget <= 0:
                    if deadline is not None and time.monotonic() > deadline:
                        result = UNKNOWN
                        break
                    restart_count += 1
                    conflict_budget = self.restart_base * _luby(restart_count)
                    if len(self.learnts) > learnt_cap:
                        self._cancel_until(0)
                        self._reduce_learnts()
                        learnt_cap += learnt_cap // 2
                    else:
                        self._cancel_until(0)
                continue

            # assumption not yet satisfied becomes the next decision
            decision = 0
            for lit in assumptions:
                val = self.values[abs(lit)]
                if val == -lit:
                    result = UNSAT
                    break
                if val == 0:
                    decision = lit
                    break
            if result is not None:
                break
            if decision == 0:
                v = self._pick_branch_var()
                if v == 0:
                    result = SAT
                    break
                decision = v if self.phase[v] else -v
                self.stats["decisions"] += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(decision, None)

        if result == SAT:
            self._model = self.values[:]
        self._cancel_until(0)
        return result

    def model_value(self, var: int) -> bool:
        return self._model[var] > 0

    def model(self) -> List[bool]:
        """Total assignment indexed by variable (entry 0 unused)."""
        return [False] + [self._model[v] > 0 for v in range(1, self.num_vars + 1)]

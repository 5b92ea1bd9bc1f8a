"""Migration selection: cover every non-local gate at low cost.

Given a fixed assignment, non-local binary gates are covered either by
migrating one operand to the other's home (home-coverage) or by migrating
both operands to a common third node holding two execution-memory slots
(pair coverage). Selection follows an iterative budgeted scheme: a
multiplicative-updates subroutine maximizes coverage under a cost budget
while keeping occupancy feasible within the call, and an outer loop raises
the budget until a constant fraction of the remaining gates is covered.
A memory-oblivious greedy baseline is provided for comparison runs.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field

import numpy as np

from .circuit import UNARY, Circuit, Gate
from .errors import Uncoverable
from .network import Network

ALPHA = 0.4


@dataclass(frozen=True)
class Migration:
    """Linked-copy interval: qubit held at target over [t_s, t_e], even endpoints."""

    qubit: int
    target: int
    t_s: int
    t_e: int
    cost: int

    def sort_key(self):
        return (self.t_s, self.qubit, self.target, self.t_e)


def nonlocal_gates(c: Circuit, homes) -> list[Gate]:
    """Binary gates whose operands live on different computers, in time order."""
    return [g for g in c.gates if g.is_binary and homes[g.qubits[0]] != homes[g.qubits[1]]]


def covers_gate(m: Migration, gate: Gate, homes) -> bool:
    """Home-coverage test for a single migration."""
    if not gate.is_binary or not m.t_s <= gate.instant <= m.t_e:
        return False
    qi, qj = gate.qubits
    if m.qubit == qi:
        return m.target == homes[qj]
    if m.qubit == qj:
        return m.target == homes[qi]
    return False


def gate_covered(gate: Gate, homes, migrations) -> bool:
    """True if the migration set covers the gate (home or pair coverage)."""
    qi, qj = gate.qubits
    spans_i = set()
    spans_j = set()
    for m in migrations:
        if covers_gate(m, gate, homes):
            return True
        if m.t_s <= gate.instant <= m.t_e:
            if m.qubit == qi:
                spans_i.add(m.target)
            elif m.qubit == qj:
                spans_j.add(m.target)
    return bool(spans_i & spans_j)


class CandidateSet:
    """Maximal unary-free migration candidates for one (segment, assignment).

    Candidate intervals are delimited by unary gates on the migrating qubit
    and the segment boundary, expanded to even endpoints. Each candidate
    records which non-local gates it home-covers and which it can pair-cover
    at its target; pair units couple the two operand candidates that share a
    target with at least two execution-memory slots.
    """

    def __init__(self, c: Circuit, homes, n: Network, d: np.ndarray):
        self.span = c.span
        self.homes = tuple(homes)
        lo, hi = c.span
        unary: dict[int, list[int]] = {}
        for g in c.gates:
            if g.kind == UNARY:
                unary.setdefault(g.qubits[0], []).append(g.instant)
        self.gates = nonlocal_gates(c, homes)

        self.qubit: list[int] = []
        self.target: list[int] = []
        self.t_s: list[int] = []
        self.t_e: list[int] = []
        self.cost: list[int] = []
        self.home_cov: list[list[int]] = []
        self.pair_cov: list[list[int]] = []
        self.pair_units: list[tuple[int, int]] = []
        self.pair_unit_gates: list[list[int]] = []
        # per gate: (target, cand_i, cand_j) options for pair coverage
        self.gate_pairs: list[list[tuple[int, int, int]]] = [[] for _ in self.gates]
        self.gate_has_home: list[bool] = [False] * len(self.gates)

        ids: dict[tuple[int, int, int], int] = {}
        unit_ids: dict[tuple[int, int], int] = {}

        def interval(q: int, t: int) -> tuple[int, int]:
            marks = unary.get(q, ())
            pos = bisect_left(marks, t)
            start = marks[pos - 1] + 1 if pos > 0 else lo
            end = marks[pos] - 1 if pos < len(marks) else hi
            return start, end

        def candidate(q: int, t: int, p: int) -> int:
            start, end = interval(q, t)
            key = (q, start, p)
            cid = ids.get(key)
            if cid is None:
                cid = len(self.qubit)
                ids[key] = cid
                self.qubit.append(q)
                self.target.append(p)
                self.t_s.append(start)
                self.t_e.append(end)
                self.cost.append(int(d[homes[q], p]))
                self.home_cov.append([])
                self.pair_cov.append([])
            return cid

        exec_mem = n.exec_mem
        for gi, g in enumerate(self.gates):
            qi, qj = g.qubits
            t = g.instant
            for q, other in ((qi, qj), (qj, qi)):
                p = homes[other]
                if exec_mem[p] >= 1:
                    self.home_cov[candidate(q, t, p)].append(gi)
                    self.gate_has_home[gi] = True
            for p in range(n.num_nodes):
                if p == homes[qi] or p == homes[qj] or exec_mem[p] < 2:
                    continue
                ci = candidate(qi, t, p)
                cj = candidate(qj, t, p)
                self.pair_cov[ci].append(gi)
                self.pair_cov[cj].append(gi)
                ukey = (min(ci, cj), max(ci, cj))
                uid = unit_ids.get(ukey)
                if uid is None:
                    uid = len(self.pair_units)
                    unit_ids[ukey] = uid
                    self.pair_units.append(ukey)
                    self.pair_unit_gates.append([])
                self.pair_unit_gates[uid].append(gi)
                self.gate_pairs[gi].append((p, ci, cj))

        self.num_candidates = len(self.qubit)

    def migration(self, cid: int) -> Migration:
        return Migration(self.qubit[cid], self.target[cid], self.t_s[cid], self.t_e[cid], self.cost[cid])

    def coverable(self, gi: int, home_only: bool) -> bool:
        if home_only:
            return self.gate_has_home[gi]
        return self.gate_has_home[gi] or bool(self.gate_pairs[gi])


@dataclass
class CoverageState:
    """Selection state threaded through successive budgeted cover calls.

    ``row_weights`` accumulate multiplicative penalties on loaded
    (node, instant) rows across calls, discouraging re-use even though the
    hard occupancy constraint is only enforced within a single call.
    """

    span: tuple[int, int]
    num_nodes: int
    uncovered: set[int] = field(default_factory=set)
    selected: list[Migration] = field(default_factory=list)
    selected_ids: list[int] = field(default_factory=list)
    occupancy: np.ndarray | None = None
    row_weights: np.ndarray | None = None
    covered_map: dict[Gate, tuple[Migration, ...]] = field(default_factory=dict)

    def __post_init__(self):
        length = self.span[1] - self.span[0] + 1
        if self.occupancy is None:
            self.occupancy = np.zeros((self.num_nodes, length), dtype=np.int64)
        if self.row_weights is None:
            self.row_weights = np.ones((self.num_nodes, length), dtype=np.float64)


def new_state(c: Circuit, cands: CandidateSet, n: Network) -> CoverageState:
    return CoverageState(
        span=c.span,
        num_nodes=n.num_nodes,
        uncovered=set(range(len(cands.gates))),
    )


class _UnitTable:
    """Scoring units (single candidates plus pair units) for one selection table."""

    def __init__(self, cands: CandidateSet, home_only: bool):
        self.cands = cands
        c = cands.num_candidates
        self.m1 = list(range(c))
        self.m2 = [-1] * c
        gate_units: list[list[int]] = [[] for _ in cands.gates]
        counts = [0] * c
        for cid in range(c):
            for gi in cands.home_cov[cid]:
                gate_units[gi].append(cid)
                counts[cid] += 1
        if not home_only:
            for uid, (ci, cj) in enumerate(cands.pair_units):
                unit = len(self.m1)
                self.m1.append(ci)
                self.m2.append(cj)
                counts.append(0)
                for gi in cands.home_cov[ci] + cands.home_cov[cj] + cands.pair_unit_gates[uid]:
                    gate_units[gi].append(unit)
                    counts[-1] += 1
        self.gate_units = gate_units
        self.size = len(self.m1)
        self.cand_units: list[list[int]] = [[] for _ in range(c)]
        for unit, (a, b) in enumerate(zip(self.m1, self.m2)):
            self.cand_units[a].append(unit)
            if b >= 0:
                self.cand_units[b].append(unit)

        self.m1a = np.asarray(self.m1)
        self.m2a = np.asarray(self.m2)
        self.counts0 = counts

    def restrict_counts(self, uncovered: set[int]) -> np.ndarray:
        counts = np.zeros(self.size, dtype=np.int64)
        for gi in uncovered:
            for unit in self.gate_units[gi]:
                counts[unit] += 1
        return counts


def _run_ag(
    budget: int,
    uncovered0: set[int],
    weights0: np.ndarray,
    table: _UnitTable,
    n: Network,
    already: frozenset[int] = frozenset(),
    trace_in: list[int] | None = None,
    counts0: np.ndarray | None = None,
):
    """One multiplicative-updates run under a cost budget.

    Occupancy is enforced hard against this run's own selections only;
    ``weights0`` carries penalties from earlier selections and is updated on
    a local copy that the caller may commit. Candidates in ``already`` were
    selected by earlier rounds: their copies exist, so reusing one for pair
    coverage costs nothing and adds no occupancy.

    ``trace_in`` is a pick sequence from a higher-budget run on the same
    state: its trajectory provably matches this run's until a pick no longer
    fits the budget, so those picks are replayed without scoring.
    """
    cands = table.cands
    lo, hi = cands.span
    length = hi - lo + 1
    cap = np.asarray(n.exec_mem)
    occ = np.zeros((n.num_nodes, length), dtype=np.int64)
    weights = weights0.copy()
    # score against the excess over the neutral weight 1: untouched rows are
    # free, so candidates compete on coverage per cost until rows get loaded
    prefix = np.zeros((n.num_nodes, length + 1), dtype=np.float64)
    np.cumsum(weights - 1.0, axis=1, out=prefix[:, 1:])

    cnode = np.asarray(cands.target)
    cts = np.asarray(cands.t_s) - lo
    cte = np.asarray(cands.t_e) - lo
    ccost = np.asarray(cands.cost, dtype=np.float64)
    ce = cap[cnode].astype(np.float64)
    csel = np.zeros(cands.num_candidates, dtype=np.float64)
    for cid in already:
        csel[cid] = 1.0

    m1, m2 = table.m1a, table.m2a
    has2 = m2 >= 0
    m2safe = np.where(has2, m2, 0)

    counts = counts0.copy() if counts0 is not None else table.restrict_counts(uncovered0)
    uncovered = set(uncovered0)
    covered: set[int] = set()
    selected: list[Migration] = []
    selected_ids: list[int] = []
    covered_map: dict[Gate, tuple[Migration, ...]] = {}
    mig_of: dict[int, Migration] = {cid: cands.migration(cid) for cid in already}
    spent = 0
    budget_bound = False  # did the budget ever exclude an otherwise-live unit

    ts1, qb1, tg1 = cts[m1], np.asarray(cands.qubit)[m1], cnode[m1]
    ts2 = np.where(has2, cts[m2safe], -1)
    qb2 = np.where(has2, np.asarray(cands.qubit)[m2safe], -1)
    tg2 = np.where(has2, cnode[m2safe], -1)

    def admissible(members) -> bool:
        fresh = [(int(cnode[c]), int(cts[c]), int(cte[c])) for c in members if csel[c] == 0.0]
        if not fresh:
            return False
        if len(fresh) == 2 and fresh[0][0] == fresh[1][0]:
            nd = fresh[0][0]
            a = max(fresh[0][1], fresh[1][1])
            b = min(fresh[0][2], fresh[1][2])
            for _, s, e in fresh:
                if (occ[nd, s : e + 1] + 1 > cap[nd]).any():
                    return False
            if a <= b and (occ[nd, a : b + 1] + 2 > cap[nd]).any():
                return False
            return True
        return all(not (occ[nd, s : e + 1] + 1 > cap[nd]).any() for nd, s, e in fresh)

    def mark_covered(gi: int, unit_migs: tuple[Migration, ...]):
        uncovered.discard(gi)
        covered.add(gi)
        covered_map[cands.gates[gi]] = unit_migs
        for unit in table.gate_units[gi]:
            counts[unit] -= 1

    # a unit blocked by occupancy stays blocked: occupancy only grows in-run
    blocked = np.zeros(table.size, dtype=bool)
    trace: list[int] = []

    def apply_pick(pick: int, defer_prefix: bool = False):
        nonlocal spent
        members = [int(m1[pick])] + ([int(m2[pick])] if has2[pick] else [])
        touched = set()
        for cid in members:
            if csel[cid] != 0.0:
                continue
            nd, s, e = int(cnode[cid]), int(cts[cid]), int(cte[cid])
            occ[nd, s : e + 1] += 1
            weights[nd, s : e + 1] *= 2.0 ** (1.0 / cap[nd])
            touched.add(nd)
            csel[cid] = 1.0
            spent += int(ccost[cid])
            mig = cands.migration(cid)
            mig_of[cid] = mig
            selected.append(mig)
            selected_ids.append(cid)
            # pair units sharing this member shrink to one fresh half
            for unit in table.cand_units[cid]:
                blocked[unit] = False
        if not defer_prefix:
            for nd in touched:
                np.cumsum(weights[nd] - 1.0, out=prefix[nd, 1:])
        # newly reachable coverage: home gates of new members, then pair gates
        for cid in members:
            for gi in cands.home_cov[cid]:
                if gi in uncovered:
                    mark_covered(gi, (mig_of[cid],))
            for gi in cands.pair_cov[cid]:
                if gi not in uncovered:
                    continue
                for p, ci, cj in cands.gate_pairs[gi]:
                    if csel[ci] != 0.0 and csel[cj] != 0.0:
                        mark_covered(gi, (mig_of[ci], mig_of[cj]))
                        break
        trace.append(pick)

    if trace_in:
        replayed = False
        for pick in trace_in:
            members = [int(m1[pick])] + ([int(m2[pick])] if has2[pick] else [])
            cost_new = sum(int(ccost[c]) for c in members if csel[c] == 0.0)
            if spent + cost_new > budget:
                budget_bound = True
                break
            apply_pick(pick, defer_prefix=True)
            replayed = True
        if replayed:
            np.cumsum(weights - 1.0, axis=1, out=prefix[:, 1:])

    while True:
        alive = np.flatnonzero((counts > 0) & ~blocked)
        if alive.size == 0:
            break
        am1 = m1[alive]
        am2 = m2safe[alive]
        ah2 = has2[alive]
        new1 = 1.0 - csel[am1]
        new2 = np.where(ah2, 1.0 - csel[am2], 0.0)
        aucost = ccost[am1] * new1 + ccost[am2] * new2
        ws1 = (prefix[cnode[am1], cte[am1] + 1] - prefix[cnode[am1], cts[am1]]) / ce[am1]
        ws2 = (prefix[cnode[am2], cte[am2] + 1] - prefix[cnode[am2], cts[am2]]) / ce[am2]
        auws = ws1 * new1 + ws2 * new2
        denom = np.maximum(aucost + auws, 1e-12)
        fresh = (new1 + new2) > 0
        affordable = aucost <= budget - spent
        if not budget_bound and bool((fresh & ~affordable).any()):
            budget_bound = True
        score = np.where(affordable & fresh, counts[alive] / denom, -1.0)
        pick = -1
        while pick < 0:
            best = score.max()
            if best <= 0.0:
                break
            local_ties = np.flatnonzero(score == best)
            ties = alive[local_ties]
            if ties.size > 1:
                keys = np.lexsort(
                    (ts2[ties], tg2[ties], qb2[ties], tg1[ties], qb1[ties], ts1[ties], aucost[local_ties])
                )
                ties = ties[keys]
                local_ties = local_ties[keys]
            for li, unit in zip(local_ties, ties):
                members = [int(m1[unit])] + ([int(m2[unit])] if has2[unit] else [])
                if admissible(members):
                    pick = int(unit)
                    break
                blocked[unit] = True
                score[li] = -1.0
        if pick < 0:
            break
        apply_pick(pick)

    return selected, selected_ids, covered, covered_map, weights, occ, spent, budget_bound, trace


def ag_select(budget: int, state: CoverageState, candidates: CandidateSet, n: Network, *, home_only: bool = False):
    """Budgeted max-coverage selection; returns (migrations, covered gate set).

    Convenience wrapper over one multiplicative-updates run; does not mutate
    ``state`` (the iterative driver commits the run it keeps).
    """
    table = _UnitTable(candidates, home_only)
    out = _run_ag(budget, state.uncovered, state.row_weights, table, n)
    selected, covered = out[0], out[2]
    return selected, {candidates.gates[gi] for gi in covered}


def cover_alpha(
    state: CoverageState,
    candidates: CandidateSet,
    n: Network,
    d: np.ndarray,
    alpha: float = ALPHA,
    *,
    home_only: bool = False,
    table: _UnitTable | None = None,
):
    """Smallest-budget run covering at least an alpha fraction of what remains.

    Budgets are binary-searched over [1, |uncovered| * diameter]; because raw
    coverage need not be monotone in the budget, the best result over all
    probed budgets up to the current bound is what the search inspects, and
    the best overall is committed into ``state``.
    """
    if not state.uncovered:
        return [], set()
    for gi in state.uncovered:
        if not candidates.coverable(gi, home_only):
            g = candidates.gates[gi]
            raise Uncoverable(f"gate {g.qubits}@{g.instant} has no covering candidate")
    if table is None:
        table = _UnitTable(candidates, home_only)
    already = frozenset(state.selected_ids)
    diam = int(d.max())
    target = alpha * len(state.uncovered)
    hi_b = max(1, len(state.uncovered) * diam)
    runs: dict[int, tuple] = {}
    saturated: list[int] = []  # budgets whose run never hit the budget wall

    counts0 = table.restrict_counts(state.uncovered)

    # one full-budget run first: it seeds the replay trace for every smaller
    # probe, and any run that never hits its budget answers for all larger ones
    master = _run_ag(hi_b, state.uncovered, state.row_weights, table, n, already, None, counts0)
    runs[hi_b] = master
    if not master[7]:
        saturated.append(hi_b)

    def run(budget: int):
        if budget not in runs:
            for b in saturated:
                if b <= budget:
                    runs[budget] = runs[b]
                    return runs[budget]
            runs[budget] = _run_ag(
                budget, state.uncovered, state.row_weights, table, n, already, master[8], counts0
            )
            if not runs[budget][7]:
                saturated.append(budget)
        return runs[budget]

    def covered_count(budget: int) -> int:
        return len(runs[budget][2])

    def best_upto(budget: int):
        best = None
        for b in runs:
            if b <= budget and (
                best is None
                or covered_count(b) > covered_count(best)
                or (covered_count(b) == covered_count(best) and b < best)
            ):
                best = b
        return best

    # gallop up to the first power-of-two budget meeting the target, then
    # bisect; raw coverage need not be monotone, so the enforced-monotone
    # best-so-far is what the search inspects
    probe = 1
    lo = 1
    run(probe)
    while covered_count(best_upto(probe)) < target and probe < hi_b:
        lo = probe + 1
        probe = min(probe * 2, hi_b)
        run(probe)
    hi = probe
    if covered_count(best_upto(hi)) >= target:
        while lo < hi:
            mid = (lo + hi) // 2
            run(mid)
            b = best_upto(mid)
            if b is not None and covered_count(b) >= target:
                hi = mid
            else:
                lo = mid + 1
        run(lo)
        choice = best_upto(lo)
    else:
        choice = best_upto(hi_b)

    selected, selected_ids, covered, covered_map, weights, occ, _spent, _bound, _trace = runs[choice]
    state.row_weights = weights
    state.occupancy += occ
    state.selected.extend(selected)
    state.selected_ids.extend(selected_ids)
    state.covered_map.update(covered_map)
    state.uncovered -= covered
    return selected, covered


def iterative_cover_full(c: Circuit, homes, n: Network, d: np.ndarray, mode: str = "general"):
    """Repeated alpha-covers until every non-local gate is covered.

    Rounds first respect the occupancy already committed; when the remaining
    gates can only be covered by overloading rows, counting switches to
    per-round occupancy (the union then violates memory and repair resolves
    it downstream).
    """
    home_only = mode == "home_only"
    cands = CandidateSet(c, homes, n, d)
    state = new_state(c, cands, n)
    table = _UnitTable(cands, home_only)
    while state.uncovered:
        before = len(state.uncovered)
        cover_alpha(state, cands, n, d, home_only=home_only, table=table)
        if len(state.uncovered) == before:
            g = cands.gates[next(iter(state.uncovered))]
            raise Uncoverable(f"no progress covering gate {g.qubits}@{g.instant}")
    return state.selected, state.covered_map, state


def iterative_cover(c: Circuit, homes, n: Network, d: np.ndarray, mode: str = "general") -> list[Migration]:
    selected, _map, _state = iterative_cover_full(c, homes, n, d, mode)
    return selected


def greedy_cover_full(c: Circuit, homes, n: Network, d: np.ndarray):
    """Max-coverage greedy ignoring execution memory entirely."""
    cands = CandidateSet(c, homes, n, d)
    for gi in range(len(cands.gates)):
        if not cands.coverable(gi, False):
            g = cands.gates[gi]
            raise Uncoverable(f"gate {g.qubits}@{g.instant} has no covering candidate")
    table = _UnitTable(cands, home_only=False)
    uncovered = set(range(len(cands.gates)))
    counts = table.restrict_counts(uncovered)
    m1, m2 = table.m1a, table.m2a
    has2 = m2 >= 0
    m2safe = np.where(has2, m2, 0)
    ccost = np.asarray(cands.cost, dtype=np.int64)
    csel = np.zeros(cands.num_candidates, dtype=bool)
    cts = np.asarray(cands.t_s)
    cqb = np.asarray(cands.qubit)
    cnode = np.asarray(cands.target)

    selected: list[Migration] = []
    covered_map: dict[Gate, tuple[Migration, ...]] = {}
    mig_of: dict[int, Migration] = {}

    while uncovered:
        new1 = ~csel[m1]
        new2 = has2 & ~csel[m2safe]
        ucost = ccost[m1] * new1 + ccost[m2safe] * new2
        viable = (counts > 0) & (new1 | new2)
        if not viable.any():
            g = cands.gates[next(iter(uncovered))]
            raise Uncoverable(f"no unit left for gate {g.qubits}@{g.instant}")
        order = np.lexsort(
            (
                np.where(has2, cts[m2safe], -1),
                np.where(has2, cnode[m2safe], -1),
                np.where(has2, cqb[m2safe], -1),
                cnode[m1],
                cqb[m1],
                cts[m1],
                ucost,
                -counts,
            )
        )
        pick = next(int(unit) for unit in order if viable[unit])
        members = [int(m1[pick])] + ([int(m2[pick])] if has2[pick] else [])
        for cid in members:
            if csel[cid]:
                continue
            csel[cid] = True
            mig = cands.migration(cid)
            mig_of[cid] = mig
            selected.append(mig)
        for cid in members:
            for gi in cands.home_cov[cid]:
                if gi in uncovered:
                    uncovered.discard(gi)
                    covered_map[cands.gates[gi]] = (mig_of[cid],)
                    for unit in table.gate_units[gi]:
                        counts[unit] -= 1
            for gi in list(cands.pair_cov[cid]):
                if gi not in uncovered:
                    continue
                for p, ci, cj in cands.gate_pairs[gi]:
                    if csel[ci] and csel[cj]:
                        uncovered.discard(gi)
                        covered_map[cands.gates[gi]] = (mig_of[ci], mig_of[cj])
                        for unit in table.gate_units[gi]:
                            counts[unit] -= 1
                        break
    return selected, covered_map


def greedy_cover(c: Circuit, homes, n: Network, d: np.ndarray) -> list[Migration]:
    selected, _map = greedy_cover_full(c, homes, n, d)
    return selected


def enumerate_candidates(c: Circuit, homes, n: Network, d: np.ndarray) -> CandidateSet:
    return CandidateSet(c, homes, n, d)

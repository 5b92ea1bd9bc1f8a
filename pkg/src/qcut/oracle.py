"""Brute-force optima on tiny instances.

These solvers exist to pin expected values for the heuristics and to verify
the greedy two-qubit cover; they enumerate candidate migrations directly and
search exhaustively, independent of the production selection path.
"""

from __future__ import annotations

import time
from bisect import bisect_left
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .circuit import UNARY, Circuit
from .coverage import Migration
from .errors import LimitExceeded, NotTwoQubits, Uncoverable
from .network import Network, all_pairs_distance


@dataclass(frozen=True)
class OracleLimits:
    max_qubits: int = 6
    max_gates: int = 14
    max_nodes: int = 3
    max_migrations: int = 12
    timeout: float = 120.0


DEFAULT_LIMITS = OracleLimits()


def _check_limits(c: Circuit, limits: OracleLimits, n: Network | None = None):
    if c.num_qubits > limits.max_qubits:
        raise LimitExceeded(f"{c.num_qubits} qubits exceeds oracle limit {limits.max_qubits}")
    if len(c.gates) > limits.max_gates:
        raise LimitExceeded(f"{len(c.gates)} gates exceeds oracle limit {limits.max_gates}")
    if n is not None and n.num_nodes > limits.max_nodes:
        raise LimitExceeded(f"{n.num_nodes} nodes exceeds oracle limit {limits.max_nodes}")


def _maximal_intervals(unary: list[int], lo: int, hi: int) -> list[tuple[int, int]]:
    bounds = [lo - 1] + unary + [hi + 1]
    return [(a + 1, b - 1) for a, b in zip(bounds, bounds[1:]) if a + 1 <= b - 1]


def oracle_pair_cover(pair_circuit: Circuit, limits: OracleLimits = DEFAULT_LIMITS) -> int:
    """Exact minimum number of home-covering migrations for a 2-qubit circuit.

    Exhausts subsets of maximal unary-free intervals by increasing size.
    """
    if pair_circuit.num_qubits != 2:
        raise NotTwoQubits(f"expected 2 qubits, got {pair_circuit.num_qubits}")
    _check_limits(pair_circuit, limits)
    lo, hi = pair_circuit.span
    binaries = [g.instant for g in pair_circuit.gates if g.is_binary]
    if not binaries:
        return 0
    covers = []
    for q in (0, 1):
        unary = [g.instant for g in pair_circuit.gates if g.kind == UNARY and g.qubits[0] == q]
        for a, b in _maximal_intervals(unary, lo, hi):
            inside = frozenset(t for t in binaries if a <= t <= b)
            if inside:
                covers.append(inside)
    covers = sorted(set(covers), key=sorted)
    everything = set(binaries)
    for k in range(1, len(covers) + 1):
        for combo in combinations(covers, k):
            union = set().union(*combo)
            if union == everything:
                return k
    raise Uncoverable("no interval subset covers all binary gates")


def _candidate_migrations(c: Circuit, homes, n: Network, d: np.ndarray):
    """All maximal-interval and instantaneous migrations that cover something.

    Returns (gates, units) where units[i] lists the migration tuples able to
    cover gate i, each unit being one or two Migration objects.
    """
    lo, hi = c.span
    unary: dict[int, list[int]] = {}
    for g in c.gates:
        if g.kind == UNARY:
            unary.setdefault(g.qubits[0], []).append(g.instant)
    gates = [g for g in c.gates if g.is_binary and homes[g.qubits[0]] != homes[g.qubits[1]]]

    def intervals_around(q: int, t: int):
        marks = unary.get(q, [])
        pos = bisect_left(marks, t)
        start = marks[pos - 1] + 1 if pos > 0 else lo
        end = marks[pos] - 1 if pos < len(marks) else hi
        out = [(start, end)]
        if (t - 1, t + 1) != (start, end):
            out.append((t - 1, t + 1))
        return out

    units: list[list[tuple[Migration, ...]]] = []
    for g in gates:
        qi, qj = g.qubits
        t = g.instant
        opts: list[tuple[Migration, ...]] = []
        for q, other in ((qi, qj), (qj, qi)):
            p = homes[other]
            if n.exec_mem[p] < 1:
                continue
            for a, b in intervals_around(q, t):
                opts.append((Migration(q, p, a, b, int(d[homes[q], p])),))
        for p in range(n.num_nodes):
            if p in (homes[qi], homes[qj]) or n.exec_mem[p] < 2:
                continue
            for ai, bi in intervals_around(qi, t):
                for aj, bj in intervals_around(qj, t):
                    opts.append(
                        (
                            Migration(qi, p, ai, bi, int(d[homes[qi], p])),
                            Migration(qj, p, aj, bj, int(d[homes[qj], p])),
                        )
                    )
        units.append(sorted(set(opts), key=lambda u: (len(u), [m.sort_key() for m in u])))
    return gates, units


def oracle_cover(
    c: Circuit,
    homes,
    n: Network,
    d: np.ndarray | None = None,
    mode: str = "general",
    limits: OracleLimits = DEFAULT_LIMITS,
) -> tuple[int, list[Migration]]:
    """Exact minimum-cost feasible cover for a fixed assignment.

    Branch-and-bound over covering units of the earliest uncovered gate,
    respecting execution memory exactly.
    """
    _check_limits(c, limits, n)
    if d is None:
        d = all_pairs_distance(n)
    gates, units = _candidate_migrations(c, homes, n, d)
    if mode == "home_only":
        units = [[u for u in opts if len(u) == 1] for opts in units]
    for g, opts in zip(gates, units):
        if not opts:
            raise Uncoverable(f"gate {g.qubits}@{g.instant} has no covering migration")
    if not gates:
        return 0, []

    lo, hi = c.span
    cap = np.asarray(n.exec_mem)
    deadline = time.monotonic() + limits.timeout
    best_cost = [None]
    best_set: list[list[Migration]] = [[]]

    def covered_by(mset, gate) -> bool:
        qi, qj = gate.qubits
        t = gate.instant
        sides_i, sides_j = set(), set()
        for m in mset:
            if not m.t_s <= t <= m.t_e:
                continue
            if m.qubit == qi:
                if m.target == homes[qj]:
                    return True
                sides_i.add(m.target)
            elif m.qubit == qj:
                if m.target == homes[qi]:
                    return True
                sides_j.add(m.target)
        return bool(sides_i & sides_j)

    def feasible_add(occ, m) -> bool:
        return bool((occ[m.target, m.t_s - lo : m.t_e - lo + 1] < cap[m.target]).all())

    def dfs(idx, chosen, occ, cost):
        if time.monotonic() > deadline:
            raise LimitExceeded("oracle timeout")
        if best_cost[0] is not None and cost >= best_cost[0]:
            return
        while idx < len(gates) and covered_by(chosen, gates[idx]):
            idx += 1
        if idx == len(gates):
            best_cost[0] = cost
            best_set[0] = list(chosen)
            return
        if len(chosen) >= limits.max_migrations:
            return
        for unit in units[idx]:
            fresh = [m for m in unit if m not in chosen]
            extra = sum(m.cost for m in fresh)
            if best_cost[0] is not None and cost + extra >= best_cost[0]:
                continue
            ok = True
            for m in fresh:
                if not feasible_add(occ, m):
                    ok = False
                    break
                occ[m.target, m.t_s - lo : m.t_e - lo + 1] += 1
                chosen.append(m)
            if ok:
                dfs(idx + 1, chosen, occ, cost + extra)
                applied = fresh
            else:
                applied = [m for m in fresh if m in chosen]
            for m in applied:
                occ[m.target, m.t_s - lo : m.t_e - lo + 1] -= 1
                chosen.remove(m)

    occ0 = np.zeros((n.num_nodes, hi - lo + 1), dtype=np.int64)
    dfs(0, [], occ0, 0)
    if best_cost[0] is None:
        raise Uncoverable("no feasible cover exists within limits")
    return best_cost[0], sorted(best_set[0], key=Migration.sort_key)


def _valid_assignments(num_qubits: int, n: Network):
    storage = list(n.storage)

    def fill(q, loads, homes):
        if q == num_qubits:
            yield tuple(homes)
            return
        for p in range(n.num_nodes):
            if loads[p] < storage[p]:
                loads[p] += 1
                homes.append(p)
                yield from fill(q + 1, loads, homes)
                homes.pop()
                loads[p] -= 1

    yield from fill(0, [0] * n.num_nodes, [])


def oracle_dqcm(
    c: Circuit,
    n: Network,
    mode: str = "general",
    limits: OracleLimits = DEFAULT_LIMITS,
) -> tuple[int, list[Migration], tuple[int, ...]]:
    """Optimal (assignment, feasible cover) pair over all storage-valid assignments."""
    _check_limits(c, limits, n)
    d = all_pairs_distance(n)
    best = None
    for homes in _valid_assignments(c.num_qubits, n):
        try:
            cost, migs = oracle_cover(c, homes, n, d, mode, limits)
        except Uncoverable:
            continue
        if best is None or cost < best[0]:
            best = (cost, migs, homes)
    if best is None:
        raise Uncoverable("every storage-valid assignment is uncoverable")
    return best


def oracle_dqc(
    c: Circuit,
    n: Network,
    max_cuts: int = 1,
    limits: OracleLimits = DEFAULT_LIMITS,
) -> int:
    """Optimal total cost over cut subsets (size <= max_cuts) and assignments.

    Segment assignments are chosen jointly by dynamic programming over the
    segment chain; teleport costs couple only consecutive segments.
    """
    if max_cuts > 2:
        raise LimitExceeded("oracle_dqc supports at most 2 cuts")
    _check_limits(c, limits, n)
    d = all_pairs_distance(n)
    candidates = sorted(
        {g.instant - 1 for g in c.gates if g.is_binary and g.instant - 1 > c.span[0]}
    )
    assignments = list(_valid_assignments(c.num_qubits, n))
    if not assignments:
        raise Uncoverable("no storage-valid assignment")

    from .circuit import segment as split_circuit

    cover_memo: dict[tuple, int | None] = {}

    def seg_cost(view, homes):
        key = (view.span, homes)
        if key not in cover_memo:
            try:
                cover_memo[key] = oracle_cover(view, homes, n, d, "general", limits)[0]
            except Uncoverable:
                cover_memo[key] = None
        return cover_memo[key]

    def chain_cost(cuts) -> int | None:
        views = split_circuit(c, cuts)
        # dp[a] = best cost of the chain so far ending with assignment a
        dp = {a: seg_cost(views[0], a) for a in assignments}
        dp = {a: v for a, v in dp.items() if v is not None}
        if not dp:
            return None
        for view, t in zip(views[1:], cuts):
            nxt = {}
            for a in assignments:
                c_seg = seg_cost(view, a)
                if c_seg is None:
                    continue
                best_prev = None
                for prev, v in dp.items():
                    tele = sum(
                        int(d[prev[q], a[q]]) for q in range(c.num_qubits) if prev[q] != a[q]
                    )
                    total = v + tele
                    if best_prev is None or total < best_prev:
                        best_prev = total
                if best_prev is not None:
                    nxt[a] = best_prev + c_seg
            if not nxt:
                return None
            dp = nxt
        return min(dp.values())

    best = None
    options = [()]
    for k in range(1, max_cuts + 1):
        options.extend(combinations(candidates, k))
    for cuts in options:
        total = chain_cost(list(cuts))
        if total is not None and (best is None or total < best):
            best = total
    if best is None:
        raise Uncoverable("no feasible plan at any cut subset")
    return best

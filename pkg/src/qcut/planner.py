"""Teleportation cut placement and full-plan assembly.

A plan partitions the timebase at even cut instants, solves each segment
with the migrations-only pipeline (interaction weights, tabu assignment,
iterative cover, repair), and stitches segments with teleportations wherever
a qubit's home changes across a cut. Two cut-placement heuristics are
provided: a left-to-right scan that accepts a cut when it lowers the running
estimate, and a global iterative search that repeatedly inserts the best cut
anywhere until no insertion helps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .assignment import TabuParams, storage_valid, tabu_search
from .circuit import UNARY, Circuit
from .coverage import Migration, gate_covered, greedy_cover_full, iterative_cover_full
from .interaction import CircuitTimelines
from .network import Network, all_pairs_distance
from .feasibility import check_feasible, repair


@dataclass(frozen=True)
class Teleportation:
    qubit: int
    target: int
    instant: int
    cost: int


@dataclass(frozen=True)
class SegmentSolution:
    span: tuple[int, int]
    homes: tuple[int, ...]
    migrations: tuple[Migration, ...]

    @property
    def cost(self) -> int:
        return sum(m.cost for m in self.migrations)


@dataclass(frozen=True)
class Plan:
    cuts: tuple[int, ...]
    segments: tuple[SegmentSolution, ...]
    teleports: tuple[Teleportation, ...]
    total_cost: int

    @property
    def migration_cost(self) -> int:
        return sum(m.cost for seg in self.segments for m in seg.migrations)

    @property
    def teleport_cost(self) -> int:
        return sum(t.cost for t in self.teleports)

    @property
    def migrations(self) -> list[Migration]:
        return [m for seg in self.segments for m in seg.migrations]


def teleports_between(a_prev, a_next, t: int, d: np.ndarray) -> tuple[list[Teleportation], int]:
    """One teleportation per qubit whose home differs, at even instant t."""
    out = []
    for q, (p_old, p_new) in enumerate(zip(a_prev, a_next)):
        if p_old != p_new:
            out.append(Teleportation(q, int(p_new), t, int(d[p_old, p_new])))
    return out, sum(tp.cost for tp in out)


def _teleport_cost(a_prev, a_next, d: np.ndarray) -> int:
    return int(sum(d[p, q] for p, q in zip(a_prev, a_next) if p != q))


class PlannerContext:
    """Shared immutable inputs plus a memo of segment solutions."""

    def __init__(self, c: Circuit, n: Network, d: np.ndarray, params: TabuParams):
        self.circuit = c
        self.network = n
        self.d = d
        self.params = params
        self.timelines = CircuitTimelines(c)
        self.memo: dict[tuple, SegmentSolution] = {}

    def view(self, lo: int, hi: int) -> Circuit:
        gates = tuple(g for g in self.circuit.gates if lo < g.instant < hi)
        return Circuit(self.circuit.num_qubits, gates, (lo, hi))

    def solve(self, lo: int, hi: int, seed: tuple[int, ...] | None) -> SegmentSolution:
        key = (lo, hi, seed)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        sol = solve_segment_raw(self.view(lo, hi), self.network, self.d, self.params, seed, self.timelines)
        self.memo[key] = sol
        return sol


def solve_segment_raw(
    view: Circuit,
    n: Network,
    d: np.ndarray,
    params: TabuParams,
    seed_assignment: tuple[int, ...] | None,
    timelines: CircuitTimelines | None = None,
) -> SegmentSolution:
    """Migrations-only pipeline on one segment view."""
    lo, hi = view.span
    if timelines is not None:
        w = timelines.window_matrix(lo, hi)
    else:
        w = CircuitTimelines(view).window_matrix(lo, hi)
    homes = tabu_search(w, n, d, params, initial=seed_assignment)
    migrations, covered_map, _state = iterative_cover_full(view, homes, n, d, "general")
    if not check_feasible(migrations, n, hi, lo).ok:
        migrations = repair(migrations, n, view, covered_map, homes)
    return SegmentSolution((lo, hi), homes, tuple(migrations))


def solve_segment(
    view: Circuit,
    n: Network,
    d: np.ndarray,
    params: TabuParams,
    seed_assignment: tuple[int, ...] | None = None,
):
    """Public segment solve: (assignment, migrations, migration cost)."""
    sol = solve_segment_raw(view, n, d, params, seed_assignment)
    return sol.homes, list(sol.migrations), sol.cost


def _assemble(ctx: PlannerContext, cuts: list[int]) -> Plan:
    """Left-to-right chain solve of all segments, seeding each with its predecessor."""
    lo, hi = ctx.circuit.span
    bounds = [lo] + sorted(cuts) + [hi]
    segments = []
    teleports = []
    prev: SegmentSolution | None = None
    for a, b in zip(bounds, bounds[1:]):
        sol = ctx.solve(a, b, prev.homes if prev else None)
        if prev is not None:
            tps, _ = teleports_between(prev.homes, sol.homes, a, ctx.d)
            teleports.extend(tps)
        segments.append(sol)
        prev = sol
    total = sum(s.cost for s in segments) + sum(t.cost for t in teleports)
    return Plan(tuple(sorted(cuts)), tuple(segments), tuple(teleports), total)


def dqcm_plan(c: Circuit, n: Network, d: np.ndarray, params: TabuParams) -> Plan:
    """Migrations-only plan: the whole circuit as a single segment."""
    ctx = PlannerContext(c, n, d, params)
    return _assemble(ctx, [])


def dqcm_greedy_plan(c: Circuit, n: Network, d: np.ndarray, params: TabuParams) -> Plan:
    """Single-segment plan using the memory-oblivious greedy cover plus repair."""
    lo, hi = c.span
    w = CircuitTimelines(c).window_matrix(lo, hi)
    homes = tabu_search(w, n, d, params, initial=None)
    migrations, covered_map = greedy_cover_full(c, homes, n, d)
    if not check_feasible(migrations, n, hi, lo).ok:
        migrations = repair(migrations, n, c, covered_map, homes)
    seg = SegmentSolution((lo, hi), homes, tuple(migrations))
    return Plan((), (seg,), (), seg.cost)


def candidate_cuts(c: Circuit) -> list[int]:
    """Even instants immediately preceding binary gates, strictly inside the span."""
    lo, hi = c.span
    return sorted({g.instant - 1 for g in c.gates if g.is_binary and lo < g.instant - 1 < hi})


def sequence_plan(c: Circuit, n: Network, d: np.ndarray, params: TabuParams) -> Plan:
    """Left-to-right cut acceptance.

    For each candidate instant, the cost of cutting there (and nowhere later)
    is estimated against the best known no-further-cut estimate; the cut is
    kept only when strictly cheaper. Prefix segments are frozen as they are
    accepted and each solve is seeded with its predecessor's assignment.
    """
    ctx = PlannerContext(c, n, d, params)
    lo, hi = c.span
    prefix: list[SegmentSolution] = []
    prefix_mig_cost = 0
    prefix_tele_cost = 0
    last_cut = lo
    prev_homes: tuple[int, ...] | None = None
    suffix = ctx.solve(lo, hi, None)
    cost_without = suffix.cost

    for t in candidate_cuts(c):
        if t <= last_cut:
            continue
        left = ctx.solve(last_cut, t, prev_homes)
        right = ctx.solve(t, hi, left.homes)
        cost_with = prefix_mig_cost + prefix_tele_cost + left.cost + right.cost
        if prev_homes is not None:
            cost_with += _teleport_cost(prev_homes, left.homes, d)
        cost_with += _teleport_cost(left.homes, right.homes, d)
        if cost_with < cost_without:
            if prev_homes is not None:
                prefix_tele_cost += _teleport_cost(prev_homes, left.homes, d)
            prefix.append(left)
            prefix_mig_cost += left.cost
            prev_homes = left.homes
            last_cut = t
            suffix = right
            cost_without = cost_with

    segments = prefix + [suffix]
    teleports = []
    for seg_prev, seg_next in zip(segments, segments[1:]):
        tps, _ = teleports_between(seg_prev.homes, seg_next.homes, seg_next.span[0], d)
        teleports.extend(tps)
    cuts = tuple(seg.span[0] for seg in segments[1:])
    total = sum(s.cost for s in segments) + sum(tp.cost for tp in teleports)
    return Plan(cuts, tuple(segments), tuple(teleports), total)


def split_plan(c: Circuit, n: Network, d: np.ndarray, params: TabuParams) -> Plan:
    """Global iterative cut insertion.

    Each round scores every unused candidate instant by re-solving only the
    segment it splits (other segments and their assignments stay cached),
    inserts the best strictly improving one, and re-assembles the chain; the
    round's insertion is reverted if the re-assembled plan fails to improve.
    """
    ctx = PlannerContext(c, n, d, params)
    lo, hi = c.span
    cands = candidate_cuts(c)
    cuts: list[int] = []
    plan = _assemble(ctx, cuts)

    while True:
        bounds = [lo] + cuts + [hi]
        seg_of: dict[int, int] = {}
        for t in cands:
            if t in cuts:
                continue
            for i, (a, b) in enumerate(zip(bounds, bounds[1:])):
                if a < t < b:
                    seg_of[t] = i
                    break
        best_t = None
        best_est = None
        for t, i in sorted(seg_of.items()):
            a, b = bounds[i], bounds[i + 1]
            seed = plan.segments[i - 1].homes if i > 0 else None
            left = ctx.solve(a, t, seed)
            right = ctx.solve(t, b, left.homes)
            est = plan.total_cost - plan.segments[i].cost + left.cost + right.cost
            prev_homes = plan.segments[i - 1].homes if i > 0 else None
            next_homes = plan.segments[i + 1].homes if i + 1 < len(plan.segments) else None
            if prev_homes is not None:
                est -= _teleport_cost(prev_homes, plan.segments[i].homes, d)
                est += _teleport_cost(prev_homes, left.homes, d)
            est += _teleport_cost(left.homes, right.homes, d)
            if next_homes is not None:
                est -= _teleport_cost(plan.segments[i].homes, next_homes, d)
                est += _teleport_cost(right.homes, next_homes, d)
            if est < plan.total_cost and (best_est is None or est < best_est):
                best_est = est
                best_t = t
        if best_t is None:
            break
        trial_cuts = sorted(cuts + [best_t])
        trial = _assemble(ctx, trial_cuts)
        if trial.total_cost >= plan.total_cost:
            break
        cuts = trial_cuts
        plan = trial
    return plan


def merge_adjacent_migrations(plan: Plan, c: Circuit) -> Plan:
    """Fuse equal-target migrations that touch across a cut without a home change."""
    if not plan.cuts:
        return plan
    seg_migs = [list(seg.migrations) for seg in plan.segments]
    total = plan.total_cost
    for i, t in enumerate(plan.cuts):
        left, right = seg_migs[i], seg_migs[i + 1]
        left_homes = plan.segments[i].homes
        right_homes = plan.segments[i + 1].homes
        for m1 in sorted([m for m in left if m.t_e == t], key=Migration.sort_key):
            if left_homes[m1.qubit] != right_homes[m1.qubit]:
                continue
            partner = next(
                (
                    m2
                    for m2 in sorted(right, key=Migration.sort_key)
                    if m2.t_s == t and m2.qubit == m1.qubit and m2.target == m1.target
                ),
                None,
            )
            if partner is None:
                continue
            merged = Migration(m1.qubit, m1.target, m1.t_s, partner.t_e, m1.cost)
            left.remove(m1)
            right.remove(partner)
            left.append(merged)
            total -= partner.cost
    segments = tuple(
        SegmentSolution(seg.span, seg.homes, tuple(sorted(migs, key=Migration.sort_key)))
        for seg, migs in zip(plan.segments, seg_migs)
    )
    return Plan(plan.cuts, segments, plan.teleports, total)


def overall_plan(c: Circuit, n: Network, d: np.ndarray, params: TabuParams) -> Plan:
    """Cheaper of the two cut heuristics, then cross-cut migration merging."""
    seq = sequence_plan(c, n, d, params)
    spl = split_plan(c, n, d, params)
    chosen = spl if spl.total_cost <= seq.total_cost else seq
    return merge_adjacent_migrations(chosen, c)


def _homes_at(plan: Plan, instant: int) -> tuple[int, ...] | None:
    """Assignment in force at an instant; at a cut, the post-teleport one."""
    for seg in plan.segments:
        a, b = seg.span
        if a <= instant < b:
            return seg.homes
    last = plan.segments[-1]
    if instant == last.span[1]:
        return last.homes
    return None


def validate_plan(plan: Plan, c: Circuit, n: Network) -> list[str]:
    """Recheck every plan invariant; returns human-readable violations."""
    out: list[str] = []
    d = all_pairs_distance(n)
    lo, hi = c.span

    cuts = list(plan.cuts)
    if cuts != sorted(cuts) or len(set(cuts)) != len(cuts):
        out.append("cuts not sorted or not distinct")
    for t in cuts:
        if t % 2 != 0 or not lo < t < hi:
            out.append(f"cut {t} not an even instant inside ({lo}, {hi})")
    bounds = [lo] + cuts + [hi]
    spans = [seg.span for seg in plan.segments]
    if spans != list(zip(bounds, bounds[1:])):
        out.append(f"segment spans {spans} do not partition the circuit at cuts {cuts}")
        return out

    for seg in plan.segments:
        if len(seg.homes) != c.num_qubits:
            out.append(f"segment {seg.span}: assignment over {len(seg.homes)} qubits")
        elif not storage_valid(seg.homes, n):
            out.append(f"segment {seg.span}: storage overflow")

    # teleports: exactly the differences at each cut
    by_cut: dict[int, list[Teleportation]] = {}
    for tp in plan.teleports:
        by_cut.setdefault(tp.instant, []).append(tp)
    for tp_t in by_cut:
        if tp_t not in cuts:
            out.append(f"teleports at non-cut instant {tp_t}")
    for i, t in enumerate(cuts):
        a_prev = plan.segments[i].homes
        a_next = plan.segments[i + 1].homes
        expected = {
            (q, a_next[q], int(d[a_prev[q], a_next[q]]))
            for q in range(c.num_qubits)
            if a_prev[q] != a_next[q]
        }
        actual = {(tp.qubit, tp.target, tp.cost) for tp in by_cut.get(t, [])}
        if expected != actual:
            out.append(f"teleports at {t} mismatch: expected {sorted(expected)}, got {sorted(actual)}")

    unary_of: dict[int, list[int]] = {}
    for g in c.gates:
        if g.kind == UNARY:
            unary_of.setdefault(g.qubits[0], []).append(g.instant)

    # migration validity (interval shape, home constancy, unary-freeness, cost)
    all_migs = plan.migrations
    for m in all_migs:
        if m.t_s % 2 or m.t_e % 2 or m.t_s > m.t_e or m.t_s < lo or m.t_e > hi:
            out.append(f"migration {m}: malformed interval")
            continue
        probe = m.t_s if m.t_s == m.t_e else m.t_s + 1
        homes = _homes_at(plan, probe)
        if homes is None:
            out.append(f"migration {m}: interval outside every segment")
            continue
        home = homes[m.qubit]
        for t_cut in cuts:
            if m.t_s < t_cut < m.t_e:
                before = _homes_at(plan, t_cut - 1)[m.qubit]
                after = _homes_at(plan, t_cut)[m.qubit]
                if before != after:
                    out.append(f"migration {m}: home changes at cut {t_cut} inside interval")
        if m.target == home:
            out.append(f"migration {m}: target equals home {home}")
        if m.cost != int(d[home, m.target]):
            out.append(f"migration {m}: cost {m.cost} != distance {int(d[home, m.target])}")
        if any(m.t_s < t < m.t_e for t in unary_of.get(m.qubit, [])):
            out.append(f"migration {m}: unary gate inside open interval")

    # per-segment feasibility; a migration touching a boundary belongs to the
    # segment it lives in, so copies dying/created exactly at a cut do not
    # double-count on the boundary row
    cap = np.asarray(n.exec_mem)
    for seg in plan.segments:
        a, b = seg.span
        occ = np.zeros((n.num_nodes, b - a + 1), dtype=np.int64)
        for m in all_migs:
            if m.t_e <= a or m.t_s >= b:
                continue
            s = max(m.t_s, a)
            e = min(m.t_e, b)
            occ[m.target, s - a : e - a + 1] += 1
        bad = np.nonzero(occ > cap[:, None])
        for p, t in zip(*bad):
            out.append(
                f"segment {seg.span}: occupancy {int(occ[p, t])} > {int(cap[p])} at node {int(p)} instant {int(t) + a}"
            )

    # coverage of every non-local gate
    for g in c.gates:
        if not g.is_binary:
            continue
        homes = _homes_at(plan, g.instant)
        if homes is None:
            out.append(f"gate {g.qubits}@{g.instant} outside every segment")
            continue
        if homes[g.qubits[0]] == homes[g.qubits[1]]:
            continue
        if not gate_covered(g, homes, all_migs):
            out.append(f"non-local gate {g.qubits}@{g.instant} not covered")

    expected_total = sum(m.cost for m in all_migs) + sum(tp.cost for tp in plan.teleports)
    if plan.total_cost != expected_total:
        out.append(f"total_cost {plan.total_cost} != recomputed {expected_total}")
    return out


def plan_to_dict(plan: Plan) -> dict:
    return {
        "cuts": list(plan.cuts),
        "segments": [
            {
                "span": list(seg.span),
                "homes": list(seg.homes),
                "migrations": [[m.qubit, m.target, m.t_s, m.t_e, m.cost] for m in seg.migrations],
            }
            for seg in plan.segments
        ],
        "teleports": [[tp.qubit, tp.target, tp.instant, tp.cost] for tp in plan.teleports],
        "total_cost": plan.total_cost,
    }


def plan_from_dict(data: dict) -> Plan:
    segments = tuple(
        SegmentSolution(
            tuple(seg["span"]),
            tuple(seg["homes"]),
            tuple(Migration(*m) for m in seg["migrations"]),
        )
        for seg in data["segments"]
    )
    teleports = tuple(Teleportation(*tp) for tp in data["teleports"])
    return Plan(tuple(data["cuts"]), segments, teleports, int(data["total_cost"]))


def save_plan(plan: Plan, path) -> None:
    Path(path).write_text(json.dumps(plan_to_dict(plan), indent=2, sort_keys=True) + "\n")


def load_plan(path) -> Plan:
    return plan_from_dict(json.loads(Path(path).read_text()))

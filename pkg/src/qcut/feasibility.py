"""Post-processing: shrink migrations until execution memory is respected.

Selected migrations are feasible within each selection round but their union
may overload a node. The repair loop repeatedly takes an offending migration
covering the fewest gates and replaces it with minimal-duration migrations
around the gates only it covers. Minimal replacements for gates at adjacent
instants are fused so they never collide with each other. Two escalations
handle rows that shrinking cannot clear: re-covering one occupant's gates
through different nodes, and as a final resort rebuilding the whole cover
from instantaneous migrations placed under true occupancy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate
from .coverage import Migration, covers_gate
from .errors import IrreparableCapacity
from .network import Network, all_pairs_distance


@dataclass(frozen=True)
class ViolationReport:
    rows: tuple[tuple[int, int, int, int], ...]  # (node, instant, occupancy, capacity)

    @property
    def ok(self) -> bool:
        return not self.rows


def _occupancy(ms, num_nodes: int, span: tuple[int, int]) -> np.ndarray:
    lo, hi = span
    occ = np.zeros((num_nodes, hi - lo + 1), dtype=np.int64)
    for m in ms:
        occ[m.target, m.t_s - lo : m.t_e - lo + 1] += 1
    return occ


def check_feasible(ms, n: Network, horizon: int, span_start: int = 0) -> ViolationReport:
    """Exact occupancy sweep over every (node, instant) row."""
    occ = _occupancy(ms, n.num_nodes, (span_start, horizon))
    cap = np.asarray(n.exec_mem)
    rows = []
    bad_nodes, bad_ts = np.nonzero(occ > cap[:, None])
    for p, t in zip(bad_nodes, bad_ts):
        rows.append((int(p), int(t) + span_start, int(occ[p, t]), int(cap[p])))
    return ViolationReport(tuple(sorted(rows)))


def _merge_runs(instants: list[int]) -> list[tuple[int, int]]:
    """Minimal even-endpoint intervals around sorted gate instants.

    Gates at consecutive odd instants share an even boundary, so their
    minimal intervals are fused into one piece to avoid self-overlap.
    """
    pieces = []
    i = 0
    while i < len(instants):
        j = i
        while j + 1 < len(instants) and instants[j + 1] == instants[j] + 2:
            j += 1
        pieces.append((instants[i] - 1, instants[j] + 1))
        i = j + 1
    return pieces


def _find_unit(gate: Gate, homes, migrations) -> tuple[Migration, ...] | None:
    """Deterministic covering unit for a gate among the given migrations."""
    singles = sorted((m for m in migrations if covers_gate(m, gate, homes)), key=Migration.sort_key)
    if singles:
        return (singles[0],)
    qi, qj = gate.qubits
    t = gate.instant
    side_i: dict[int, Migration] = {}
    side_j: dict[int, Migration] = {}
    for m in sorted(migrations, key=Migration.sort_key):
        if not m.t_s <= t <= m.t_e:
            continue
        if m.qubit == qi:
            side_i.setdefault(m.target, m)
        elif m.qubit == qj:
            side_j.setdefault(m.target, m)
    for p in sorted(side_i):
        if p in side_j:
            return (side_i[p], side_j[p])
    return None


class _RepairState:
    """Mutable migration set with occupancy and per-migration gate attribution."""

    def __init__(self, ms, covered_map, num_nodes: int, span: tuple[int, int]):
        self.lo, self.hi = span
        self.current: list[Migration] = []
        self.members: set[Migration] = set()
        for m in ms:
            if m not in self.members:
                self.current.append(m)
                self.members.add(m)
        self.attribution: dict[Gate, tuple[Migration, ...]] = dict(covered_map)
        self.mig_gates: dict[Migration, list[Gate]] = {m: [] for m in self.current}
        for g, unit in self.attribution.items():
            for m in unit:
                self.mig_gates.setdefault(m, []).append(g)
        for gates in self.mig_gates.values():
            gates.sort(key=lambda g: g.instant)
        self.occ = _occupancy(self.current, num_nodes, span)

    def add(self, m: Migration):
        if m not in self.members:
            self.current.append(m)
            self.members.add(m)
            self.mig_gates.setdefault(m, [])
            self.occ[m.target, m.t_s - self.lo : m.t_e - self.lo + 1] += 1

    def remove(self, m: Migration):
        self.current.remove(m)
        self.members.discard(m)
        self.occ[m.target, m.t_s - self.lo : m.t_e - self.lo + 1] -= 1

    def attribute(self, g: Gate, unit: tuple[Migration, ...]):
        for m in self.attribution.get(g, ()):
            gates = self.mig_gates.get(m)
            if gates is not None and g in gates:
                gates.remove(g)
        self.attribution[g] = unit
        for m in unit:
            self.mig_gates.setdefault(m, []).append(g)
            self.mig_gates[m].sort(key=lambda x: x.instant)


def repair(
    ms,
    n: Network,
    c: Circuit,
    covered_map: dict[Gate, tuple[Migration, ...]],
    homes,
) -> list[Migration]:
    """Feasible migration set preserving every originally covered gate.

    Raises IrreparableCapacity when a used target lacks even one memory slot,
    a pair-covered gate sits at a node with fewer than two slots, or no
    alternative coverage exists for a deadlocked violation.
    """
    exec_mem = n.exec_mem
    for m in ms:
        if exec_mem[m.target] < 1:
            raise IrreparableCapacity(f"target {m.target} has no execution memory")
    for gate, unit in covered_map.items():
        if len(unit) == 2 and exec_mem[unit[0].target] < 2:
            raise IrreparableCapacity(
                f"pair-covered gate at node {unit[0].target} with e={exec_mem[unit[0].target]}"
            )

    lo, hi = c.span
    if check_feasible(ms, n, hi, lo).ok:
        return list(ms)

    cap = np.asarray(exec_mem)
    st = _RepairState(ms, covered_map, n.num_nodes, (lo, hi))
    dist = None  # computed lazily, only deadlock re-covers need it

    def others_cover(g: Gate, m: Migration):
        return _find_unit(g, homes, [x for x in st.current if x != m])

    def reattribute(g: Gate):
        unit = _find_unit(g, homes, st.current)
        if unit is None:
            raise IrreparableCapacity(f"lost coverage of gate {g.qubits}@{g.instant}")
        st.attribute(g, unit)

    def shrink(m: Migration) -> bool:
        """Replace m by minimal pieces around its exclusively covered gates."""
        mine = list(st.mig_gates.get(m, ()))
        exclusive = [g for g in mine if others_cover(g, m) is None]
        pieces = _merge_runs([g.instant for g in exclusive])
        if pieces == [(m.t_s, m.t_e)]:
            return False
        st.remove(m)
        piece_migs = [Migration(m.qubit, m.target, a, b, m.cost) for a, b in pieces]
        for pm in piece_migs:
            st.add(pm)
        for g in exclusive:
            pm = next(p for p in piece_migs if p.t_s <= g.instant <= p.t_e)
            st.attribute(g, tuple(pm if x == m else x for x in st.attribution[g]))
        for g in mine:
            if g not in exclusive:
                reattribute(g)
        return True

    def recover_options(gate: Gate) -> list[list[Migration]]:
        """Instantaneous re-covers of a gate, cheapest first."""
        qi, qj = gate.qubits
        t = gate.instant
        options: list[tuple[int, list[Migration]]] = []
        for q, other in ((qi, qj), (qj, qi)):
            p = homes[other]
            if exec_mem[p] >= 1:
                alt = Migration(q, p, t - 1, t + 1, int(dist[homes[q], p]))
                options.append((alt.cost, [alt]))
        for p in range(n.num_nodes):
            if p in (homes[qi], homes[qj]) or exec_mem[p] < 2:
                continue
            pair = [
                Migration(qi, p, t - 1, t + 1, int(dist[homes[qi], p])),
                Migration(qj, p, t - 1, t + 1, int(dist[homes[qj], p])),
            ]
            options.append((pair[0].cost + pair[1].cost, pair))
        options.sort(key=lambda o: (o[0], [a.sort_key() for a in o[1]]))
        return [alts for _, alts in options]

    def fits(alts, skip, occ) -> bool:
        placed = []
        ok = True
        for a in alts:
            if a in skip or a in placed:
                continue
            seg = occ[a.target, a.t_s - lo : a.t_e - lo + 1]
            if (seg + 1 > cap[a.target]).any():
                ok = False
                break
            occ[a.target, a.t_s - lo : a.t_e - lo + 1] += 1
            placed.append(a)
        for a in placed:
            occ[a.target, a.t_s - lo : a.t_e - lo + 1] -= 1
        return ok

    def try_recover(m: Migration) -> bool:
        """Drop m, re-covering each of its gates without creating violations."""
        mine = list(st.mig_gates.get(m, ()))
        st.occ[m.target, m.t_s - lo : m.t_e - lo + 1] -= 1
        staged: list[Migration] = []
        plans: list[tuple[Gate, list[Migration]]] = []
        viable = True
        for g in mine:
            if others_cover(g, m) is not None:
                continue
            found = None
            for alts in recover_options(g):
                if any(a == m for a in alts):
                    continue
                if fits(alts, st.members | set(staged), st.occ):
                    found = alts
                    break
            if found is None:
                viable = False
                break
            plans.append((g, found))
            for a in found:
                if a not in st.members and a not in staged:
                    staged.append(a)
                    st.occ[a.target, a.t_s - lo : a.t_e - lo + 1] += 1
        for a in staged:
            st.occ[a.target, a.t_s - lo : a.t_e - lo + 1] -= 1
        st.occ[m.target, m.t_s - lo : m.t_e - lo + 1] += 1
        if not viable:
            return False
        st.remove(m)
        recovered = set()
        for g, alts in plans:
            for a in alts:
                st.add(a)
            st.attribute(g, tuple(alts))
            recovered.add(g)
        for g in mine:
            if g not in recovered:
                reattribute(g)
        return True

    def rebuild_all_instantaneous() -> bool:
        """Last resort: re-cover every gate with instantaneous migrations.

        Sweeps gates in time order placing the cheapest fitting re-cover under
        true cumulative occupancy. Always succeeds when every relevant node
        holds two slots (even rows then carry at most two touching copies).
        """
        gates = sorted(st.attribution, key=lambda g: g.instant)
        occ2 = np.zeros_like(st.occ)
        chosen: dict[Gate, list[Migration]] = {}
        placed: set[Migration] = set()
        order: list[Migration] = []
        for g in gates:
            found = None
            for alts in recover_options(g):
                if fits(alts, placed, occ2):
                    found = alts
                    break
            if found is None:
                return False
            chosen[g] = found
            for a in found:
                if a not in placed:
                    placed.add(a)
                    order.append(a)
                    occ2[a.target, a.t_s - lo : a.t_e - lo + 1] += 1
        st.current = order
        st.members = placed
        st.occ = occ2
        st.mig_gates = {m: [] for m in order}
        for g, alts in chosen.items():
            st.attribution[g] = tuple(alts)
            for m in alts:
                st.mig_gates[m].append(g)
        return True

    unshrinkable: set[Migration] = set()
    guard = 0
    limit = 10 * (len(st.current) + len(st.attribution) + 1) * (hi - lo + 2) + 100
    while True:
        bad = st.occ > cap[:, None]
        if not bad.any():
            break
        guard += 1
        if guard > limit:
            raise IrreparableCapacity("repair failed to converge")
        occupants = [
            m for m in st.current if bad[m.target, m.t_s - lo : m.t_e - lo + 1].any()
        ]
        occupants.sort(key=lambda m: (len(st.mig_gates.get(m, ())), m.t_e - m.t_s, m.sort_key()))
        progressed = False
        for m in occupants:
            if m in unshrinkable:
                continue
            if shrink(m):
                progressed = True
                break
            # a failed shrink is final: coverage witnesses never reappear,
            # so exclusivity only grows and the pieces stay the full interval
            unshrinkable.add(m)
        if progressed:
            continue
        if dist is None:
            dist = all_pairs_distance(n)
        if any(try_recover(m) for m in occupants):
            continue
        if not rebuild_all_instantaneous():
            raise IrreparableCapacity("violated row held by unshrinkable migrations")

    # drop migrations that no longer witness any gate's coverage
    used = {m for unit in st.attribution.values() for m in unit}
    return sorted((m for m in st.current if m in used), key=Migration.sort_key)

import random

import pytest

from qcut import all_pairs_distance, build_circuit, make_network
from qcut.circuit import cz, u
from qcut.coverage import Migration, gate_covered, greedy_cover_full, nonlocal_gates
from qcut.errors import IrreparableCapacity
from qcut.feasibility import check_feasible, repair


def test_check_feasible_counts_overlap_rows():
    n = make_network(2, [(0, 1)], [1, 1], [1, 1])
    ms = [Migration(0, 1, 2, 6, 1), Migration(1, 1, 4, 8, 1)]
    report = check_feasible(ms, n, 10)
    assert report.rows == ((1, 4, 2, 1), (1, 5, 2, 1), (1, 6, 2, 1))


def test_check_feasible_disjoint_and_empty():
    n = make_network(2, [(0, 1)], [1, 1], [1, 1])
    assert check_feasible([Migration(0, 1, 0, 2, 1), Migration(1, 1, 4, 6, 1)], n, 8).ok
    assert check_feasible([], n, 8).ok


def overlap_fixture():
    """A long migration covering two gates collides with a tight one between them."""
    c = build_circuit(4, [u(1), u(3), cz(0, 2), u(1), cz(1, 3), u(1), cz(0, 2), u(3)])
    n = make_network(2, [(0, 1)], [2, 2], [1, 1])
    homes = (0, 0, 1, 1)
    g5, g9, g13 = [g for g in c.gates if g.is_binary]
    m_long = Migration(0, 1, 4, 14, 1)
    m_tight = Migration(1, 1, 8, 10, 1)
    covered_map = {g5: (m_long,), g13: (m_long,), g9: (m_tight,)}
    return c, n, homes, covered_map, [m_long, m_tight]


def test_repair_shrinks_offender_into_pieces():
    c, n, homes, covered_map, ms = overlap_fixture()
    out = repair(ms, n, c, covered_map, homes)
    assert check_feasible(out, n, c.horizon).ok
    pieces = {(m.qubit, m.target, m.t_s, m.t_e) for m in out if m.qubit == 0}
    assert pieces == {(0, 1, 4, 6), (0, 1, 12, 14)}
    assert Migration(1, 1, 8, 10, 1) in out
    for g in nonlocal_gates(c, homes):
        assert gate_covered(g, homes, out)


def test_repair_is_fixed_point_on_feasible_input():
    n = make_network(2, [(0, 1)], [1, 1], [1, 1])
    c = build_circuit(2, [cz(0, 1)])
    ms = [Migration(0, 1, 0, 2, 1)]
    covered_map = {c.gates[0]: (ms[0],)}
    assert repair(ms, n, c, covered_map, (0, 1)) == ms


def test_repair_idempotent():
    c, n, homes, covered_map, ms = overlap_fixture()
    once = repair(ms, n, c, covered_map, homes)
    again_map = {}
    for g in nonlocal_gates(c, homes):
        witnesses = tuple(m for m in once if m.t_s <= g.instant <= g.instant <= m.t_e and m.qubit in g.qubits)
        again_map[g] = witnesses[:1] if witnesses else ()
    assert repair(once, n, c, covered_map, homes) == once


def test_pair_coverage_needs_two_slots():
    c = build_circuit(3, [cz(0, 2)])
    n = make_network(3, [(0, 1), (1, 2)], [1, 1, 1], [1, 1, 1])
    gate = c.gates[0]
    pair = (Migration(0, 1, 0, 2, 1), Migration(2, 1, 0, 2, 1))
    with pytest.raises(IrreparableCapacity):
        repair(list(pair), n, c, {gate: pair}, (0, 1, 2))


def test_zero_memory_target_rejected():
    c = build_circuit(2, [cz(0, 1)])
    n = make_network(2, [(0, 1)], [1, 1], [1, 0])
    m = Migration(0, 1, 0, 2, 1)
    with pytest.raises(IrreparableCapacity):
        repair([m], n, c, {c.gates[0]: (m,)}, (0, 1))


def line_network(k, storage, exec_mem):
    return make_network(k, [(i, i + 1) for i in range(k - 1)], [storage] * k, [exec_mem] * k)


def injected_instance(seed):
    """Memory-oblivious greedy covers on tight memory: reliably overloaded."""
    rng = random.Random(seed)
    nq = rng.randint(4, 7)
    descriptors = [
        u(rng.randrange(nq)) if rng.random() < 0.4 else cz(*rng.sample(range(nq), 2))
        for _ in range(rng.randint(6, 16))
    ]
    c = build_circuit(nq, descriptors)
    k = rng.randint(2, 3)
    n = line_network(k, storage=nq, exec_mem=rng.randint(1, 2))
    d = all_pairs_distance(n)
    homes = tuple(rng.randrange(k) for _ in range(nq))
    migs, covered_map = greedy_cover_full(c, homes, n, d)
    return c, n, homes, migs, covered_map


def test_repair_totality_on_injected_violations():
    repaired_any = 0
    for seed in range(40):
        c, n, homes, migs, covered_map = injected_instance(seed)
        if not check_feasible(migs, n, c.horizon).ok:
            repaired_any += 1
        out = repair(migs, n, c, covered_map, homes)
        assert check_feasible(out, n, c.horizon).ok
        for g in nonlocal_gates(c, homes):
            assert gate_covered(g, homes, out)
        assert repair(out, n, c, covered_map, homes) == out
    assert repaired_any >= 10  # the injection really does produce violations


def test_repair_handles_duplicate_inputs():
    n = make_network(2, [(0, 1)], [1, 1], [1, 1])
    c = build_circuit(2, [cz(0, 1), cz(0, 1)])
    m = Migration(0, 1, 0, 4, 1)
    cmap = {c.gates[0]: (m,), c.gates[1]: (m,)}
    out = repair([m, m], n, c, cmap, (0, 1))
    assert check_feasible(out, n, c.horizon).ok
    for g in c.gates:
        assert gate_covered(g, (0, 1), out)

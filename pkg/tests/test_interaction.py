import random

import numpy as np
import pytest

from qcut import build_circuit, induced_pair_circuit, interaction_matrix, ms_hc_count, oracle_pair_cover, segment
from qcut.circuit import cz, u
from qcut.errors import NotTwoQubits
from qcut.interaction import CircuitTimelines

from conftest import example_circuit, random_pair_circuit


def test_one_interval_covers_both_gates():
    c = build_circuit(2, [cz(0, 1), u(0), cz(0, 1)])
    assert ms_hc_count(c) == 1
    assert oracle_pair_cover(c) == 1


def test_unary_walls_force_two_migrations():
    c = build_circuit(2, [cz(0, 1), u(0), u(1), cz(0, 1)])
    assert ms_hc_count(c) == 2
    assert oracle_pair_cover(c) == 2


def test_no_binary_gates_means_zero():
    c = build_circuit(2, [u(0), u(1)])
    assert ms_hc_count(c) == 0


def test_requires_two_qubit_circuit():
    with pytest.raises(NotTwoQubits):
        ms_hc_count(build_circuit(3, [cz(0, 1)]))


def test_matches_oracle_on_random_circuits():
    rng = random.Random(41)
    for _ in range(60):
        c = random_pair_circuit(rng)
        assert ms_hc_count(c) == oracle_pair_cover(c)


def test_count_bounds_and_deletion_monotonicity():
    rng = random.Random(17)
    for _ in range(30):
        c = random_pair_circuit(rng)
        binaries = [i for i, g in enumerate(c.gates) if g.is_binary]
        count = ms_hc_count(c)
        assert count <= len(binaries)
        assert (count >= 1) == (len(binaries) >= 1)
        if binaries:
            drop = rng.choice(binaries)
            smaller = build_circuit(2, [(g.kind, g.qubits) for i, g in enumerate(c.gates) if i != drop])
            assert ms_hc_count(smaller) <= count


def test_unary_only_circuit_gives_zero_matrix():
    c = build_circuit(3, [u(0), u(1), u(2)])
    assert not interaction_matrix(c).any()


def test_single_cz_weight():
    c = build_circuit(2, [cz(0, 1)])
    w = interaction_matrix(c)
    assert w[0, 1] == 1 and w[1, 0] == 1 and w[0, 0] == 0


def test_example_circuit_weights():
    c = example_circuit()
    w = interaction_matrix(c)
    expected = np.zeros((4, 4), dtype=np.int64)
    for a, b in [(0, 1), (2, 3), (0, 2), (1, 3)]:
        # cross-check every pair against the exhaustive cover oracle
        pair, _ = induced_pair_circuit(c, a, b)
        expected[a, b] = expected[b, a] = oracle_pair_cover(pair)
    assert (w == expected).all()
    assert w[0, 1] == 1 and w[2, 3] == 1 and w[0, 2] == 1 and w[1, 3] == 1
    assert w[0, 3] == 0 and w[1, 2] == 0


def test_matrix_agrees_with_induced_route():
    rng = random.Random(5)
    for _ in range(10):
        descriptors = [u(rng.randrange(4)) if rng.random() < 0.5 else cz(*rng.sample(range(4), 2)) for _ in range(15)]
        c = build_circuit(4, descriptors)
        w = interaction_matrix(c)
        for a in range(4):
            for b in range(a + 1, 4):
                pair, _ = induced_pair_circuit(c, a, b)
                shared = [g for g in pair.gates if g.is_binary]
                expected = ms_hc_count(pair) if shared else 0
                assert w[a, b] == expected


def test_window_matrix_matches_view_matrix():
    rng = random.Random(29)
    for _ in range(8):
        descriptors = [u(rng.randrange(4)) if rng.random() < 0.5 else cz(*rng.sample(range(4), 2)) for _ in range(14)]
        c = build_circuit(4, descriptors)
        timelines = CircuitTimelines(c)
        cut = rng.randrange(2, c.horizon, 2)
        for view in segment(c, [cut]):
            assert (timelines.window_matrix(*view.span) == interaction_matrix(view)).all()

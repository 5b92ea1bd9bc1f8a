import random

import pytest

from qcut import all_pairs_distance, build_circuit, make_network
from qcut.circuit import cz, u


def example_circuit():
    """Four-qubit fixture: two early interaction phases, then a swapped phase.

    Gates: CZ(0,1)@1, CZ(2,3)@3, U(1)@5, CZ(0,1)@7, U(2)@9, CZ(2,3)@11,
    then CZ(0,2)/CZ(1,3) alternating at 13..21.
    """
    return build_circuit(
        4,
        [
            cz(0, 1), cz(2, 3), u(1), cz(0, 1), u(2), cz(2, 3),
            cz(0, 2), cz(1, 3), cz(0, 2), cz(1, 3), cz(0, 2),
        ],
    )


def phase_swap_circuit():
    """Unary walls isolate every cross gate, so a mid-circuit teleport wins."""
    walls = [u(0), u(1), u(2), u(3)]
    phase1 = [cz(0, 1), cz(2, 3)] + walls + [cz(0, 1), cz(2, 3)] + walls + [cz(0, 1), cz(2, 3)]
    phase2 = [cz(0, 2), cz(1, 3)] + walls + [cz(0, 2), cz(1, 3)] + walls + [cz(0, 2), cz(1, 3)]
    return build_circuit(4, phase1 + phase2)


def two_node_network(storage=(2, 2), exec_mem=(1, 1)):
    return make_network(2, [(0, 1)], storage, exec_mem)


def random_pair_circuit(rng: random.Random, max_gates: int = 8):
    """Random 2-qubit circuit for cover-count cross-checks."""
    descriptors = []
    for _ in range(rng.randint(1, max_gates)):
        if rng.random() < 0.5:
            descriptors.append(cz(0, 1))
        else:
            descriptors.append(u(rng.randrange(2)))
    return build_circuit(2, descriptors)


@pytest.fixture
def c_ex2():
    return example_circuit()


@pytest.fixture
def net2():
    return two_node_network()


@pytest.fixture
def dist2(net2):
    return all_pairs_distance(net2)

"""Seeded random instance generation for benchmarking runs."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .circuit import BINARY, UNARY, Circuit, build_circuit
from .errors import GenerationExhausted
from .network import Network, make_network

MAX_ATTEMPTS = 1000


@dataclass(frozen=True)
class NetworkGenParams:
    num_nodes: int = 10
    edge_probability: float = 0.5
    storage_range: tuple[float, float] = (0.6, 1.4)
    exec_range: tuple[float, float] = (0.3, 0.7)
    num_qubits: int = 50
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.edge_probability <= 1:
            raise ValueError("edge probability must be in (0, 1]")
        if self.num_nodes < 1:
            raise ValueError("need at least one node")
        for low, high in (self.storage_range, self.exec_range):
            if low > high:
                raise ValueError("range low exceeds high")


@dataclass(frozen=True)
class CircuitGenParams:
    num_qubits: int = 50
    gates_per_qubit: int = 50
    binary_fraction: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.binary_fraction <= 1:
            raise ValueError("binary fraction must be in [0, 1]")
        if self.binary_fraction > 0 and self.num_qubits < 2:
            raise ValueError("binary gates need at least two qubits")
        if self.num_qubits < 1:
            raise ValueError("need at least one qubit")


def _int_range(avg: float, low_frac: float, high_frac: float, floor: int = 0) -> tuple[int, int]:
    import math

    lo = max(floor, math.ceil(low_frac * avg))
    hi = max(floor, math.floor(high_frac * avg))
    if lo > hi:
        # fraction window rounds to nothing; take the nearest single integer
        mid = max(floor, int((low_frac + high_frac) / 2 * avg + 0.5))
        return mid, mid
    return lo, hi


def _connected(num_nodes: int, edges: list[tuple[int, int]]) -> bool:
    if num_nodes <= 1:
        return True
    adj = [[] for _ in range(num_nodes)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == num_nodes


def gen_network(params: NetworkGenParams) -> Network:
    """Erdős–Rényi draw, redrawn until connected; capacities drawn per node.

    Storage draws are repeated until they can hold every qubit, then the
    smallest nodes are bumped round-robin as a last resort. Execution memory
    is floored at one slot so every node can receive a migration.
    """
    rng = random.Random(params.seed)
    num_nodes = params.num_nodes
    for _ in range(MAX_ATTEMPTS):
        edges = [
            (a, b)
            for a in range(num_nodes)
            for b in range(a + 1, num_nodes)
            if rng.random() < params.edge_probability
        ]
        if _connected(num_nodes, edges):
            break
    else:
        raise GenerationExhausted("no connected graph within attempt cap")

    avg = params.num_qubits / num_nodes
    s_lo, s_hi = _int_range(avg, *params.storage_range)
    storage = None
    for _ in range(MAX_ATTEMPTS):
        draw = [rng.randint(s_lo, s_hi) for _ in range(num_nodes)]
        if sum(draw) >= params.num_qubits:
            storage = draw
            break
        storage = draw
    if sum(storage) < params.num_qubits:
        order = sorted(range(num_nodes), key=lambda p: (storage[p], p))
        i = 0
        while sum(storage) < params.num_qubits:
            storage[order[i % num_nodes]] += 1
            i += 1

    e_lo, e_hi = _int_range(avg, *params.exec_range, floor=1)
    exec_mem = [rng.randint(e_lo, e_hi) for _ in range(num_nodes)]
    return make_network(num_nodes, edges, storage, exec_mem)


def gen_circuit(params: CircuitGenParams) -> Circuit:
    """num_qubits * gates_per_qubit gates, each binary with probability f."""
    rng = random.Random(params.seed)
    total = params.num_qubits * params.gates_per_qubit
    descriptors = []
    for _ in range(total):
        if rng.random() < params.binary_fraction:
            a, b = rng.sample(range(params.num_qubits), 2)
            descriptors.append((BINARY, (a, b)))
        else:
            descriptors.append((UNARY, (rng.randrange(params.num_qubits),)))
    return build_circuit(params.num_qubits, descriptors)

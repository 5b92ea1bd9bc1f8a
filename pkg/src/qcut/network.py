"""Quantum network model: connected graph, capacities, hop distances."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import Disconnected, InsufficientStorage, QcutError


@dataclass(frozen=True)
class Network:
    """Undirected connected graph with per-node storage and execution memory.

    ``storage[p]`` bounds resident (original) qubits at node p; ``exec_mem[p]``
    bounds simultaneously held linked copies.
    """

    num_nodes: int
    edges: tuple[tuple[int, int], ...]
    storage: tuple[int, ...]
    exec_mem: tuple[int, ...]

    def __post_init__(self):
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise QcutError(f"self-loop at node {a}")
            if not (0 <= a < self.num_nodes and 0 <= b < self.num_nodes):
                raise QcutError(f"edge ({a},{b}) outside node range")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise QcutError(f"duplicate edge {key}")
            seen.add(key)
        if len(self.storage) != self.num_nodes or len(self.exec_mem) != self.num_nodes:
            raise QcutError("capacity vectors must have one entry per node")
        if any(s < 0 for s in self.storage) or any(e < 0 for e in self.exec_mem):
            raise QcutError("capacities must be non-negative")

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.num_nodes)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


def make_network(num_nodes, edges, storage, exec_mem) -> Network:
    return Network(
        num_nodes,
        tuple((min(a, b), max(a, b)) for a, b in edges),
        tuple(int(s) for s in storage),
        tuple(int(e) for e in exec_mem),
    )


def all_pairs_distance(n: Network) -> np.ndarray:
    """Hop-count distance matrix via BFS from every node.

    Raises Disconnected if any pair is unreachable.
    """
    adj = n.adjacency()
    dist = np.full((n.num_nodes, n.num_nodes), -1, dtype=np.int64)
    for src in range(n.num_nodes):
        dist[src, src] = 0
        queue = deque([src])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if dist[src, w] < 0:
                    dist[src, w] = dist[src, v] + 1
                    queue.append(w)
    if (dist < 0).any():
        raise Disconnected("network graph is not connected")
    return dist


def diameter(d: np.ndarray) -> int:
    return int(d.max()) if d.size else 0


def check_capacity(n: Network, num_qubits: int) -> None:
    """Require total storage to fit every qubit; raises InsufficientStorage."""
    total = sum(n.storage)
    if total < num_qubits:
        raise InsufficientStorage(num_qubits - total)


def network_to_dict(n: Network) -> dict:
    return {
        "num_nodes": n.num_nodes,
        "edges": [list(e) for e in n.edges],
        "storage": list(n.storage),
        "exec_mem": list(n.exec_mem),
    }


def network_from_dict(data: dict) -> Network:
    return make_network(
        int(data["num_nodes"]),
        [tuple(e) for e in data["edges"]],
        data["storage"],
        data["exec_mem"],
    )


def save_network(n: Network, path) -> None:
    Path(path).write_text(json.dumps(network_to_dict(n), indent=2, sort_keys=True) + "\n")


def load_network(path) -> Network:
    return network_from_dict(json.loads(Path(path).read_text()))

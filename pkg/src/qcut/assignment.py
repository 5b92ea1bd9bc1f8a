"""Tabu search over storage-valid qubit-to-computer assignments.

The search objective is the estimated migration cost
``sum_{q1<q2} w(q1,q2) * distance(home(q1), home(q2))``; moves relocate one
qubit into spare storage, swaps exchange two qubits on different computers.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientStorage
from .network import Network


@dataclass(frozen=True)
class TabuParams:
    iterations: int = 20
    tabu_list_length: int = 10
    rng_seed: int = 0

    def __post_init__(self):
        if self.iterations < 1 or self.tabu_list_length < 1:
            raise ValueError("iterations and tabu_list_length must be >= 1")


def storage_valid(homes: tuple[int, ...], n: Network) -> bool:
    loads = np.bincount(np.asarray(homes), minlength=n.num_nodes)
    return bool((loads <= np.asarray(n.storage)).all())


def assignment_cost(homes, w: np.ndarray, d: np.ndarray) -> int:
    h = np.asarray(homes)
    return int((w * d[np.ix_(h, h)]).sum()) // 2


def random_assignment(num_qubits: int, n: Network, rng: random.Random) -> tuple[int, ...]:
    """Shuffle qubits, then fill nodes in index order up to their storage."""
    order = list(range(num_qubits))
    rng.shuffle(order)
    homes = [0] * num_qubits
    node = 0
    used = 0
    for q in order:
        while used >= n.storage[node]:
            node += 1
            used = 0
        homes[q] = node
        used += 1
    return tuple(homes)


def neighbors(homes: tuple[int, ...], n: Network) -> list[tuple[int, ...]]:
    """All storage-valid single-qubit moves and cross-node swaps."""
    loads = [0] * n.num_nodes
    for p in homes:
        loads[p] += 1
    out = []
    for q, home in enumerate(homes):
        for p in range(n.num_nodes):
            if p != home and loads[p] < n.storage[p]:
                moved = list(homes)
                moved[q] = p
                out.append(tuple(moved))
    for q1 in range(len(homes)):
        for q2 in range(q1 + 1, len(homes)):
            if homes[q1] != homes[q2]:
                swapped = list(homes)
                swapped[q1], swapped[q2] = swapped[q2], swapped[q1]
                out.append(tuple(swapped))
    return out


def _apply(homes: np.ndarray, kind: int, a: int, b: int) -> tuple[int, ...]:
    out = homes.copy()
    if kind == 0:
        out[a] = b
    else:
        out[a], out[b] = out[b], out[a]
    return tuple(int(x) for x in out)


def tabu_search(
    w: np.ndarray,
    n: Network,
    d: np.ndarray,
    params: TabuParams,
    initial: tuple[int, ...] | None = None,
) -> tuple[int, ...]:
    """Best assignment found over ``params.iterations`` tabu moves.

    Starts from ``initial`` when given, otherwise from a seeded random
    storage-valid assignment. Each iteration moves to the cheapest non-tabu
    neighbor (ties broken by lexicographically smallest home vector); when
    every neighbor is tabu the cheapest tabu one is taken instead. The best
    assignment ever seen, including the start, is returned. Deterministic
    given identical inputs and seed.
    """
    num_qubits = w.shape[0]
    storage = np.asarray(n.storage)
    if int(storage.sum()) < num_qubits:
        raise InsufficientStorage(num_qubits - int(storage.sum()))
    if initial is None:
        current = np.asarray(random_assignment(num_qubits, n, random.Random(params.rng_seed)))
    else:
        current = np.asarray(initial)

    qubit_idx = np.arange(num_qubits)
    best = tuple(int(x) for x in current)
    best_cost = assignment_cost(best, w, d)
    cur_cost = best_cost
    tabu: deque[tuple[int, ...]] = deque(maxlen=params.tabu_list_length)

    node_idx = np.arange(n.num_nodes)
    tri_q1, tri_q2 = np.triu_indices(num_qubits, k=1)

    for _ in range(params.iterations):
        h = current
        loads = np.bincount(h, minlength=n.num_nodes)
        s = w @ d[h]  # s[q, p] = sum_j w[q, j] * d[homes[j], p]
        diag = s[qubit_idx, h]

        move_ok = (node_idx[None, :] != h[:, None]) & (loads < storage)[None, :]
        move_q, move_p = np.nonzero(move_ok)
        move_delta = (s - diag[:, None])[move_q, move_p]

        swap_ok = h[tri_q1] != h[tri_q2]
        swap_q1, swap_q2 = tri_q1[swap_ok], tri_q2[swap_ok]
        a = s[swap_q1, h[swap_q2]] + s[swap_q2, h[swap_q1]]
        swap_delta = (
            a - diag[swap_q1] - diag[swap_q2] + 2 * w[swap_q1, swap_q2] * d[h[swap_q1], h[swap_q2]]
        )

        kinds = np.concatenate([np.zeros(len(move_q), dtype=np.int64), np.ones(len(swap_q1), dtype=np.int64)])
        firsts = np.concatenate([move_q, swap_q1])
        seconds = np.concatenate([move_p, swap_q2])
        deltas = np.concatenate([move_delta, swap_delta])
        if len(deltas) == 0:
            break

        order = np.argsort(deltas, kind="stable")
        chosen = None
        chosen_delta = 0
        i = 0
        # walk ascending delta groups until one holds a non-tabu neighbor
        while i < len(order) and chosen is None:
            group_delta = deltas[order[i]]
            group = []
            while i < len(order) and deltas[order[i]] == group_delta:
                idx = order[i]
                group.append(_apply(current, int(kinds[idx]), int(firsts[idx]), int(seconds[idx])))
                i += 1
            fresh = [g for g in group if g not in tabu]
            if fresh:
                chosen = min(fresh)
                chosen_delta = int(group_delta)
        if chosen is None:
            # aspiration: everything is tabu, take the cheapest tabu neighbor
            best_delta = deltas[order[0]]
            group = []
            j = 0
            while j < len(order) and deltas[order[j]] == best_delta:
                idx = order[j]
                group.append(_apply(current, int(kinds[idx]), int(firsts[idx]), int(seconds[idx])))
                j += 1
            chosen = min(group)
            chosen_delta = int(best_delta)

        current = np.asarray(chosen)
        cur_cost += chosen_delta
        tabu.append(chosen)
        if cur_cost < best_cost:
            best_cost = cur_cost
            best = chosen

    return best

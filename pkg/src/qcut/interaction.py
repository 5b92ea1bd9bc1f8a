"""Pairwise interaction weights: optimal two-qubit home-coverage counts.

For two qubits held on distinct computers, every shared binary gate can be
covered by a migration of either operand, and the usable interval around a
gate is bounded by the nearest unary gates on the migrated qubit. The minimum
number of covering migrations is found by a furthest-right greedy sweep over
those intervals; optimality on this interval structure is checked against the
brute-force oracle in the test suite rather than assumed.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right

import numpy as np

from .circuit import UNARY, Circuit
from .errors import NotTwoQubits


def _bounds(unary: list[int], t: int, lo: int, hi: int) -> tuple[int, int]:
    """Open bounds of the unary-free window of one qubit around instant t."""
    pos = bisect_left(unary, t)
    prev = unary[pos - 1] if pos > 0 and unary[pos - 1] > lo else lo - 1
    nxt = unary[pos] if pos < len(unary) and unary[pos] < hi else hi + 1
    return prev, nxt


def min_home_cover(
    binaries: list[int],
    unary_a: list[int],
    unary_b: list[int],
    lo: int,
    hi: int,
) -> int:
    """Greedy interval cover over shared binary gate instants.

    Takes the earliest uncovered gate, picks the operand whose unary-free
    window reaches furthest right (tie: qubit a), and covers everything in
    that window. All instant lists must be sorted and lie inside (lo, hi).
    """
    count = 0
    i = 0
    while i < len(binaries):
        t = binaries[i]
        prev_a, next_a = _bounds(unary_a, t, lo, hi)
        prev_b, next_b = _bounds(unary_b, t, lo, hi)
        nxt = next_a if next_a >= next_b else next_b
        i = bisect_left(binaries, nxt, lo=i)
        count += 1
    return count


def ms_hc_count(pair_circuit: Circuit) -> int:
    """Minimum migrations home-covering all binary gates of a 2-qubit circuit."""
    if pair_circuit.num_qubits != 2:
        raise NotTwoQubits(f"expected 2 qubits, got {pair_circuit.num_qubits}")
    binaries = [g.instant for g in pair_circuit.gates if g.is_binary]
    unary_a = [g.instant for g in pair_circuit.gates if g.kind == UNARY and g.qubits[0] == 0]
    unary_b = [g.instant for g in pair_circuit.gates if g.kind == UNARY and g.qubits[0] == 1]
    lo, hi = pair_circuit.span
    return min_home_cover(binaries, unary_a, unary_b, lo, hi)


class CircuitTimelines:
    """Per-qubit unary instants and per-pair shared binary instants.

    Built once per circuit so planners can compute windowed interaction
    matrices without re-walking the gate list.
    """

    def __init__(self, c: Circuit):
        self.num_qubits = c.num_qubits
        self.unary: list[list[int]] = [[] for _ in range(c.num_qubits)]
        self.pair_binaries: dict[tuple[int, int], list[int]] = {}
        for g in c.gates:
            if g.kind == UNARY:
                self.unary[g.qubits[0]].append(g.instant)
            else:
                a, b = g.qubits
                key = (a, b) if a < b else (b, a)
                self.pair_binaries.setdefault(key, []).append(g.instant)

    def window_weight(self, a: int, b: int, lo: int, hi: int) -> int:
        """w(a, b) restricted to gates with instants inside (lo, hi)."""
        key = (a, b) if a < b else (b, a)
        instants = self.pair_binaries.get(key)
        if not instants:
            return 0
        start = bisect_right(instants, lo)
        end = bisect_left(instants, hi)
        if start >= end:
            return 0
        return min_home_cover(instants[start:end], self.unary[key[0]], self.unary[key[1]], lo, hi)

    def window_matrix(self, lo: int, hi: int) -> np.ndarray:
        w = np.zeros((self.num_qubits, self.num_qubits), dtype=np.int64)
        for (a, b) in self.pair_binaries:
            weight = self.window_weight(a, b, lo, hi)
            w[a, b] = weight
            w[b, a] = weight
        return w


def interaction_matrix(c: Circuit) -> np.ndarray:
    """Symmetric matrix of pairwise home-coverage counts over the whole span."""
    lo, hi = c.span
    return CircuitTimelines(c).window_matrix(lo, hi)

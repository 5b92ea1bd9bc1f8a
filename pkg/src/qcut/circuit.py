"""Abstract circuits on the discrete timebase.

A circuit is an ordered gate sequence over qubits 0..num_qubits-1. The k-th
gate (1-based) sits at the odd instant 2k-1; even instants carry no gates and
are reserved for teleportations and migration endpoints. A segment view keeps
the original global instants of its gates and remembers the even span it
covers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import CutOutOfRange, DuplicateBinaryOperand, OddCut, OperandOutOfRange, SameQubit

UNARY = "u"
BINARY = "cz"


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    instant: int

    @property
    def is_binary(self) -> bool:
        return self.kind == BINARY


@dataclass(frozen=True)
class Circuit:
    """A gate sequence plus the even time span it occupies.

    Full circuits built by :func:`build_circuit` span ``[0, 2 * len(gates)]``;
    views produced by :func:`segment` span ``[cut_i, cut_{i+1}]`` and share
    gate objects (original instants preserved).
    """

    num_qubits: int
    gates: tuple[Gate, ...]
    span: tuple[int, int]

    @property
    def horizon(self) -> int:
        return self.span[1]

    def unary_instants(self, q: int) -> list[int]:
        return [g.instant for g in self.gates if g.kind == UNARY and g.qubits[0] == q]

    def binary_gates(self) -> list[Gate]:
        return [g for g in self.gates if g.is_binary]


def build_circuit(num_qubits: int, gate_descriptors) -> Circuit:
    """Build a circuit from (kind, operands) pairs, assigning instants 1,3,5,...

    Raises OperandOutOfRange / DuplicateBinaryOperand on malformed descriptors.
    """
    gates = []
    for i, (kind, operands) in enumerate(gate_descriptors):
        operands = tuple(int(q) for q in operands)
        if kind == BINARY:
            if len(operands) != 2:
                raise DuplicateBinaryOperand(f"binary gate needs 2 operands, got {operands}")
            if operands[0] == operands[1]:
                raise DuplicateBinaryOperand(f"binary gate with duplicate operand {operands[0]}")
        elif kind == UNARY:
            if len(operands) != 1:
                raise OperandOutOfRange(f"unary gate needs 1 operand, got {operands}")
        else:
            raise OperandOutOfRange(f"unknown gate kind {kind!r}")
        for q in operands:
            if not 0 <= q < num_qubits:
                raise OperandOutOfRange(f"operand {q} outside [0, {num_qubits})")
        gates.append(Gate(kind, operands, 2 * i + 1))
    return Circuit(num_qubits, tuple(gates), (0, 2 * len(gates)))


def cz(a: int, b: int) -> tuple[str, tuple[int, int]]:
    return (BINARY, (a, b))


def u(q: int) -> tuple[str, tuple[int]]:
    return (UNARY, (q,))


def induced_pair_circuit(c: Circuit, q1: int, q2: int) -> tuple[Circuit, tuple[int, ...]]:
    """Two-qubit sub-circuit for an interacting pair.

    Keeps binary gates whose operand set is exactly {q1, q2} plus unary gates
    on q1 or q2; binary gates touching a third qubit are dropped (only unary
    gates force disentanglement, so they are what limits migration intervals).
    Retained gates are re-timed to 1,3,5,... with pair-local qubit indices
    (0 = lower original index). Also returns the original instant of each
    retained gate, by retained position.
    """
    if q1 == q2:
        raise SameQubit(f"induced pair needs distinct qubits, got {q1}")
    for q in (q1, q2):
        if not 0 <= q < c.num_qubits:
            raise OperandOutOfRange(f"qubit {q} outside [0, {c.num_qubits})")
    lo, hi = sorted((q1, q2))
    local = {lo: 0, hi: 1}
    retained = []
    original = []
    for g in c.gates:
        if g.is_binary and set(g.qubits) == {q1, q2}:
            retained.append((BINARY, (0, 1)))
        elif g.kind == UNARY and g.qubits[0] in local:
            retained.append((UNARY, (local[g.qubits[0]],)))
        else:
            continue
        original.append(g.instant)
    return build_circuit(2, retained), tuple(original)


def segment(c: Circuit, cuts) -> list[Circuit]:
    """Split a circuit at even instants into contiguous views.

    Views preserve original instants; view i spans [cut_{i-1}, cut_i]. Every
    gate lands in exactly one view (gates sit at odd instants, never on a cut).
    """
    lo, hi = c.span
    ordered = sorted(set(int(t) for t in cuts))
    for t in ordered:
        if t % 2 != 0:
            raise OddCut(f"cut {t} is odd")
        if not lo < t < hi:
            raise CutOutOfRange(f"cut {t} outside ({lo}, {hi})")
    bounds = [lo] + ordered + [hi]
    views = []
    for a, b in zip(bounds, bounds[1:]):
        gates = tuple(g for g in c.gates if a < g.instant < b)
        views.append(Circuit(c.num_qubits, gates, (a, b)))
    return views


def circuit_to_dict(c: Circuit) -> dict:
    return {
        "num_qubits": c.num_qubits,
        "gates": [{"kind": g.kind, "operands": list(g.qubits)} for g in c.gates],
    }


def circuit_from_dict(data: dict) -> Circuit:
    return build_circuit(
        int(data["num_qubits"]),
        [(g["kind"], tuple(g["operands"])) for g in data["gates"]],
    )


def save_circuit(c: Circuit, path) -> None:
    Path(path).write_text(json.dumps(circuit_to_dict(c), indent=2, sort_keys=True) + "\n")


def load_circuit(path) -> Circuit:
    return circuit_from_dict(json.loads(Path(path).read_text()))

"""Parameter sweeps over generated instances, written as CSV."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .assignment import TabuParams
from .errors import QcutError
from .generators import CircuitGenParams, NetworkGenParams, gen_circuit, gen_network
from .network import all_pairs_distance
from .planner import dqcm_greedy_plan, dqcm_plan, sequence_plan, split_plan, validate_plan

CSV_COLUMNS = [
    "param",
    "value",
    "algorithm",
    "seed",
    "total_cost",
    "migration_cost",
    "teleport_cost",
    "num_cuts",
    "runtime_ms",
    "valid",
]

ALGORITHMS = {
    "dqcm": dqcm_plan,
    "dqcm_greedy": dqcm_greedy_plan,
    "sequence": sequence_plan,
    "split": split_plan,
}

SWEEPABLE = ("num_qubits", "num_nodes", "edge_probability", "gates_per_qubit", "binary_fraction", "exec_mem")

# desk-scale defaults; the full 50-qubit/10-node/50-gates setting works but is slow
DESK_DEFAULTS = {
    "num_qubits": 20,
    "num_nodes": 5,
    "gates_per_qubit": 20,
    "binary_fraction": 0.5,
    "edge_probability": 0.5,
}

DEFAULT_VALUES = {
    "num_qubits": [8, 12, 16, 20],
    "num_nodes": [3, 4, 5, 6],
    "edge_probability": [0.3, 0.5, 0.8],
    "gates_per_qubit": [8, 12, 16, 20],
    "binary_fraction": [0.25, 0.5, 0.75],
    "exec_mem": [1, 2, 3, 4],
}


@dataclass(frozen=True)
class SweepConfig:
    varying: str
    values: tuple
    algorithms: tuple[str, ...] = ("dqcm", "dqcm_greedy", "sequence", "split")
    seeds: tuple[int, ...] = tuple(range(20))
    fixed: dict = field(default_factory=lambda: dict(DESK_DEFAULTS))
    timing: bool = False

    def __post_init__(self):
        if self.varying not in SWEEPABLE:
            raise ValueError(f"unknown sweep parameter {self.varying!r}")
        if not self.values or not self.seeds or not self.algorithms:
            raise ValueError("values, seeds, and algorithms must be non-empty")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")


def build_instance(fixed: dict, varying: str, value, seed: int):
    """Instantiate (circuit, network) for one sweep cell."""
    conf = dict(fixed)
    if varying != "exec_mem":
        conf[varying] = value
    circuit = gen_circuit(
        CircuitGenParams(
            num_qubits=int(conf["num_qubits"]),
            gates_per_qubit=int(conf["gates_per_qubit"]),
            binary_fraction=float(conf["binary_fraction"]),
            seed=seed,
        )
    )
    network = gen_network(
        NetworkGenParams(
            num_nodes=int(conf["num_nodes"]),
            edge_probability=float(conf["edge_probability"]),
            num_qubits=int(conf["num_qubits"]),
            seed=seed,
        )
    )
    if varying == "exec_mem":
        network = replace(network, exec_mem=(int(value),) * network.num_nodes)
    return circuit, network


def run_cell(args) -> dict:
    varying, value, algorithm, seed, fixed, timing = args
    row = {
        "param": varying,
        "value": value,
        "algorithm": algorithm,
        "seed": seed,
        "total_cost": "",
        "migration_cost": "",
        "teleport_cost": "",
        "num_cuts": "",
        "runtime_ms": "",
        "valid": "false",
    }
    started = time.perf_counter()
    try:
        circuit, network = build_instance(fixed, varying, value, seed)
        d = all_pairs_distance(network)
        plan = ALGORITHMS[algorithm](circuit, network, d, TabuParams(rng_seed=seed))
        violations = validate_plan(plan, circuit, network)
        row.update(
            total_cost=plan.total_cost,
            migration_cost=plan.migration_cost,
            teleport_cost=plan.teleport_cost,
            num_cuts=len(plan.cuts),
            valid="true" if not violations else "false",
        )
    except QcutError:
        pass
    if timing:
        row["runtime_ms"] = int((time.perf_counter() - started) * 1000)
    return row


def sweep_rows(config: SweepConfig, jobs: int = 1) -> list[dict]:
    cells = [
        (config.varying, value, algorithm, seed, config.fixed, config.timing)
        for value in config.values
        for algorithm in config.algorithms
        for seed in config.seeds
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_cell, cells))
    return [run_cell(cell) for cell in cells]


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def run_sweep(configs: list[SweepConfig], jobs: int = 1) -> str:
    rows = []
    for config in configs:
        rows.extend(sweep_rows(config, jobs))
    return rows_to_csv(rows)


def default_full_configs(seeds, algorithms=None, timing: bool = False) -> list[SweepConfig]:
    """One sweep per parameter at desk scale; feeds the six report panels."""
    algos = tuple(algorithms) if algorithms else tuple(ALGORITHMS)
    return [
        SweepConfig(
            varying=name,
            values=tuple(DEFAULT_VALUES[name]),
            algorithms=algos,
            seeds=tuple(seeds),
            timing=timing,
        )
        for name in SWEEPABLE
    ]

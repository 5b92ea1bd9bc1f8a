import json

import pytest

from qcut import save_circuit, save_network
from qcut.cli import main

from conftest import example_circuit, two_node_network


@pytest.fixture
def example_files(tmp_path):
    circuit = tmp_path / "circuit.json"
    network = tmp_path / "network.json"
    save_circuit(example_circuit(), circuit)
    save_network(two_node_network(), network)
    return circuit, network


def run(argv):
    return main([str(a) for a in argv])


def test_generate_is_deterministic_per_seed(tmp_path, capsys):
    args = ["generate", "--qubits", 6, "--nodes", 3, "--gates-per-qubit", 4, "--seed", 7]
    rc = run(args + ["--out-circuit", tmp_path / "c1.json", "--out-network", tmp_path / "n1.json"])
    assert rc == 0
    assert "seed=7" in capsys.readouterr().out
    rc = run(args + ["--out-circuit", tmp_path / "c2.json", "--out-network", tmp_path / "n2.json"])
    assert rc == 0
    assert (tmp_path / "c1.json").read_bytes() == (tmp_path / "c2.json").read_bytes()
    assert (tmp_path / "n1.json").read_bytes() == (tmp_path / "n2.json").read_bytes()


def test_generate_auto_seed_printed(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("QCUT_SEED", raising=False)
    rc = run(["generate", "--qubits", 4, "--nodes", 2, "--gates-per-qubit", 3,
              "--out-circuit", tmp_path / "c.json", "--out-network", tmp_path / "n.json"])
    assert rc == 0
    assert capsys.readouterr().out.startswith("seed=")


def test_generate_honors_env_seed(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QCUT_SEED", "123")
    rc = run(["generate", "--qubits", 4, "--nodes", 2, "--gates-per-qubit", 3,
              "--out-circuit", tmp_path / "c.json", "--out-network", tmp_path / "n.json"])
    assert rc == 0
    assert "seed=123" in capsys.readouterr().out


def test_generate_rejects_zero_qubits(tmp_path):
    rc = run(["generate", "--qubits", 0, "--nodes", 2,
              "--out-circuit", tmp_path / "c.json", "--out-network", tmp_path / "n.json"])
    assert rc == 2


def test_solve_example_costs(example_files, tmp_path, capsys):
    circuit, network = example_files
    for algo in ("dqcm", "sequence", "split", "overall"):
        rc = run(["solve", "--circuit", circuit, "--network", network,
                  "--algo", algo, "--seed", 0, "--out", tmp_path / f"{algo}.json"])
        assert rc == 0
        out = capsys.readouterr().out
        assert out.startswith("cost=2 ")
        assert "migrations=" in out and "teleports=" in out


def test_solve_all_local_instance(tmp_path, capsys):
    from qcut import build_circuit, make_network
    from qcut.circuit import cz

    circuit = tmp_path / "c.json"
    network = tmp_path / "n.json"
    save_circuit(build_circuit(2, [cz(0, 1), cz(0, 1)]), circuit)
    save_network(make_network(2, [(0, 1)], [2, 2], [1, 1]), network)
    for algo in ("dqcm", "dqcm_greedy", "sequence", "split"):
        rc = run(["solve", "--circuit", circuit, "--network", network, "--algo", algo, "--seed", 3])
        assert rc == 0
        assert capsys.readouterr().out.startswith("cost=0 ")


def test_solve_infeasible_instance_exit_code(tmp_path, capsys):
    from qcut import build_circuit, make_network
    from qcut.circuit import cz

    circuit = tmp_path / "c.json"
    network = tmp_path / "n.json"
    save_circuit(build_circuit(3, [cz(0, 1)]), circuit)
    save_network(make_network(2, [(0, 1)], [1, 1], [1, 1]), network)
    rc = run(["solve", "--circuit", circuit, "--network", network, "--algo", "dqcm"])
    assert rc == 3


def test_validate_round_trip_and_corruption(example_files, tmp_path, capsys):
    circuit, network = example_files
    plan_path = tmp_path / "plan.json"
    assert run(["solve", "--circuit", circuit, "--network", network,
                "--algo", "split", "--seed", 0, "--out", plan_path]) == 0
    capsys.readouterr()
    assert run(["validate", "--circuit", circuit, "--network", network, "--plan", plan_path]) == 0
    assert capsys.readouterr().out.strip() == "ok"

    data = json.loads(plan_path.read_text())
    data["total_cost"] += 5
    plan_path.write_text(json.dumps(data))
    assert run(["validate", "--circuit", circuit, "--network", network, "--plan", plan_path]) == 4


def test_oracle_subcommand(example_files, capsys):
    circuit, network = example_files
    assert run(["oracle", "--circuit", circuit, "--network", network]) == 0
    assert "optimal_cost=2" in capsys.readouterr().out
    assert run(["oracle", "--circuit", circuit, "--network", network, "--max-cuts", 1]) == 0
    assert "optimal_cost=2" in capsys.readouterr().out


SWEEP_CONFIG = {
    "varying": "num_qubits",
    "values": [4, 6],
    "algorithms": ["dqcm", "sequence"],
    "seeds": [0, 1],
    "fixed": {"num_nodes": 2, "gates_per_qubit": 4, "binary_fraction": 0.5, "edge_probability": 1.0},
}


def test_sweep_shape_and_determinism(tmp_path):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps(SWEEP_CONFIG))
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert run(["sweep", "--config", config, "--out", out1]) == 0
    assert run(["sweep", "--config", config, "--out", out2]) == 0
    text = out1.read_text()
    lines = text.strip().split("\n")
    assert lines[0] == "param,value,algorithm,seed,total_cost,migration_cost,teleport_cost,num_cuts,runtime_ms,valid"
    assert len(lines) == 1 + 2 * 2 * 2
    assert out1.read_bytes() == out2.read_bytes()
    assert all(line.endswith("true") for line in lines[1:])


def test_sweep_records_failures_and_continues(tmp_path):
    config = tmp_path / "sweep.json"
    config.write_text(
        json.dumps(
            {
                "varying": "exec_mem",
                "values": [0, 1],
                "algorithms": ["dqcm"],
                "seeds": [0],
                "fixed": {"num_qubits": 6, "num_nodes": 3, "gates_per_qubit": 4,
                          "binary_fraction": 0.5, "edge_probability": 1.0},
            }
        )
    )
    out = tmp_path / "c.csv"
    assert run(["sweep", "--config", config, "--out", out]) == 0
    lines = out.read_text().strip().split("\n")[1:]
    assert len(lines) == 2
    assert lines[0].endswith("false")  # zero execution memory is uncoverable
    assert lines[1].endswith("true")


def test_sweep_rejects_empty_seeds(tmp_path):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps(dict(SWEEP_CONFIG, seeds=[])))
    assert run(["sweep", "--config", config, "--out", tmp_path / "x.csv"]) == 2

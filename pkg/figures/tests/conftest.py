import subprocess
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[2]
ARTIFACT = REPO_ROOT / "artifacts" / "sweep_default.csv"

HEADER = "param,value,algorithm,seed,total_cost,migration_cost,teleport_cost,num_cuts,runtime_ms,valid"


@pytest.fixture(scope="session")
def default_sweep_csv() -> Path:
    """The default six-panel sweep CSV, produced by the solver CLI if absent."""
    if not ARTIFACT.exists():
        ARTIFACT.parent.mkdir(parents=True, exist_ok=True)
        subprocess.run(["qcut", "sweep", "--out", str(ARTIFACT)], check=True)
    return ARTIFACT


@pytest.fixture
def small_csv(tmp_path) -> Path:
    rows = [
        HEADER,
        "num_qubits,4,dqcm,0,10,10,0,0,,true",
        "num_qubits,4,dqcm,1,12,12,0,0,,true",
        "num_qubits,8,dqcm,0,30,28,2,1,,true",
        "num_qubits,8,dqcm,1,26,26,0,0,,true",
        "num_qubits,4,split,0,8,6,2,1,,true",
        "num_qubits,4,split,1,9,9,0,0,,true",
        "num_qubits,8,split,0,20,16,4,2,,true",
        "num_qubits,8,split,1,22,20,2,1,,true",
        "num_qubits,8,split,2,,,,,,false",
    ]
    path = tmp_path / "small.csv"
    path.write_text("\n".join(rows) + "\n")
    return path

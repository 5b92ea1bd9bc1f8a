"""One mean-cost line chart per swept parameter, with stderr bands."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .aggregate import EmptyData, aggregate, load_rows

AXIS_LABELS = {
    "num_qubits": "number of qubits",
    "num_nodes": "number of computers",
    "edge_probability": "edge probability",
    "gates_per_qubit": "gates per qubit",
    "binary_fraction": "fraction of binary gates",
    "exec_mem": "execution memory per computer",
}


def render(csv_path, out_dir) -> dict:
    """Write <param>.png per parameter present; returns the plotted aggregates."""
    rows, excluded = load_rows(csv_path)
    if not rows:
        raise EmptyData(f"no valid rows in {csv_path}")
    charts = aggregate(rows)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for param, lines in charts.items():
        fig, ax = plt.subplots(figsize=(6, 4))
        for algorithm, points in sorted(lines.items()):
            xs = [p[0] for p in points]
            means = [p[1] for p in points]
            errs = [p[2] for p in points]
            ax.plot(xs, means, marker="o", label=algorithm)
            ax.fill_between(
                xs,
                [m - e for m, e in zip(means, errs)],
                [m + e for m, e in zip(means, errs)],
                alpha=0.2,
            )
        ax.set_xlabel(AXIS_LABELS.get(param, param))
        ax.set_ylabel("mean total communication cost")
        ax.legend()
        note = f"mean over seeds, band = standard error"
        if excluded:
            note += f"; {excluded} invalid row(s) excluded"
        fig.text(0.01, 0.01, note, fontsize=7)
        fig.tight_layout()
        fig.savefig(out / f"{param}.png", dpi=120)
        plt.close(fig)
    return charts

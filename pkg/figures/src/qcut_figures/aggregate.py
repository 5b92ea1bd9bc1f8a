"""CSV loading and per-(parameter, value, algorithm) aggregation."""

from __future__ import annotations

import csv
import math

EXPECTED_COLUMNS = [
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


class SchemaMismatch(Exception):
    pass


class EmptyData(Exception):
    pass


def load_rows(csv_path) -> tuple[list[dict], int]:
    """Valid result rows plus the count of rows excluded as invalid."""
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != EXPECTED_COLUMNS:
            raise SchemaMismatch(f"unexpected columns {reader.fieldnames} in {csv_path}")
        rows = []
        excluded = 0
        for raw in reader:
            if raw["valid"] != "true":
                excluded += 1
                continue
            rows.append(
                {
                    "param": raw["param"],
                    "value": float(raw["value"]),
                    "algorithm": raw["algorithm"],
                    "seed": int(raw["seed"]),
                    "total_cost": int(raw["total_cost"]),
                }
            )
    return rows, excluded


def aggregate(rows: list[dict]) -> dict:
    """param -> algorithm -> sorted [(value, mean cost, stderr over seeds)]."""
    groups: dict[tuple, list[int]] = {}
    for row in rows:
        groups.setdefault((row["param"], row["algorithm"], row["value"]), []).append(row["total_cost"])
    out: dict[str, dict[str, list[tuple[float, float, float]]]] = {}
    for (param, algorithm, value), costs in sorted(groups.items()):
        mean = sum(costs) / len(costs)
        if len(costs) > 1:
            variance = sum((c - mean) ** 2 for c in costs) / (len(costs) - 1)
            stderr = math.sqrt(variance / len(costs))
        else:
            stderr = 0.0
        out.setdefault(param, {}).setdefault(algorithm, []).append((value, mean, stderr))
    return out

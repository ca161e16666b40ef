"""Regenerate fixtures/toy deterministically.

Run from the repository root:

    python fixtures/make_toy.py

The scenario is 30 instances x 3 algorithms with a learnable structure
(the sign of the first feature mostly decides the winner), plus a few
deliberate irregularities that the loader must normalize:

* a timeout row that still records a small runtime,
* a memout row,
* one (instance, algorithm) pair with no run at all,
* a repetition-2 run that must be ignored,
* a missing feature value,
* per-instance feature costs.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

OUT = Path(__file__).parent / "toy"
CUTOFF = 100.0
N = 30
ALGOS = ["astar", "bfs", "greedy"]


def fmt(x: float) -> str:
    return f"{x:.4f}"


def main() -> None:
    rng = np.random.default_rng(7)
    OUT.mkdir(parents=True, exist_ok=True)

    features = rng.normal(0.0, 2.0, size=(N, 3)).round(4)
    # winner: astar when f0 < 0, bfs when f0 >= 0, greedy wins a small
    # band near zero so every algorithm is best somewhere
    best = np.where(features[:, 0] < 0.0, 0, 1)
    best[np.abs(features[:, 0]) < 0.35] = 2

    base = rng.uniform(2.0, 25.0, size=N).round(4)
    runtimes = np.empty((N, 3))
    for i in range(N):
        for a in range(3):
            if a == best[i]:
                runtimes[i, a] = base[i]
            else:
                runtimes[i, a] = base[i] * rng.uniform(3.0, 6.0) + rng.uniform(0.0, 30.0)
    runtimes = runtimes.round(4)
    status = np.where(runtimes <= CUTOFF, "ok", "timeout")
    runtimes = np.minimum(runtimes, CUTOFF)

    instances = [f"toy_{i:02d}" for i in range(N)]

    lines = [
        "@RELATION ALGORITHM_RUNS",
        "",
        "@ATTRIBUTE instance_id STRING",
        "@ATTRIBUTE repetition NUMERIC",
        "@ATTRIBUTE algorithm STRING",
        "@ATTRIBUTE runtime NUMERIC",
        "@ATTRIBUTE runstatus {ok,timeout,memout,not_applicable,crash,other}",
        "",
        "@DATA",
    ]
    for i, inst in enumerate(instances):
        for a, algo in enumerate(ALGOS):
            if inst == "toy_07" and algo == "astar":
                continue  # deliberately absent pair
            st = status[i, a]
            rt = runtimes[i, a]
            if inst == "toy_03" and algo == "bfs":
                st, rt = "timeout", 37.0  # timeout with a bogus low runtime
            if inst == "toy_05" and algo == "greedy":
                st, rt = "memout", CUTOFF
            lines.append(f"{inst},1,{algo},{fmt(rt)},{st}")
            if inst == "toy_02" and algo == "astar":
                lines.append(f"{inst},2,{algo},{fmt(9999.0)},ok")
    (OUT / "algorithm_runs.arff").write_text("\n".join(lines) + "\n")

    lines = [
        "@RELATION FEATURE_VALUES",
        "",
        "@ATTRIBUTE instance_id STRING",
        "@ATTRIBUTE repetition NUMERIC",
        "@ATTRIBUTE f_balance NUMERIC",
        "@ATTRIBUTE f_spread NUMERIC",
        "@ATTRIBUTE f_depth NUMERIC",
        "",
        "@DATA",
    ]
    for i, inst in enumerate(instances):
        cells = [fmt(features[i, j]) for j in range(3)]
        if inst == "toy_04":
            cells[2] = "?"  # missing feature value
        lines.append(f"{inst},1," + ",".join(cells))
    (OUT / "feature_values.arff").write_text("\n".join(lines) + "\n")

    costs = rng.uniform(0.1, 0.9, size=(N, 2)).round(4)
    lines = [
        "@RELATION FEATURE_COSTS",
        "",
        "@ATTRIBUTE instance_id STRING",
        "@ATTRIBUTE repetition NUMERIC",
        "@ATTRIBUTE cheap_group NUMERIC",
        "@ATTRIBUTE probing_group NUMERIC",
        "",
        "@DATA",
    ]
    for i, inst in enumerate(instances):
        lines.append(f"{inst},1,{fmt(costs[i, 0])},{fmt(costs[i, 1])}")
    (OUT / "feature_costs.arff").write_text("\n".join(lines) + "\n")

    lines = [
        "@RELATION CV",
        "",
        "@ATTRIBUTE instance_id STRING",
        "@ATTRIBUTE repetition NUMERIC",
        "@ATTRIBUTE fold NUMERIC",
        "",
        "@DATA",
    ]
    for i, inst in enumerate(instances):
        lines.append(f"{inst},1,{i % 5 + 1}")
    (OUT / "cv.arff").write_text("\n".join(lines) + "\n")

    (OUT / "description.txt").write_text(
        "scenario_id: toy\n"
        "performance_measure: runtime\n"
        "performance_type: runtime\n"
        "maximize: false\n"
        f"algorithm_cutoff_time: {CUTOFF:g}\n"
        "default_steps:\n"
        "  - base\n"
        "features_deterministic:\n"
        "  - f_balance\n"
        "  - f_spread\n"
        "  - f_depth\n"
    )
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()

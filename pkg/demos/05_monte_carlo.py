"""A small Monte Carlo sweep showing risk falling with n.

The full reference run (50 replicates at n = 500, 5000, 50000) is
``spectral-levy experiment --config demos/reference_plan.json --out results``.
"""

import tempfile

from spectral_levy.harness import reference_plan, run_experiment

with tempfile.TemporaryDirectory() as out:
    result = run_experiment(reference_plan(replicates=10, out_dir=out))
    for row in result.aggregates:
        print(f"n={row['n']}: " + ", ".join(f"{k}={v:.4g}" for k, v in row.items() if k != "n"))

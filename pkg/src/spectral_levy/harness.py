"""Monte Carlo experiments: replicate sweeps over n with MSE/MISE aggregation."""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import statistics
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .ecf import UnresolvedWinding
from .estimators import DensityEstimate, default_config, estimate, estimate_rho
from .model import ClassParams, LevyTriplet, check_class_membership, levy_density
from .simulate import simulate_increments

log = logging.getLogger(__name__)

MAX_FLAG_RATE = 0.5

RECORD_FIELDS = [
    "n",
    "replicate",
    "sigma2_hat",
    "lambda_hat",
    "gamma_hat",
    "mise_rho",
    "failed",
    "zero_risk",
    "truncation_active",
    "quadrature_converged",
]
AGGREGATE_FIELDS = ["n", "mse_sigma2", "mse_lambda", "mse_gamma", "mean_mise", "flag_rate"]
ROBUST_FIELDS = ["n", "median_se_sigma2", "median_se_lambda", "median_se_gamma", "median_mise", "replicates_used"]


class ExperimentFailed(RuntimeError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


def mise(density_est: DensityEstimate, triplet: LevyTriplet) -> float:
    """Integrated squared error of one density estimate (trapezoidal in x)."""
    x = density_est.x
    rho = levy_density(x, triplet)
    if max(abs(rho[0]), abs(rho[-1])) > 1e-6:
        warnings.warn("x grid truncates the Levy density; integrated error is biased low", stacklevel=2)
    return float(np.trapezoid((density_est.rho_hat - rho) ** 2, x))


@dataclass
class ExperimentPlan:
    triplet: LevyTriplet
    params: ClassParams
    n_values: list
    replicates: int
    master_seed: int = 0
    overrides: dict = field(default_factory=dict)
    out_dir: Optional[str] = None
    skip_class_check: bool = False

    def __post_init__(self):
        self.n_values = [int(n) for n in self.n_values]
        if not self.n_values or any(n < 16 for n in self.n_values):
            raise ValueError("n_values must be nonempty and every n >= 16")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError("n_values must be strictly increasing")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")

    def to_dict(self):
        return {
            "triplet": self.triplet.to_dict(),
            "class": self.params.to_dict(),
            "n_values": self.n_values,
            "replicates": self.replicates,
            "master_seed": self.master_seed,
            "overrides": self.overrides,
            "skip_class_check": self.skip_class_check,
        }

    @classmethod
    def from_dict(cls, d, out_dir=None) -> "ExperimentPlan":
        triplet_doc = d.get("triplet", d)
        return cls(
            triplet=LevyTriplet.from_dict(triplet_doc),
            params=ClassParams.from_dict(d["class"]),
            n_values=d["n_values"],
            replicates=int(d["replicates"]),
            master_seed=int(d.get("master_seed", 0)),
            overrides=dict(d.get("overrides", {})),
            out_dir=out_dir or d.get("out_dir"),
            skip_class_check=bool(d.get("skip_class_check", False)),
        )


@dataclass
class ExperimentResult:
    records: list
    aggregates: list
    robust: list = field(default_factory=list)

    def aggregate_for(self, n) -> dict:
        for row in self.aggregates:
            if row["n"] == n:
                return row
        raise KeyError(n)

    def write(self, out_dir):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_rows(out / "records.csv", RECORD_FIELDS, self.records)
        _write_rows(out / "aggregates.csv", AGGREGATE_FIELDS, self.aggregates)
        _write_rows(out / "robust.csv", ROBUST_FIELDS, self.robust)


def _fmt(value):
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_rows(path, fields, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for row in rows:
            w.writerow([_fmt(row[k]) for k in fields])


def run_replicate(triplet: LevyTriplet, params: ClassParams, n: int, replicate: int, master_seed: int, overrides=None):
    """One simulate-estimate-score cycle. Seeds derive from (master_seed, n, replicate)."""
    config = default_config(n, params, **(overrides or {}))
    sample = simulate_increments(triplet, n, (master_seed, n, replicate)).values
    record = {"n": n, "replicate": replicate}
    try:
        grid, est = estimate(sample, config, params)
    except UnresolvedWinding as exc:
        log.info("n=%d replicate=%d failed: %s", n, replicate, exc)
        nan = float("nan")
        record.update(
            sigma2_hat=nan, lambda_hat=nan, gamma_hat=nan, mise_rho=nan, failed=True,
            zero_risk=True, truncation_active=False, quadrature_converged=False,
        )
        return record
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        score = mise(estimate_rho(sample, est, grid, config), triplet)
    f = est.flags
    record.update(
        sigma2_hat=est.sigma2_hat,
        lambda_hat=est.lambda_hat,
        gamma_hat=est.gamma_hat,
        mise_rho=score,
        failed=False,
        zero_risk=f["zero_risk"],
        truncation_active=f["truncation_active_sigma"] or f["truncation_active_gamma"],
        quadrature_converged=f.get("quadrature_converged", True),
    )
    return record


def _run_one(args):
    return run_replicate(*args)


def aggregate(records, triplet: LevyTriplet):
    """Per-n risk summaries; failed replicates are excluded but counted in flag_rate."""
    aggregates, robust = [], []
    for n in sorted({r["n"] for r in records}):
        rows = [r for r in records if r["n"] == n]
        used = [r for r in rows if not r["failed"]]
        flagged = sum(1 for r in rows if r["failed"] or r["zero_risk"])
        se = {
            "sigma2": [(r["sigma2_hat"] - triplet.sigma2) ** 2 for r in used],
            "lambda": [(r["lambda_hat"] - triplet.lam) ** 2 for r in used],
            "gamma": [(r["gamma_hat"] - triplet.gamma) ** 2 for r in used],
            "mise": [r["mise_rho"] for r in used],
        }

        def mean(xs):
            return math.fsum(xs) / len(xs) if xs else float("nan")

        def median(xs):
            return float(statistics.median(xs)) if xs else float("nan")

        aggregates.append(
            {
                "n": n,
                "mse_sigma2": mean(se["sigma2"]),
                "mse_lambda": mean(se["lambda"]),
                "mse_gamma": mean(se["gamma"]),
                "mean_mise": mean(se["mise"]),
                "flag_rate": flagged / len(rows),
            }
        )
        robust.append(
            {
                "n": n,
                "median_se_sigma2": median(se["sigma2"]),
                "median_se_lambda": median(se["lambda"]),
                "median_se_gamma": median(se["gamma"]),
                "median_mise": median(se["mise"]),
                "replicates_used": len(used),
            }
        )
    return aggregates, robust


def run_experiment(plan: ExperimentPlan, workers: int = 1) -> ExperimentResult:
    """Run every (n, replicate) of the plan and aggregate.

    Raises ``ValueError`` if the triplet is outside the class (unless the
    plan says to skip the check) and ``ExperimentFailed`` when more than half
    the replicates at some n are flagged; the partial result is attached.
    """
    if not plan.skip_class_check:
        report = check_class_membership(plan.triplet, plan.params)
        if not report.passed:
            failing = [c.name for c in report.conditions if not c.passed]
            raise ValueError(f"triplet violates class conditions {failing}")

    jobs = [
        (plan.triplet, plan.params, n, r, plan.master_seed, plan.overrides)
        for n in plan.n_values
        for r in range(plan.replicates)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_one, jobs))
    else:
        records = [_run_one(job) for job in jobs]
    records.sort(key=lambda r: (r["n"], r["replicate"]))

    aggregates, robust = aggregate(records, plan.triplet)
    result = ExperimentResult(records, aggregates, robust)
    if plan.out_dir:
        result.write(plan.out_dir)
        with open(os.path.join(plan.out_dir, "plan.json"), "w") as fh:
            json.dump(plan.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    worst = max(a["flag_rate"] for a in aggregates)
    if worst > MAX_FLAG_RATE:
        raise ExperimentFailed(f"flag rate {worst:.2f} exceeds {MAX_FLAG_RATE}", result)
    return result


def _read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def load_result(out_dir, triplet: LevyTriplet, atol=1e-14) -> ExperimentResult:
    """Read result CSVs back and check the stored aggregates against the records."""
    out = Path(out_dir)
    records = []
    for row in _read_rows(out / "records.csv"):
        rec = {"n": int(row["n"]), "replicate": int(row["replicate"])}
        for k in ("sigma2_hat", "lambda_hat", "gamma_hat", "mise_rho"):
            rec[k] = float(row[k])
        for k in ("failed", "zero_risk", "truncation_active", "quadrature_converged"):
            rec[k] = row[k] == "1"
        records.append(rec)
    stored = [{k: (int(v) if k == "n" else float(v)) for k, v in row.items()} for row in _read_rows(out / "aggregates.csv")]
    aggregates, robust = aggregate(records, triplet)
    for got, want in zip(stored, aggregates):
        for k in AGGREGATE_FIELDS:
            a, b = got[k], want[k]
            if not (math.isnan(a) and math.isnan(b)) and abs(a - b) > atol * max(1.0, abs(b)):
                raise ValueError(f"stored {k} at n={got['n']} disagrees with records: {a} vs {b}")
    return ExperimentResult(records, stored, robust)


def reference_plan(master_seed=20240601, replicates=50, out_dir=None) -> ExperimentPlan:
    """gamma=1, sigma2=1, lambda=1 with N(0,1) jumps, n in {500, 5000, 50000}."""
    from .model import JumpDensity

    return ExperimentPlan(
        triplet=LevyTriplet(1.0, 1.0, 1.0, JumpDensity.gaussian(0.0, 1.0)),
        params=ClassParams(beta=1.0, L=10.0, Lambda=2.0, K=10.0, Sigma=2.0, Gamma=2.0, C=10.0),
        n_values=[500, 5000, 50000],
        replicates=replicates,
        master_seed=master_seed,
        out_dir=out_dir,
    )

"""Command line front end.

Exit status: 0 on success, 1 for usage and input errors, 2 for numerical
failures (unresolved phase winding, too many flagged replicates).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ecf import UnresolvedWinding
from .estimators import default_config, estimate, estimate_rho
from .harness import ExperimentFailed, ExperimentPlan, run_experiment
from .kernels import build_kernels, verify_moments
from .model import ClassParams, LevyTriplet, check_class_membership
from .simulate import SampleFormatError, read_sample_csv, simulate_increments, write_sample_csv

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _need_config(args):
    if not args.config:
        raise UsageError("--config PATH is required for this command")
    return _load_json(args.config)


def _triplet(doc, path):
    try:
        return LevyTriplet.from_dict(doc.get("triplet", doc))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: invalid triplet: {exc}") from None


def _class_params(doc, path):
    if "class" not in doc:
        raise UsageError(f"{path}: missing 'class' section")
    try:
        return ClassParams.from_dict(doc["class"])
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: invalid class parameters: {exc}") from None


def _out_dir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_simulate(args):
    doc = _need_config(args)
    triplet = _triplet(doc, args.config)
    sample = simulate_increments(triplet, args.n, args.seed)
    path = _out_dir(args) / "sample.csv"
    write_sample_csv(sample.values, path)
    print(path)


def _overrides(args):
    out = {}
    if args.eta is not None:
        out["eta"] = args.eta
    if args.grid_size is not None:
        out["grid_size"] = args.grid_size
    return out


def cmd_estimate(args):
    doc = _need_config(args)
    params = _class_params(doc, args.config)
    if args.input:
        try:
            sample = read_sample_csv(args.input)
        except SampleFormatError as exc:
            raise UsageError(str(exc)) from None
    else:
        if args.n is None:
            raise UsageError("give --input CSV or --n to simulate from the config triplet")
        sample = simulate_increments(_triplet(doc, args.config), args.n, args.seed).values
    try:
        config = default_config(len(sample), params, **_overrides(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    grid, est = estimate(sample, config, params)
    density = estimate_rho(sample, est, grid, config)
    out = _out_dir(args)
    _write_json(est.to_dict(), out / "estimate.json")
    density.to_csv(out / "density.csv")
    print(json.dumps({k: getattr(est, k) for k in ("sigma2_hat", "lambda_hat", "gamma_hat")}))


def cmd_experiment(args):
    doc = _need_config(args)
    if args.seed is not None:
        doc["master_seed"] = args.seed
    overrides = dict(doc.get("overrides", {}), **_overrides(args))
    doc["overrides"] = overrides
    try:
        plan = ExperimentPlan.from_dict(doc, out_dir=str(_out_dir(args)))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{args.config}: invalid plan: {exc}") from None
    try:
        result = run_experiment(plan, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for row in result.aggregates:
        print(",".join(f"{k}={row[k]:.6g}" for k in row))


def cmd_kernels(args):
    report = []
    for k in build_kernels(args.beta):
        report.append(dict(k.to_dict(), moments=verify_moments(k).to_dict()))
    text = json.dumps(report, indent=2)
    if args.out:
        _write_json(report, _out_dir(args) / "kernels.json")
    print(text)
    if not all(r["moments"]["passed"] for r in report):
        return EXIT_NUMERICAL


def cmd_check_class(args):
    doc = _need_config(args)
    report = check_class_membership(_triplet(doc, args.config), _class_params(doc, args.config))
    print(json.dumps(report.to_dict(), indent=2))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="triplet, class or plan JSON")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--grid-size", type=int, default=None)
    common.add_argument("--eta", type=float, default=None)

    parser = _Parser(prog="spectral-levy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common], help="simulate increments to CSV")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", parents=[common], help="estimate the triplet and Levy density")
    p.add_argument("--input", metavar="CSV")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("experiment", parents=[common], help="run a Monte Carlo plan")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("kernels", parents=[common], help="build spectral kernels for a smoothness index")
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_kernels)

    p = sub.add_parser("check-class", parents=[common], help="check class membership of a triplet")
    p.set_defaults(func=cmd_check_class)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", None) is None and args.command in ("simulate", "estimate"):
        args.seed = 0
    try:
        status = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnresolvedWinding, ExperimentFailed) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return status or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``linrs gen-data | run | sweep-aleph | report``."""

import argparse
import csv
import dataclasses
import logging
import os
import sys

from .config import ENVIRONMENTS, POLICY_NAMES, ExperimentConfig
from .environments import SyntheticSpec, build_filtered_dataset, save_dataset
from .exceptions import ConfigError, DataError, InvalidArgumentError, NumericalError
from .harness import (
    ReplicationError,
    SUMMARY_COLUMNS,
    load_environment,
    run_experiment,
    summary_row,
    write_results,
    write_summary,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 2, 3, 4

# flag dest -> ExperimentConfig field
OVERRIDES = {
    "environment": "environment",
    "data": "data_path",
    "policy": "policy",
    "aleph": "aleph",
    "w": "w",
    "eta": "eta",
    "alpha": "alpha",
    "lam": "lam",
    "a0": "a0",
    "b0": "b0",
    "horizon": "horizon",
    "replications": "replications",
    "seed": "seed",
    "initial_pulls": "initial_pulls",
    "batch_size": "batch_size",
    "epochs": "epochs",
    "queue_size": "queue_size",
    "immediate": "immediate",
    "inverse": "inverse",
    "n_jobs": "n_jobs",
    "out": "output",
    "jester_columns": "jester_columns",
}

def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")

def _add_experiment_flags(p):
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--environment", choices=ENVIRONMENTS)
    p.add_argument("--data", help="dataset file")
    p.add_argument("--policy", choices=POLICY_NAMES)
    p.add_argument("--aleph", type=float, help="aspiration level (LinRS)")
    p.add_argument("--w", type=float, help="reliability target weight (LinRS)")
    p.add_argument("--eta", type=float, help="reliability learning rate (LinRS)")
    p.add_argument("--alpha", type=float, help="confidence width (LinUCB)")
    p.add_argument("--lambda", dest="lam", type=float, help="prior precision (LinTS)")
    p.add_argument("--a0", type=float, help="inverse-gamma shape prior (LinTS)")
    p.add_argument("--b0", type=float, help="inverse-gamma scale prior (LinTS)")
    p.add_argument("--horizon", type=int)
    p.add_argument("--replications", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--initial-pulls", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--queue-size", type=int)
    p.add_argument("--immediate", action="store_true", default=None,
                   help="apply every observation at once instead of in batches")
    p.add_argument("--inverse", choices=("solve", "sherman-morrison"))
    p.add_argument("--n-jobs", type=int, help="replications run in parallel")
    p.add_argument("--jester-columns", type=_int_list,
                   help="the 40 Jester file columns of interest, comma separated")
    p.add_argument("--out", help="output directory")

def build_parser():
    parser = argparse.ArgumentParser(prog="linrs", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-data", help="generate a filtered synthetic dataset")
    g.add_argument("--d", type=int, default=128, help="context dimension")
    g.add_argument("--k", type=int, default=8, help="number of arms")
    g.add_argument("--sigma", type=float, default=0.01, help="parameter variance")
    g.add_argument("--noise-var", type=float, default=0.1)
    g.add_argument("--aleph-opt", type=float, default=0.5)
    g.add_argument("--n", type=int, default=50_000, help="rows to keep")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    r = sub.add_parser("run", help="run one experiment")
    _add_experiment_flags(r)

    s = sub.add_parser("sweep-aleph", help="run one experiment per aspiration level")
    _add_experiment_flags(s)
    s.add_argument("--alephs", type=float, nargs="*", required=True)

    rep = sub.add_parser("report", help="print the summary of result directories")
    rep.add_argument("dirs", nargs="+")
    return parser

def resolve_config(args):
    """Config file values, then command-line overrides."""
    if args.config and not os.path.exists(args.config):
        raise ConfigError("config", f"config file not found: {args.config}")
    config = ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    changes = {}
    for dest, name in OVERRIDES.items():
        value = getattr(args, dest, None)
        if value is not None:
            changes[name] = value
    return dataclasses.replace(config, **changes).validate()

def cmd_gen_data(args):
    spec = SyntheticSpec(n_features=args.d, n_arms=args.k, param_scale=args.sigma,
                         noise_var=args.noise_var, aleph_opt=args.aleph_opt,
                         n_rows=args.n, seed=args.seed)
    if args.n == 0:
        print("linrs: warning: --n 0 writes an empty dataset", file=sys.stderr)
    dataset = build_filtered_dataset(spec)
    save_dataset(dataset, args.out)
    print(f"rows: {len(dataset)}")
    print(f"acceptance rate: {dataset.acceptance_rate:.6g}")
    print(f"wrote {args.out}")
    return EXIT_OK

def _run_one(config, environment, out_dir):
    result = run_experiment(config, environment)
    write_results(result, out_dir)
    return result

def cmd_run(args):
    config = resolve_config(args)
    environment = load_environment(config)
    result = _run_one(config, environment, config.output)
    row = summary_row(result)
    print(f"{row['policy']}: final regret {float(row['final_regret_mean']):.4g} "
          f"(sd {float(row['final_regret_std']):.4g}), "
          f"{float(row['mean_runtime_s']):.4g} s per replication")
    print(f"wrote {config.output}")
    return EXIT_OK

def cmd_sweep(args):
    if not args.alephs:
        raise ConfigError("alephs", "need at least one aspiration level")
    config = resolve_config(args)
    environment = load_environment(config)
    rows = []
    for aleph in args.alephs:
        out_dir = os.path.join(config.output, f"aleph={aleph:g}")
        result = _run_one(dataclasses.replace(config, aleph=aleph, output=out_dir),
                          environment, out_dir)
        rows.append(dict(summary_row(result), aleph=repr(aleph)))
        print(f"aleph={aleph:g}: final regret {result.final_regrets.mean():.4g}")
    path = os.path.join(config.output, "summary.csv")
    write_summary(path, rows, extra_columns=("aleph",))
    print(f"wrote {path}")
    return EXIT_OK

def cmd_report(args):
    width = max(len(c) for c in SUMMARY_COLUMNS)
    for d in args.dirs:
        path = os.path.join(d, "summary.csv")
        if not os.path.exists(path):
            raise DataError(f"no summary.csv in {d}")
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                print(d)
                for key, value in row.items():
                    if key == "seeds":
                        value = f"{len(value.split(';'))} replications"
                    print(f"  {key:<{width}}  {value}")
    return EXIT_OK

COMMANDS = {"gen-data": cmd_gen_data, "run": cmd_run, "sweep-aleph": cmd_sweep, "report": cmd_report}

def _exit_code(exc):
    if isinstance(exc, ReplicationError) and exc.__cause__ is not None:
        return _exit_code(exc.__cause__)
    if isinstance(exc, ConfigError):
        return EXIT_USAGE
    if isinstance(exc, (DataError, FileNotFoundError)):
        return EXIT_DATA
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(exc, InvalidArgumentError):
        return EXIT_USAGE
    return None

def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except Exception as exc:
        code = _exit_code(exc)
        if code is None:
            raise
        if isinstance(exc, ConfigError):
            print(f"linrs: invalid configuration, {exc}", file=sys.stderr)
        else:
            print(f"linrs: {exc}", file=sys.stderr)
        return code

if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: ``simulate`` (benchmark designs to CSV), ``fit`` (run the
chain and print a JSON report), ``grid`` (stabilizer-posterior grids as
CSV for contour/line plots), ``compare-pip`` (side-by-side with the
indicator baseline).  Exit codes are a stable contract: 0 success,
2 usage, 3 IO/parse, 4 data validation, 5 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .dataset import Dataset, Hyperparameters, load_csv, ols_fit, standardize, validate
from .errors import (
    DomainError,
    InvalidConfigError,
    KappaGError,
    NonFiniteError,
    ParseError,
    RankDeficientError,
    ShapeMismatchError,
)
from .oracle import grid_posterior_gj, pair_grid_log_density
from .pip_baseline import ssvs_pip
from .sampler import SamplerConfig, acceptance_rate, export_trace, run_chain
from .selection import compare_report, pooled_summary, summary_report
from .simgen import DESIGNS, write_manifest

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4
EXIT_NUMERIC = 5

OUT_DIR_ENV = "KAPPAG_OUT_DIR"


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return value


def _response_arg(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def _default_out_dir() -> str:
    return os.environ.get(OUT_DIR_ENV, ".")


def _emit(report: dict, out_path) -> None:
    text = json.dumps(report, indent=2)
    print(text)
    if out_path is not None:
        Path(out_path).write_text(text + "\n")


def _load(args) -> Dataset:
    dataset = load_csv(args.data, response=args.response)
    if getattr(args, "standardize", False):
        dataset = standardize(dataset)
    return validate(dataset)


def _hyper(args) -> Hyperparameters:
    return Hyperparameters(
        a=args.a,
        b=args.b,
        alpha=args.alpha,
        theta=args.theta,
        proposal_a=args.proposal_a,
        proposal_b=args.proposal_b,
    )


def cmd_simulate(args) -> int:
    out_dir = Path(args.out if args.out is not None else _default_out_dir())
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset, true_beta = DESIGNS[args.design](args.seed, n=args.n)
    from .dataset import save_csv

    save_csv(dataset, out_dir / "data.csv")
    write_manifest(out_dir / "manifest.json", args.design, args.seed, dataset, true_beta)
    print(f"wrote {out_dir / 'data.csv'} and {out_dir / 'manifest.json'}")
    return EXIT_OK


def _fit_traces(dataset, hyper, args):
    configs = [
        SamplerConfig(
            iterations=args.iters,
            seed=args.seed + c,
            burn_in=args.burn_in,
            g_update=args.g_update,
        )
        for c in range(args.chains)
    ]
    if args.chains == 1:
        return configs, [run_chain(dataset, hyper, configs[0])]
    with ThreadPoolExecutor(max_workers=min(args.chains, os.cpu_count() or 1)) as pool:
        futures = [pool.submit(run_chain, dataset, hyper, cfg) for cfg in configs]
        return configs, [f.result() for f in futures]


def cmd_fit(args) -> int:
    dataset = _load(args)
    hyper = _hyper(args)
    configs, traces = _fit_traces(dataset, hyper, args)
    summary = pooled_summary(traces, threshold=args.threshold)
    ols = ols_fit(dataset)
    report = {
        "report": "fit",
        "version": __version__,
        "data": str(args.data),
        "response": str(args.response),
        "iterations": int(args.iters),
        "burn_in": int(configs[0].burn_in_resolved),
        "seed": int(args.seed),
        "threshold": float(args.threshold),
        "g_update": configs[0].g_update_for(dataset.p),
        "hyperparameters": {
            "a": hyper.a,
            "b": hyper.b,
            "alpha": hyper.alpha,
            "theta": hyper.theta,
            "proposal_a": hyper.proposal_a,
            "proposal_b": hyper.proposal_b,
        },
        "chains": [
            {
                "seed": int(cfg.seed),
                "acceptance_rate": float(acceptance_rate(trace)),
                "g_mean": [float(v) for v in trace.g[trace.burn_in :].mean(axis=0)],
                "beta_mean": [float(v) for v in trace.beta[trace.burn_in :].mean(axis=0)],
            }
            for cfg, trace in zip(configs, traces)
        ],
        "variables": summary_report(summary, dataset.column_names(), ols.beta_hat),
    }
    _emit(report, args.out)
    if args.trace_out is not None:
        export_trace(traces[0], args.trace_out, hyper, configs[0])
    return EXIT_OK


def cmd_grid(args) -> int:
    dataset = _load(args)
    p = dataset.p
    pair = args.pair
    coord = args.coord
    if pair is None and coord is None:
        if p >= 2:
            pair = (1, 2)
        else:
            coord = 1
    out_path = Path(args.out)
    if pair is not None:
        j, k = pair
        if not (1 <= j <= p and 1 <= k <= p) or j == k:
            raise InvalidConfigError(f"--pair needs two distinct columns in 1..{p}")
        m = args.m if args.m is not None else 101
        grid, z = pair_grid_log_density(
            dataset, args.kappa, args.sigma2, args.a, args.b, j - 1, k - 1, m=m
        )
        names = dataset.column_names()
        with out_path.open("w", newline="") as fh:
            fh.write(f"g_{names[j - 1]},g_{names[k - 1]},log_density\n")
            gvals = [repr(float(v)) for v in grid]
            for r in range(m):
                for c in range(m):
                    fh.write(f"{gvals[r]},{gvals[c]},{float(z[r, c])!r}\n")
    else:
        j = coord
        if not 1 <= j <= p:
            raise InvalidConfigError(f"--coord must lie in 1..{p}")
        m = args.m if args.m is not None else 2000
        x = dataset.X[:, j - 1]
        result = grid_posterior_gj(
            float(x @ dataset.y),
            float(x @ x),
            args.kappa,
            args.sigma2,
            args.a,
            args.b,
            m=m,
        )
        with out_path.open("w", newline="") as fh:
            fh.write("g,density\n")
            for g, d in zip(result.grid, result.density):
                fh.write(f"{float(g)!r},{float(d)!r}\n")
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_compare_pip(args) -> int:
    dataset = _load(args)
    hyper = _hyper(args)
    config = SamplerConfig(
        iterations=args.iters,
        seed=args.seed,
        burn_in=args.burn_in,
        g_update=args.g_update,
    )
    trace = run_chain(dataset, hyper, config)
    summary = pooled_summary([trace], threshold=args.threshold)
    g_scale = float(dataset.n) if args.g_scale is None else args.g_scale
    pip_iters = args.pip_iters if args.pip_iters is not None else args.iters
    pip = ssvs_pip(
        dataset,
        g_scale=g_scale,
        prior_inclusion=args.prior_inclusion,
        T=pip_iters,
        seed=args.seed,
    )
    rows = compare_report(summary, pip, dataset.column_names())
    report = {
        "report": "compare-pip",
        "version": __version__,
        "data": str(args.data),
        "response": str(args.response),
        "iterations": int(args.iters),
        "burn_in": int(config.burn_in_resolved),
        "seed": int(args.seed),
        "threshold": float(args.threshold),
        "hyperparameters": {
            "a": hyper.a,
            "b": hyper.b,
            "alpha": hyper.alpha,
            "theta": hyper.theta,
            "proposal_a": hyper.proposal_a,
            "proposal_b": hyper.proposal_b,
        },
        "pip": {
            "g_scale": float(g_scale),
            "prior_inclusion": float(args.prior_inclusion),
            "iterations": int(pip_iters),
        },
        "methods_agree": bool(
            all(r["selected_stabilizer"] == r["selected_pip"] for r in rows)
        ),
        "variables": rows,
    }
    _emit(report, args.out)
    return EXIT_OK


def _add_common_fit_options(sub, iters_default=20000):
    sub.add_argument("--data", required=True, help="CSV file with a header row")
    sub.add_argument(
        "--response",
        type=_response_arg,
        default="y",
        help="response column name or 0-based index (default: y)",
    )
    sub.add_argument("--a", type=_positive_float, default=0.5)
    sub.add_argument("--b", type=_positive_float, default=0.5)
    sub.add_argument("--alpha", type=_positive_float, default=1.0)
    sub.add_argument("--theta", type=_positive_float, default=1.0)
    sub.add_argument("--proposal-a", type=_positive_float, default=1.0)
    sub.add_argument("--proposal-b", type=_positive_float, default=1.0)
    sub.add_argument("--iters", type=_positive_int, default=iters_default)
    sub.add_argument(
        "--burn-in",
        type=int,
        default=None,
        help="sweeps to discard (default: iters/10)",
    )
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--threshold", type=_positive_float, default=0.5)
    sub.add_argument(
        "--g-update", choices=("auto", "joint", "percoord"), default="auto"
    )
    sub.add_argument("--standardize", action="store_true")
    sub.add_argument("--out", default=None, help="also write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kappag",
        description="Bayesian variable selection with per-coefficient "
        "prior stabilizers.",
    )
    parser.add_argument("--version", action="version", version=f"kappag {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sim = commands.add_parser("simulate", help="generate a benchmark dataset")
    sim.add_argument("--design", choices=sorted(DESIGNS), required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--n", type=_positive_int, default=30)
    sim.add_argument(
        "--out",
        default=None,
        help=f"output directory (default: ${OUT_DIR_ENV} or the cwd)",
    )
    sim.set_defaults(func=cmd_simulate)

    fit = commands.add_parser("fit", help="run the sampler and report summaries")
    _add_common_fit_options(fit)
    fit.add_argument("--chains", type=_positive_int, default=1)
    fit.add_argument("--trace-out", default=None, help="write the trace CSV here")
    fit.set_defaults(func=cmd_fit)

    grid = commands.add_parser("grid", help="export stabilizer-posterior grids")
    grid.add_argument("--data", required=True)
    grid.add_argument("--response", type=_response_arg, default="y")
    grid.add_argument("--kappa", type=_positive_float, default=1.0)
    grid.add_argument("--sigma2", type=_positive_float, default=1.0)
    grid.add_argument("--a", type=_positive_float, default=0.5)
    grid.add_argument("--b", type=_positive_float, default=0.5)
    grid.add_argument(
        "--pair",
        nargs=2,
        type=_positive_int,
        metavar=("J", "K"),
        default=None,
        help="two 1-based columns for a 2-d log-density grid",
    )
    grid.add_argument(
        "--coord",
        type=_positive_int,
        default=None,
        help="single 1-based column for a per-coordinate density grid",
    )
    grid.add_argument("--m", type=_positive_int, default=None)
    grid.add_argument("--standardize", action="store_true")
    grid.add_argument("--out", required=True)
    grid.set_defaults(func=cmd_grid)

    cmp_ = commands.add_parser(
        "compare-pip", help="compare stabilizer selection with the PIP baseline"
    )
    _add_common_fit_options(cmp_)
    cmp_.add_argument("--pip-iters", type=_positive_int, default=None)
    cmp_.add_argument("--g-scale", type=_positive_float, default=None)
    cmp_.add_argument(
        "--prior-inclusion", type=_positive_float, default=0.5
    )
    cmp_.set_defaults(func=cmd_compare_pip)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InvalidConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NonFiniteError, RankDeficientError, ShapeMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except KappaGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

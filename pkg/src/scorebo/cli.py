"""Command-line benchmark harness.

Subcommands:
  run     one experiment (method x problem x seed), CSV + SVG output
  sweep   the same experiment over a list of seeds, plus a median aggregate
  report  re-render SVG plots from existing trace CSVs

Configuration is a flat JSON document; every field has a default and any
CLI flag overrides the file value.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .acquisition import ZetaSchedule
from .baseline import BoOptimizer
from .engine import ScoreOptimizer
from .errors import ConfigurationError, SolverError, SpaceExhausted, SurrogateError
from .problems import (ackley, ackley_space, load_datasheet,
                       make_synthetic_datasheet, sdm_objective, sdm_space)
from .report import (ConvergenceTrace, TraceRow, read_trace_csv, render_svg,
                     write_trace_csv)


@dataclass
class RunConfig:
    method: str = "score"            # "score" or "bo"
    problem: str = "ackley"          # "ackley" or "sdm"
    dims: int = 10                   # ackley only; sdm is always 5-parameter
    grid_points: int = 61
    grid_lo: float = -5.0
    grid_hi: float = 10.0
    n_init: int | None = None        # default: twice the number of dimensions
    batch_size: int = 1
    max_evals: int = 300
    seed: int = 0
    zeta_initial: float = 0.01
    zeta_decay: float = 1.0
    lengthscale_steps: float = 3.0   # 1D surrogate lengthscale, in grid steps
    bo_lengthscale: float = 0.08     # joint surrogate, on [0,1]-rescaled inputs
    noise_variance: float = 1e-6
    tau_fraction: float = 0.1
    candidate_pool_size: int = 1000
    datasheet: str | None = None     # path to a fixture; default is synthesized
    out_dir: str = "runs"

    def validate(self) -> None:
        if self.method not in ("score", "bo"):
            raise ConfigurationError(f"unknown method {self.method!r}")
        if self.problem not in ("ackley", "sdm"):
            raise ConfigurationError(f"unknown problem {self.problem!r}")
        if self.dims < 1:
            raise ConfigurationError(f"dims must be >= 1, got {self.dims}")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.n_init is not None and self.n_init < 1:
            raise ConfigurationError(f"n_init must be >= 1, got {self.n_init}")
        n_init = self.n_init if self.n_init is not None else 1
        if self.max_evals < n_init:
            raise ConfigurationError(
                f"max_evals={self.max_evals} is below n_init={n_init}")


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then JSON file values, then explicit CLI overrides."""
    values = {}
    if path is not None:
        try:
            values = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}")
        known = {f.name for f in dataclasses.fields(RunConfig)}
        unknown = set(values) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    config = RunConfig(**values)
    config.validate()
    return config


def _build_problem(config: RunConfig):
    if config.problem == "ackley":
        return ackley_space(config.dims, config.grid_points,
                            config.grid_lo, config.grid_hi), ackley
    targets = (load_datasheet(config.datasheet)[0] if config.datasheet
               else make_synthetic_datasheet())
    return sdm_space(targets), sdm_objective(targets)


def run_experiment(config: RunConfig) -> ConvergenceTrace:
    """Execute one optimizer to budget or space exhaustion."""
    config.validate()
    space, objective = _build_problem(config)
    n_init = config.n_init if config.n_init is not None else 2 * space.dims
    if config.max_evals < n_init:
        raise ConfigurationError(
            f"max_evals={config.max_evals} is below n_init={n_init}")

    zeta = ZetaSchedule(config.zeta_initial, config.zeta_decay)
    if config.method == "score":
        opt = ScoreOptimizer(space=space, objective=objective,
                             batch_size=config.batch_size, seed=config.seed,
                             zeta=zeta,
                             lengthscale_steps=config.lengthscale_steps,
                             noise_variance=config.noise_variance,
                             tau_fraction=config.tau_fraction)
    else:
        opt = BoOptimizer(space=space, objective=objective, seed=config.seed,
                          candidate_pool_size=config.candidate_pool_size,
                          zeta=zeta, lengthscale=config.bo_lengthscale,
                          noise_variance=config.noise_variance)

    trace = ConvergenceTrace(method=config.method, seed=config.seed)
    t0 = time.perf_counter()
    opt.initialize(n_init)
    init_ms = (time.perf_counter() - t0) * 1000.0
    best = opt.history.best
    trace.append(TraceRow(iteration=0, evals=opt.n_evaluations,
                          best_value=best.value, iter_time_ms=init_ms,
                          cum_time_ms=init_ms, gp_fit_ms=0.0,
                          suggested_indices=best.indices))

    iteration = 1
    cum_ms = init_ms
    while opt.n_evaluations < config.max_evals:
        budget = config.max_evals - opt.n_evaluations
        n_before = len(opt.history)
        t0 = time.perf_counter()
        try:
            if config.method == "score":
                result = opt.step(max_batch=budget)
                gp_ms = result.gp_fit_seconds * 1000.0
            else:
                gp_ms = opt.step() * 1000.0
        except SpaceExhausted:
            break
        iter_ms = (time.perf_counter() - t0) * 1000.0
        cum_ms += iter_ms
        new = opt.history.records[n_before:]
        suggested = (min(new, key=lambda r: r.value).indices if new
                     else opt.history.best.indices)
        trace.append(TraceRow(iteration=iteration, evals=opt.n_evaluations,
                              best_value=opt.history.best.value,
                              iter_time_ms=iter_ms, cum_time_ms=cum_ms,
                              gp_fit_ms=gp_ms, suggested_indices=suggested))
        iteration += 1
    return trace


def aggregate_median(traces: list[ConvergenceTrace]) -> ConvergenceTrace:
    """Row-wise medians across seeds of the same configuration."""
    if not traces:
        raise ValueError("no traces to aggregate")
    n_rows = min(len(t.rows) for t in traces)
    agg = ConvergenceTrace(method=f"{traces[0].method}-median", seed=-1)
    for i in range(n_rows):
        rows = [t.rows[i] for t in traces]
        agg.rows.append(TraceRow(
            iteration=rows[0].iteration,
            evals=rows[0].evals,
            best_value=statistics.median(r.best_value for r in rows),
            iter_time_ms=statistics.median(r.iter_time_ms for r in rows),
            cum_time_ms=statistics.median(r.cum_time_ms for r in rows),
        ))
    return agg


def _trace_stem(config: RunConfig) -> str:
    return f"{config.method}_{config.problem}"


def _print_summary(config: RunConfig, trace: ConvergenceTrace) -> None:
    print(f"{config.method} on {config.problem} (seed {config.seed}): "
          f"best={trace.best_value:.6g} evals={trace.total_evals} "
          f"time={trace.total_time_ms / 1000.0:.2f}s")


def _cmd_run(args) -> int:
    config = load_config(args.config, _overrides(args))
    trace = run_experiment(config)
    out = Path(config.out_dir)
    stem = _trace_stem(config)
    write_trace_csv(trace, out / f"{stem}_seed{config.seed}.csv")
    render_svg([trace], "convergence", out / f"{stem}_seed{config.seed}_convergence.svg")
    render_svg([trace], "timing", out / f"{stem}_seed{config.seed}_timing.svg")
    _print_summary(config, trace)
    return 0


def _cmd_sweep(args) -> int:
    seeds = [int(s) for s in args.seeds.split(",") if s.strip() != ""]
    if not seeds:
        raise ConfigurationError("--seeds must list at least one seed")
    traces = []
    config = None
    for seed in seeds:
        overrides = _overrides(args)
        overrides["seed"] = seed
        config = load_config(args.config, overrides)
        trace = run_experiment(config)
        traces.append(trace)
        _print_summary(config, trace)
    out = Path(config.out_dir)
    stem = _trace_stem(config)
    for trace in traces:
        write_trace_csv(trace, out / f"{stem}_seed{trace.seed}.csv")
    write_trace_csv(aggregate_median(traces), out / f"{stem}_median.csv")
    render_svg(traces, "convergence", out / f"{stem}_convergence.svg")
    render_svg(traces, "timing", out / f"{stem}_timing.svg")
    return 0


def _cmd_report(args) -> int:
    traces = [read_trace_csv(p) for p in args.csv]
    out = Path(args.out or ".")
    render_svg(traces, args.kind, out / f"report_{args.kind}.svg")
    return 0


def _overrides(args) -> dict:
    keys = ("method", "problem", "dims", "seed", "max_evals", "batch_size",
            "n_init", "grid_points", "zeta_initial", "zeta_decay",
            "candidate_pool_size", "datasheet", "out_dir")
    return {k: getattr(args, k, None) for k in keys}


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat JSON config file")
    p.add_argument("--method", choices=("score", "bo"))
    p.add_argument("--problem", choices=("ackley", "sdm"))
    p.add_argument("--dims", type=int)
    p.add_argument("--max-evals", dest="max_evals", type=int)
    p.add_argument("--batch", dest="batch_size", type=int)
    p.add_argument("--n-init", dest="n_init", type=int)
    p.add_argument("--grid-points", dest="grid_points", type=int)
    p.add_argument("--zeta", dest="zeta_initial", type=float)
    p.add_argument("--zeta-decay", dest="zeta_decay", type=float)
    p.add_argument("--pool-size", dest="candidate_pool_size", type=int)
    p.add_argument("--datasheet", help="key=value IV datasheet fixture")
    p.add_argument("--out", dest="out_dir", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scorebo",
        description="Benchmark dimension-decomposed vs classical Bayesian "
                    "optimization on discrete grids.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment")
    _add_run_flags(p_run)
    p_run.add_argument("--seed", type=int)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run one experiment per seed")
    _add_run_flags(p_sweep)
    p_sweep.add_argument("--seeds", required=True,
                         help="comma-separated seed list")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_rep = sub.add_parser("report", help="re-render plots from trace CSVs")
    p_rep.add_argument("csv", nargs="+", help="trace CSV files")
    p_rep.add_argument("--kind", choices=("convergence", "timing"),
                       default="convergence")
    p_rep.add_argument("--out", help="output directory")
    p_rep.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, SurrogateError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Data goes to stdout and diagnostics to stderr.  Exit codes: 0 success,
1 I/O or parse error, 2 a mathematical hypothesis of the bound is violated.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import worked_example
from .chernoff import DEFAULT_MAX_ITER, DEFAULT_TOL, bound, solve_tilt
from .errors import ChernoffError, HypothesisViolation, InfeasibleTarget
from .measures import DiscreteModel, cgf
from .mle import (
    ExperimentRow,
    asymptotic_experiment,
    chernoff_from_likelihood,
    draw_sample,
    max_log_likelihood,
    sample_mean_v,
)
from .projection import i_projection
from .serialize import dumps_json, load_model, load_sample, parse_value_spec, to_csv

log = logging.getLogger("chernoff_forms")

SWEEP_COLUMNS = ("a", "theta_hat", "log_bound", "bound", "true_tail", "kl")
DEFAULT_SEED = 42


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = DEFAULT_TOL
    max_iterations: int = DEFAULT_MAX_ITER
    output_format: str = "json"
    seed: int | None = None
    precision: int = 6

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("--tol must be positive")
        if self.max_iterations < 1:
            raise ValueError("--max-iter must be at least 1")
        if not 1 <= self.precision <= 17:
            raise ValueError("--precision must be between 1 and 17")
        if self.output_format not in ("json", "csv"):
            raise ValueError("--format must be json or csv")


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_records(records: list[dict], columns: Sequence[str], cfg: RunConfig) -> None:
    if cfg.output_format == "json":
        _emit(dumps_json(records))
    else:
        _emit(to_csv(records, columns, cfg.precision))


def cmd_bound(args, cfg: RunConfig) -> int:
    model = load_model(args.model)
    v = parse_value_spec(args.v)
    report = bound(model, v, args.a, cfg.tolerance, cfg.max_iterations)
    log.info("theta_hat=%r iterations=%d residual=%.3g", report.tilt.theta_hat, report.tilt.iterations,
             report.tilt.residual)
    data = report.to_dict()
    if cfg.output_format == "json":
        _emit(dumps_json(data))
    else:
        cols = [k for k in data if k != "projection"]
        _emit(to_csv([data], cols, cfg.precision))
    return 0


def cmd_project(args, cfg: RunConfig) -> int:
    model = load_model(args.model)
    v = parse_value_spec(args.v)
    proj = i_projection(model, v, args.a, cfg.tolerance, cfg.max_iterations)
    if cfg.output_format == "json":
        _emit(dumps_json(proj.to_dict()))
    elif isinstance(model, DiscreteModel) and proj.tilted is not None:
        rows = [{"x": x, "q": q, "p_hat": p} for x, q, p in zip(model.support, model.prob, proj.tilted.prob)]
        _emit(to_csv(rows, ("x", "q", "p_hat"), cfg.precision))
    else:
        data = {k: val for k, val in proj.to_dict().items() if k != "tilted"}
        _emit(to_csv([data], list(data), cfg.precision))
    return 0


def _grid(start: float, stop: float, step: float) -> list[float]:
    if not step > 0:
        raise ValueError("--step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1 if stop >= start else 0
    return [start + k * step for k in range(count)]


def cmd_sweep(args, cfg: RunConfig) -> int:
    model = load_model(args.model)
    v = parse_value_spec(args.v)
    ex = model.mean()
    rows = []
    for a in _grid(args.start, args.stop, args.step):
        if a < ex - 1e-12 * max(1.0, abs(ex)):
            log.warning("a = %r is below E X = %r; skipped", a, ex)
            continue
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", UserWarning)
                rep = bound(model, v, a, cfg.tolerance, cfg.max_iterations, forms=False)
        except (InfeasibleTarget, UserWarning) as exc:
            log.warning("a = %r skipped: %s", a, exc)
            continue
        rows.append(
            {
                "a": a,
                "theta_hat": rep.tilt.theta_hat,
                "log_bound": rep.log_bound,
                "bound": rep.bound,
                "true_tail": rep.true_tail,
                "kl": rep.kl_value,
            }
        )
    if not rows:
        log.warning("no admissible thresholds in the requested range")
    _emit_records(rows, SWEEP_COLUMNS, cfg)
    return 0


def cmd_mle(args, cfg: RunConfig) -> int:
    model = load_model(args.model)
    if not isinstance(model, DiscreteModel):
        raise ValueError("mle needs a discrete model")
    v = parse_value_spec(args.v)
    if args.sample:
        sample = load_sample(args.sample)
    elif args.simulate_a is not None and args.n is not None:
        proj = i_projection(model, v, args.simulate_a, cfg.tolerance, cfg.max_iterations)
        seed = DEFAULT_SEED if cfg.seed is None else cfg.seed
        sample = draw_sample(proj.tilted.prob, args.n, np.random.Generator(np.random.PCG64(seed)))
    else:
        raise ValueError("mle needs --sample FILE or both --simulate-a and --n")
    sol, loglik = max_log_likelihood(model, v, sample, cfg.tolerance, cfg.max_iterations)
    vbar = sample_mean_v(model, v, sample)
    from_likelihood = chernoff_from_likelihood(model, sample, loglik)
    direct = solve_tilt(model, v, vbar, cfg.tolerance, cfg.max_iterations)
    if direct.attained == "attained":
        direct_bound = math.exp(cgf(model, v, direct.theta_hat) - direct.theta_hat * vbar)
    else:
        direct_bound = math.exp(direct.log_bound)
    data = {
        "n": sample.n,
        "sample_mean_v": vbar,
        "theta_ml": sol.theta_hat,
        "attained": sol.attained,
        "log_likelihood": loglik,
        "bound_from_likelihood": from_likelihood,
        "direct_bound": direct_bound,
        "abs_difference": abs(from_likelihood - direct_bound),
    }
    if cfg.output_format == "json":
        _emit(dumps_json(data))
    else:
        _emit(to_csv([data], list(data), cfg.precision))
    return 0


def cmd_experiment(args, cfg: RunConfig) -> int:
    model = load_model(args.model)
    if not isinstance(model, DiscreteModel):
        raise ValueError("experiment needs a discrete model")
    v = parse_value_spec(args.v)
    n_list = [int(float(tok)) for tok in args.n_list.split(",") if tok.strip()]
    seed = DEFAULT_SEED if cfg.seed is None else cfg.seed
    rows = asymptotic_experiment(model, v, args.a, n_list, seed, cfg.tolerance, cfg.max_iterations)
    records = [{c: getattr(r, c) for c in ExperimentRow.CSV_COLUMNS} for r in rows]
    _emit_records(records, ExperimentRow.CSV_COLUMNS, cfg)
    return 0


def reproduce_example(cfg: RunConfig) -> dict:
    """Recompute the worked-example table and compare with the printed figures."""
    model = worked_example.model()
    rows = []
    for a, (printed_bound, tol, printed_tail) in worked_example.PUBLISHED_BOUNDS.items():
        rep = bound(model, a=a, tol=cfg.tolerance, max_iter=cfg.max_iterations, forms=False)
        ok = abs(rep.bound - printed_bound) <= tol and abs(rep.true_tail - printed_tail) <= 1e-12
        rows.append(
            {
                "a": a,
                "bound": rep.bound,
                "published_bound": printed_bound,
                "tolerance": tol,
                "true_tail": rep.true_tail,
                "published_tail": printed_tail,
                "status": "PASS" if ok else "FAIL",
            }
        )
    proj = i_projection(model, a=4.0, tol=cfg.tolerance, max_iter=cfg.max_iterations)
    p_rows = []
    for x, p, ref in zip(model.support, proj.tilted.prob, worked_example.PUBLISHED_PROJECTION_A4):
        ok = abs(p - ref) <= worked_example.PROJECTION_TOL
        p_rows.append({"x": x, "p_hat": p, "published_p_hat": ref, "status": "PASS" if ok else "FAIL"})
    all_pass = all(r["status"] == "PASS" for r in rows + p_rows)
    return {"mean": model.mean(), "rows": rows, "projection_a4": p_rows, "all_pass": all_pass}


def cmd_reproduce_example(args, cfg: RunConfig) -> int:
    result = reproduce_example(cfg)
    if cfg.output_format == "json":
        _emit(dumps_json(result))
    else:
        table = to_csv(result["rows"], list(result["rows"][0]), cfg.precision)
        proj = to_csv(result["projection_a4"], list(result["projection_a4"][0]), cfg.precision)
        _emit(table + "\n" + proj)
    log.info("worked example: %s", "all PASS" if result["all_pass"] else "FAILURES present")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chernoff-forms",
        description="Chernoff tail bounds, I-projections and their equivalent forms.",
    )
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL, help="solver tolerance on the stationarity residual")
    parser.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER, help="solver iteration cap")
    parser.add_argument("--format", choices=("json", "csv"), default="json", dest="output_format")
    parser.add_argument("--seed", type=int, default=None, help=f"random seed (default {DEFAULT_SEED})")
    parser.add_argument("--precision", type=int, default=6, help="decimal places in CSV output")
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_args(p, with_a=True):
        p.add_argument("model", help="model JSON/CSV file, or an inline family such as gaussian:mu=0,sigma=1")
        p.add_argument("--v", default="identity", help="identity | log | table:<path>")
        if with_a:
            p.add_argument("--a", type=float, required=True, help="threshold a")

    p = sub.add_parser("bound", help="bound on P(X >= a) with every available form")
    model_args(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("project", help="I-projection of the model for threshold a")
    model_args(p)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("sweep", help="bound over a range of thresholds")
    model_args(p, with_a=False)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, default=1.0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mle", help="ML estimate of the tilt and the likelihood form of the bound")
    model_args(p, with_a=False)
    p.add_argument("--sample", help='sample JSON {"counts": [...]}')
    p.add_argument("--simulate-a", type=float, help="simulate from the projection for this threshold")
    p.add_argument("--n", type=int, help="simulated sample size")
    p.set_defaults(func=cmd_mle)

    p = sub.add_parser("experiment", help="convergence of l(theta_ML)/n to -H(p_hat)")
    model_args(p)
    p.add_argument("--n-list", default="100,10000,1000000", help="comma separated sample sizes")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("reproduce-example", help="recompute the eight-point worked example")
    p.set_defaults(func=cmd_reproduce_example)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.DEBUG if args.verbose else logging.WARNING)
    log.propagate = False
    try:
        cfg = RunConfig(args.tol, args.max_iter, args.output_format, args.seed, args.precision)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args, cfg)
    except HypothesisViolation as exc:
        print(f"error: hypothesis violated ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2
    except (ChernoffError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

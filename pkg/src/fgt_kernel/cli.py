"""Command-line interface: ``fgt-kernel {estimate,simulate,efficiency,kernel-info}``."""

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from . import __version__
from .asymptotics import asymptotic_variance, efficiency
from .bandwidth import regime_note, resolve_bandwidth
from .distributions import make_distribution, true_fgt
from .estimators import (
    FgtParams,
    adaptive_kernel_fgt,
    bias_reduced_fgt,
    classical_kernel_fgt,
    empirical_fgt,
    local_bandwidth_factors,
)
from .exceptions import FgtError
from .io import dumps, read_income_file, write_text
from .kernels import check_moments, get_kernel, verify_hypotheses
from .simulation import SimulationConfig, paper_config, paper_table, run_simulation

logger = logging.getLogger("fgt_kernel")

ESTIMATOR_CHOICES = ("empirical", "classical", "adaptive", "bias-reduced")


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_shared(p):
    p.add_argument("--kernel", default="gaussian", help="kernel name (default: gaussian)")
    p.add_argument("--out", help="write the full report to this file")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")


def _add_dist(p, default="pareto"):
    p.add_argument("--dist", choices=("pareto", "uniform"), default=default)
    p.add_argument("--x0", type=float, default=0.02)
    p.add_argument("--beta", type=float, default=0.2)
    p.add_argument("--upper", type=float, default=1.0)


def _dist_spec(args):
    if args.dist == "uniform":
        return {"name": "uniform"}
    return {"name": "pareto", "x0": args.x0, "beta": args.beta, "upper": args.upper}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fgt-kernel", description="Kernel estimators of the FGT poverty index."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate P(z, alpha) from an income file")
    p.add_argument("--input", required=True, help="income file, one value per row")
    p.add_argument("--z", type=float, required=True, help="poverty line (> 0)")
    p.add_argument("--alpha", type=float, default=0.0, help="poverty aversion (>= 0)")
    p.add_argument("--estimator", choices=ESTIMATOR_CHOICES, default="bias-reduced")
    p.add_argument("--bandwidth-rule", choices=("nlogn", "lil", "fixed"), default="nlogn")
    p.add_argument("--bandwidth", type=float, help="bandwidth for the fixed rule")
    p.add_argument("--sensitivity", type=float, default=0.5, help="adaptive sensitivity")
    p.add_argument("--header", action="store_true", help="skip a header row")
    p.add_argument("--column", type=int, default=0)
    p.add_argument("--delimiter")
    p.add_argument("--strict", action="store_true", help="fail on any bad row")
    _add_shared(p)

    p = sub.add_parser("simulate", help="Monte Carlo comparison of the estimators")
    p.add_argument("--config", help="JSON file with SimulationConfig fields")
    p.add_argument("--paper-table", action="store_true",
                   help="n=1000, R=50, truncated Pareto(0.02, 0.2, 1), nlogn bandwidth")
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--reps", type=int, help="replications R (>= 2)")
    p.add_argument("--n", type=int, help="sample size")
    p.add_argument("--z-grid", type=_float_list)
    p.add_argument("--alpha-grid", type=_float_list)
    p.add_argument("--estimators", help="comma-separated subset of " + ",".join(ESTIMATOR_CHOICES))
    p.add_argument("--bandwidth-rule", choices=("nlogn", "lil", "fixed"))
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--sensitivity", type=float)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock data from --out")
    _add_dist(p, default=None)
    _add_shared(p)

    p = sub.add_parser("efficiency", help="asymptotic variance and efficiency at (z, alpha)")
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    _add_dist(p)
    _add_shared(p)

    p = sub.add_parser("kernel-info", help="kernel moments and hypothesis checks")
    p.add_argument("--tol", type=float, default=1e-6)
    _add_shared(p)
    return parser


# --------------------------------------------------------------------------


def _emit(args, payload, text):
    if args.out:
        path = write_text(args.out, dumps(payload))
        logger.info("wrote %s", path)
    if args.format == "json":
        sys.stdout.write(dumps(payload))
    else:
        sys.stdout.write(text)


def cmd_estimate(args):
    if not args.z > 0:
        raise UsageError(f"--z must be positive, got {args.z}")
    if not args.alpha >= 0:
        raise UsageError(f"--alpha must be nonnegative, got {args.alpha}")
    parsed = read_income_file(args.input, header=args.header, column=args.column,
                              delimiter=args.delimiter)
    for err in parsed.errors:
        print(f"warning: {err}", file=sys.stderr)
    if args.strict and parsed.errors:
        raise UsageError(f"{len(parsed.errors)} invalid row(s) with --strict")
    sample = parsed.sample
    params = FgtParams(args.z, args.alpha)
    kernel = get_kernel(args.kernel)
    estimator = args.estimator.replace("-", "_")

    h = None
    notes = []
    if estimator != "empirical":
        if sample.n < 3 and args.bandwidth_rule != "fixed":
            raise UsageError("bandwidth rules need at least 3 observations; use --bandwidth")
        h = resolve_bandwidth(args.bandwidth_rule, sample.n, args.bandwidth)
        note = regime_note(args.bandwidth_rule, sample.n, h)
        if note:
            notes.append(note)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if estimator == "empirical":
            est = empirical_fgt(sample, params)
        elif estimator == "classical":
            est = classical_kernel_fgt(sample, kernel, h, params)
        elif estimator == "bias_reduced":
            est = bias_reduced_fgt(sample, kernel, h, params)
        else:
            factors = local_bandwidth_factors(sample, kernel, h, args.sensitivity)
            est = adaptive_kernel_fgt(sample, kernel, h, factors, params)

    payload = {
        "command": "estimate",
        "config": {
            "input": str(Path(args.input)),
            "z": args.z,
            "alpha": args.alpha,
            "estimator": estimator,
            "kernel": kernel.name,
            "bandwidth_rule": None if estimator == "empirical" else args.bandwidth_rule,
            "bandwidth": h,
            "sensitivity": args.sensitivity if estimator == "adaptive" else None,
            "header": args.header,
            "column": args.column,
            "delimiter": args.delimiter,
            "strict": args.strict,
        },
        "estimate": est.to_dict(),
        "row_errors": parsed.errors,
        "notes": notes,
    }
    if args.format == "csv":
        text = "estimator,z,alpha,n,bandwidth,grid_cells,value\n" + (
            f"{estimator},{args.z:g},{args.alpha:g},{est.n},"
            f"{'' if h is None else repr(h)},{'' if est.grid_cells is None else est.grid_cells},"
            f"{est.value!r}\n"
        )
    else:
        lines = [f"{estimator} P(z={args.z:g}, alpha={args.alpha:g}) = {est.value:.6f}",
                 f"n = {est.n}"]
        if h is not None:
            lines.append(f"h = {h:.6g}, [z/h] = {est.grid_cells}")
        lines += [f"warning: {w}" for w in est.warnings]
        lines += [f"note: {n}" for n in notes]
        text = "\n".join(lines) + "\n"
    _emit(args, payload, text)
    return 0


def _simulation_config(args):
    if args.config and args.paper_table:
        raise UsageError("use either --config or --paper-table")
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
    elif args.paper_table:
        data = paper_config().to_dict()
    else:
        data = SimulationConfig().to_dict()

    overrides = {
        "base_seed": args.seed,
        "replications": args.reps,
        "n": args.n,
        "z_grid": args.z_grid,
        "alpha_grid": args.alpha_grid,
        "bandwidth_rule": args.bandwidth_rule,
        "bandwidth": args.bandwidth,
        "adaptive_sensitivity": args.sensitivity,
    }
    if args.estimators:
        overrides["estimators"] = [e.strip() for e in args.estimators.split(",") if e.strip()]
    if args.dist:
        overrides["distribution"] = _dist_spec(args)
    data.update({k: v for k, v in overrides.items() if v is not None})
    if args.kernel:
        data["kernel"] = args.kernel
    if data.get("bandwidth_rule") != "fixed":
        data["bandwidth"] = None
    return SimulationConfig.from_dict(data)


def cmd_simulate(args):
    config = _simulation_config(args)
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    report = run_simulation(config, workers=args.workers)
    payload = report.body() if args.no_timing else report.to_dict()

    if all(e in config.estimators for e in ("bias_reduced", "classical", "adaptive")):
        text = paper_table(report, fmt="csv" if args.format == "csv" else "text")
    else:
        rows = ["estimator,z,alpha,true,mean,mse,variance"]
        for c in report.cells:
            rows.append(f"{c.estimator},{c.z:g},{c.alpha:g},{c.true_value:.6g},"
                        f"{c.mean:.6g},{c.mse:.6g},{c.variance:.6g}")
        text = "\n".join(rows) + "\n"
    for f in report.failures:
        print(f"warning: cell failure {f}", file=sys.stderr)
    _emit(args, payload, text)
    return 0


def cmd_efficiency(args):
    if not args.z > 0:
        raise UsageError(f"--z must be positive, got {args.z}")
    dist = make_distribution(**_dist_spec(args))
    kernel = get_kernel(args.kernel)
    p1 = true_fgt(dist, args.z, args.alpha)
    p2 = true_fgt(dist, args.z, 2 * args.alpha)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        var = asymptotic_variance(kernel, p1, p2)
    warn = [str(w.message) for w in caught]
    eff = efficiency(kernel, p1, p2)
    payload = {
        "command": "efficiency",
        "config": {"distribution": dist.describe(), "z": args.z, "alpha": args.alpha,
                   "kernel": kernel.name},
        "p_z_alpha": p1,
        "p_z_2alpha": p2,
        "square_integral": kernel.square_integral,
        "asymptotic_variance": var,
        "empirical_variance_limit": p2 - p1 * p1,
        "efficiency": eff,
        "warnings": warn,
    }
    if args.format == "csv":
        text = ("z,alpha,p_z_alpha,p_z_2alpha,asymptotic_variance,efficiency\n"
                f"{args.z:g},{args.alpha:g},{p1!r},{p2!r},{var!r},{eff!r}\n")
    else:
        lines = [
            f"P(z, alpha)   = {p1:.10g}",
            f"P(z, 2 alpha) = {p2:.10g}",
            f"asymptotic variance = {var:.7g}",
            f"efficiency e(z, alpha) = {eff:.7g}",
        ] + [f"warning: {w}" for w in warn]
        text = "\n".join(lines) + "\n"
    _emit(args, payload, text)
    return 0


def cmd_kernel_info(args):
    kernel = get_kernel(args.kernel)
    report = verify_hypotheses(kernel, args.tol)
    mu2, rk, ok = check_moments(kernel)
    payload = {
        "command": "kernel-info",
        "kernel": kernel.name,
        "second_moment": kernel.second_moment,
        "square_integral": kernel.square_integral,
        "effective_support_radius": kernel.effective_support_radius,
        "quadrature_moments": {"second_moment": mu2, "square_integral": rk, "match": ok},
        "hypotheses": report.to_dict(),
    }
    if args.format == "csv":
        text = "hypothesis,target,passed,measured\n" + "".join(
            f"{c.name},{c.target},{'' if c.passed is None else c.passed},"
            f"{'' if c.measured is None else repr(c.measured)}\n"
            for c in report.checks
        )
    else:
        lines = [
            f"kernel {kernel.name}: mu2 = {kernel.second_moment:.10g}, "
            f"R(K) = {kernel.square_integral:.10g}, radius = {kernel.effective_support_radius:g}",
        ]
        for c in report.checks:
            status = "info" if c.passed is None else ("pass" if c.passed else "FAIL")
            measured = "" if c.measured is None else f" measured={c.measured:.6g}"
            lines.append(f"  {c.name} [{c.target}] {status}{measured}  {c.note}".rstrip())
        text = "\n".join(lines) + "\n"
    _emit(args, payload, text)
    return 0


COMMANDS = {
    "estimate": cmd_estimate,
    "simulate": cmd_simulate,
    "efficiency": cmd_efficiency,
    "kernel-info": cmd_kernel_info,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FgtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

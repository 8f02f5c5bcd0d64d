"""Command-line surface: generate, fit, sequential, coverage, reproduce.

Every command writes its primary CSV, renders a figure alongside where it
makes sense, emits tidy plot-data CSVs for external plotting, and records
a flat ``key=value`` manifest so any output can be regenerated.

Global flags: ``--seed`` (default 1729, documented so seeded analyses are
reproducible), ``--out`` (primary output path), ``--degrees`` (display
conversion only; stored data is always radians), ``--quiet``.  Relative
output paths resolve against ``$DROPANGLE_OUTDIR`` when that is set.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

import numpy as np

from . import __version__
from .competitors import ModelKind, competitor_cdf, competitor_pdf, fit_competitor
from .droplet import (
    Direction,
    fit_polynomial,
    generate_pseudo_data,
    read_angles_csv,
    reference_dataset,
    time_to_angle_model,
    write_series_csv,
)
from .errors import FitFailureError, NoInteriorMleError
from .gof import FitReport, compare_models, ks_test, write_fit_reports_csv
from .hcwe import HcweModel
from .plotting import (
    plot_fit_diagnostics,
    plot_model_comparison,
    plot_sequential,
    plot_series,
)
from .sequential import (
    DEFAULT_SEED,
    DEFAULT_WIDTH_GRID,
    StoppingConfig,
    monte_carlo_coverage,
    run_sequential_analysis,
    write_coverage_csv,
    write_sequential_csv,
)

ENV_OUTDIR = "DROPANGLE_OUTDIR"

_DEFAULT_OUT = {
    "generate": "pseudo_data.csv",
    "fit": "fit_report.csv",
    "sequential": "sequential_report.csv",
    "coverage": "coverage_report.csv",
}


def _resolve_out(out: str | None, default_name: str) -> str:
    path = out if out else default_name
    if not os.path.isabs(path):
        path = os.path.join(os.environ.get(ENV_OUTDIR, "."), path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    return path


def _stem(path: str) -> str:
    root, _ = os.path.splitext(path)
    return root


def _write_manifest(command: str, params: dict, seed: int, outputs: list) -> str:
    path = _stem(outputs[0]) + ".manifest.txt"
    with open(path, "w") as fh:
        fh.write(f"command={command}\n")
        fh.write(f"toolkit_version={__version__}\n")
        fh.write(f"seed={seed}\n")
        for key in sorted(params):
            fh.write(f"param.{key}={params[key]}\n")
        for i, out in enumerate(outputs):
            fh.write(f"output.{i}={os.path.abspath(out)}\n")
    return path


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


def _angle_display(args, radians: float) -> str:
    if args.degrees:
        return f"{math.degrees(radians):.4f} deg"
    return f"{radians:.6f} rad"


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def _cmd_generate(args) -> int:
    if args.coeffs == "refit":
        data = reference_dataset()
        model = fit_polynomial(data.times, data.angles, degree=3,
                               direction=Direction.TIME_TO_ANGLE)
    else:
        model = time_to_angle_model()
    series = generate_pseudo_data(model, args.t_start, args.t_end, args.step)
    out = _resolve_out(args.out, _DEFAULT_OUT["generate"])
    write_series_csv(series, out)
    fig_path = _stem(out) + ".png"
    plot_series(reference_dataset(), fig_path, fitted=(series.times, series.angles))
    outputs = [out, fig_path]
    manifest = _write_manifest(
        "generate",
        {
            "t_start": args.t_start, "t_end": args.t_end, "step": args.step,
            "coeffs": args.coeffs,
        },
        args.seed, outputs,
    )
    _say(args, f"wrote {series.n} observations to {out}")
    _say(args, f"angles span {_angle_display(args, float(series.angles.min()))} "
               f"to {_angle_display(args, float(series.angles.max()))}")
    _say(args, f"figure: {fig_path}\nmanifest: {manifest}")
    return 0


# ---------------------------------------------------------------------------
# fit
# ---------------------------------------------------------------------------

def _single_fit_report(model_id: str, angles: np.ndarray):
    """Fit one family; returns (FitReport, pdf callable, cdf callable)."""
    n = int(angles.size)
    if model_id == "hcwe":
        model = HcweModel.fit(angles)
        ll = model.log_likelihood(angles)
        d, p = ks_test(angles, model.cdf)
        report = FitReport("hcwe", (model.lam,), ll, 2.0 - 2.0 * ll, d, p, n)
        return report, model.pdf, model.cdf
    model = fit_competitor(ModelKind(model_id), angles)
    k = len(model.params)
    ll = float(np.sum(np.log(competitor_pdf(model, angles))))
    d, p = ks_test(angles, lambda x: competitor_cdf(model, x))
    report = FitReport(model_id, model.params, ll, 2.0 * k - 2.0 * ll, d, p, n)
    return report, (lambda x: competitor_pdf(model, x)), (lambda x: competitor_cdf(model, x))


def _fit_curves(reports, angles):
    """Evaluate fitted pdf/cdf for every non-failed report.

    Returns ``{model_id: (grid, pdf_values, cdf_values, cdf_callable)}``.
    """
    from .competitors import CompetitorModel

    hi = float(np.max(angles)) * 1.15
    curves = {}
    for r in reports:
        if r.failed:
            continue
        if r.model_id == "hcwe":
            model = HcweModel(r.params[0])
            pdf_fn, cdf_fn = model.pdf, model.cdf
            support = math.pi
        else:
            model = CompetitorModel(ModelKind(r.model_id), r.params)
            pdf_fn = lambda x, m=model: competitor_pdf(m, x)
            cdf_fn = lambda x, m=model: competitor_cdf(m, x)
            support = 2.0 * math.pi
        # keep the display grid inside the (half-open) support
        grid = np.linspace(0.0, min(hi, np.nextafter(support, 0.0)), 256)
        curves[r.model_id] = (grid, pdf_fn(grid), cdf_fn(grid), cdf_fn)
    return curves


def _write_plot_data(stem: str, angles: np.ndarray, curves) -> list:
    paths = []
    sorted_angles = np.sort(angles)
    n = sorted_angles.size
    ecdf = np.arange(1, n + 1) / n

    cdf_path = stem + "_cdf.csv"
    with open(cdf_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model_id", "angle_rad", "empirical_cdf", "fitted_cdf"])
        for model_id, (_, _, _, cdf_fn) in curves.items():
            fitted = np.asarray(cdf_fn(sorted_angles), dtype=float)
            for a, e, f in zip(sorted_angles, ecdf, fitted):
                writer.writerow([model_id, f"{a:.17g}", f"{e:.17g}", f"{f:.17g}"])
    paths.append(cdf_path)

    hist_path = stem + "_hist.csv"
    density, edges = np.histogram(angles, bins="auto", density=True)
    with open(hist_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_left", "bin_right", "density"])
        for left, right, dens in zip(edges[:-1], edges[1:], density):
            writer.writerow([f"{left:.17g}", f"{right:.17g}", f"{dens:.17g}"])
    paths.append(hist_path)

    density_path = stem + "_density.csv"
    with open(density_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model_id", "angle_rad", "density"])
        for model_id, (g, p, _, _) in curves.items():
            for a, dens in zip(g, p):
                writer.writerow([model_id, f"{a:.17g}", f"{dens:.17g}"])
    paths.append(density_path)

    circ_path = stem + "_circular.csv"
    with open(circ_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["angle_rad", "x", "y"])
        for a in angles:
            writer.writerow([f"{a:.17g}", f"{math.cos(a):.17g}", f"{math.sin(a):.17g}"])
    paths.append(circ_path)
    return paths


def _cmd_fit(args) -> int:
    if args.data:
        angles = read_angles_csv(args.data)
    else:
        angles = generate_pseudo_data().angles
    out = _resolve_out(args.out, _DEFAULT_OUT["fit"])
    stem = _stem(out)
    warned = False
    if args.model == "all":
        reports = compare_models(angles)
        for r in reports:
            if r.failed:
                print(f"warning: {r.model_id} fit failed: {r.error}", file=sys.stderr)
                warned = True
    else:
        try:
            report, _, _ = _single_fit_report(args.model, angles)
            reports = [report]
        except (FitFailureError, NoInteriorMleError) as exc:
            print(f"warning: {args.model} fit failed: {exc}", file=sys.stderr)
            reports = [FitReport(args.model, (), math.nan, math.nan,
                                 math.nan, math.nan, int(angles.size), str(exc))]
            warned = True
    write_fit_reports_csv(reports, out)
    outputs = [out]
    curves = _fit_curves(reports, angles)
    if curves:
        outputs.extend(_write_plot_data(stem, angles, curves))
        fig_path = stem + ".png"
        plot_fit_diagnostics(
            angles, {k: v[:3] for k, v in curves.items()}, fig_path
        )
        outputs.append(fig_path)
        if len(curves) > 1:
            cmp_path = stem + "_aic.png"
            plot_model_comparison(reports, cmp_path)
            outputs.append(cmp_path)
    manifest = _write_manifest(
        "fit", {"model": args.model, "data": args.data or "<default pseudo data>"},
        args.seed, outputs,
    )
    for r in reports:
        if r.failed:
            _say(args, f"{r.model_id}: FAILED ({r.error})")
        else:
            params = ", ".join(f"{p:.4f}" for p in r.params)
            _say(args, f"{r.model_id}: params=({params}) loglik={r.log_likelihood:.3f} "
                       f"aic={r.aic:.3f} ks={r.ks_statistic:.4f} p={r.ks_p_value:.4g}")
    best = next((r for r in reports if not r.failed), None)
    if best is not None and best.model_id == "hcwe":
        mu0 = math.atan(1.0 / best.params[0])
        _say(args, f"hcwe mean direction: {_angle_display(args, mu0)}")
    _say(args, f"report: {out}\nmanifest: {manifest}")
    if warned:
        _say(args, "one or more fits failed; see warnings above")
    return 0


# ---------------------------------------------------------------------------
# sequential
# ---------------------------------------------------------------------------

def _cmd_sequential(args) -> int:
    d_grid = [float(tok) for tok in args.d.split(",") if tok.strip()]
    if args.data:
        angles = read_angles_csv(args.data)
    else:
        angles = generate_pseudo_data().angles
    results = run_sequential_analysis(
        angles, d_grid, m=args.m, alpha=args.alpha,
        subsample_size=args.subsample, seed=args.seed,
    )
    out = _resolve_out(args.out, _DEFAULT_OUT["sequential"])
    write_sequential_csv(results, d_grid, out)
    fig_path = _stem(out) + ".png"
    plot_sequential(d_grid, results, fig_path)
    outputs = [out, fig_path]
    manifest = _write_manifest(
        "sequential",
        {"d": args.d, "m": args.m, "alpha": args.alpha,
         "subsample": args.subsample, "data": args.data or "<default pseudo data>"},
        args.seed, outputs,
    )
    for d, r in zip(d_grid, results):
        note = " (truncated)" if r.truncated else ""
        _say(args, f"d={d:g}: N={r.n_stop} lambda={r.lambda_hat:.4f} "
                   f"mu0=({_angle_display(args, r.ci_mu0[0])}, "
                   f"{_angle_display(args, r.ci_mu0[1])}){note}")
    _say(args, f"report: {out}\nmanifest: {manifest}")
    return 0


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------

def _cmd_coverage(args) -> int:
    config = StoppingConfig(m=args.m, alpha=args.alpha, d=args.d)
    report = monte_carlo_coverage(args.lambda_true, config, args.reps, seed=args.seed)
    out = _resolve_out(args.out, _DEFAULT_OUT["coverage"])
    write_coverage_csv(report, out)
    outputs = [out]
    manifest = _write_manifest(
        "coverage",
        {"lambda": args.lambda_true, "d": args.d, "m": args.m,
         "alpha": args.alpha, "reps": args.reps},
        args.seed, outputs,
    )
    _say(args, f"coverage={report.empirical_coverage:.4f} mean_N={report.mean_stop_time:.2f} "
               f"n*={report.optimal_n:.2f} efficiency={report.efficiency_ratio:.4f}")
    _say(args, f"report: {out}\nmanifest: {manifest}")
    return 0


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------

def _cmd_reproduce(args) -> int:
    table = args.table
    out = _resolve_out(args.out, f"table{table}.csv")
    stem = _stem(out)
    outputs = [out]
    if table == "1":
        data = reference_dataset()
        write_series_csv(data, out)
        fig_path = stem + ".png"
        plot_series(data, fig_path)
        outputs.append(fig_path)
        _say(args, f"wrote the embedded {data.n}-point reference series to {out}")
    elif table == "2":
        angles = generate_pseudo_data().angles
        reports = compare_models(angles)
        write_fit_reports_csv(reports, out)
        fig_path = stem + ".png"
        plot_model_comparison(reports, fig_path)
        outputs.append(fig_path)
        for r in reports:
            _say(args, f"{r.model_id}: loglik={r.log_likelihood:.2f} aic={r.aic:.2f}")
    else:
        angles = generate_pseudo_data().angles
        d_grid = list(DEFAULT_WIDTH_GRID)
        results = run_sequential_analysis(angles, d_grid, seed=args.seed)
        write_sequential_csv(results, d_grid, out)
        fig_path = stem + ".png"
        plot_sequential(d_grid, results, fig_path)
        outputs.append(fig_path)
        for d, r in zip(d_grid, results):
            _say(args, f"d={d:g}: N={r.n_stop} lambda_CI=({r.ci_lambda[0]:.2f}, "
                       f"{r.ci_lambda[1]:.2f})")
    manifest = _write_manifest("reproduce", {"table": table}, args.seed, outputs)
    _say(args, f"report: {out}\nmanifest: {manifest}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="base seed for all randomized steps (default %(default)s)")
    common.add_argument("--out", help="primary output path; relative paths resolve "
                                      f"against ${ENV_OUTDIR} when set")
    common.add_argument("--degrees", action="store_true",
                        help="display angles in degrees (stored data stays in radians)")
    common.add_argument("--quiet", action="store_true", help="suppress summary output")

    parser = argparse.ArgumentParser(
        prog="dropangle",
        description="Circular statistics and sequential fixed-width interval "
                    "estimation for droplet contact angles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common],
                       help="evaluate the reference cubic on a time grid")
    p.add_argument("--t-start", type=float, default=5.0)
    p.add_argument("--t-end", type=float, default=300.0)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--coeffs", choices=["reference", "refit"], default="reference",
                   help="use the built-in reference coefficients or refit "
                        "the cubic from the embedded dataset")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("fit", parents=[common],
                       help="fit circular models and report likelihood/AIC/KS")
    p.add_argument("--model", choices=["hcwe", "we", "twe", "wl", "vonmises", "all"],
                   default="all")
    p.add_argument("--data", help="CSV with an angle_rad column "
                                  "(default: the regenerated pseudo dataset)")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("sequential", parents=[common],
                       help="seeded subsample-and-sort sequential analysis")
    p.add_argument("--d", default=",".join(str(d) for d in DEFAULT_WIDTH_GRID),
                   help="comma-separated half-widths (default %(default)s)")
    p.add_argument("--m", type=int, default=5, help="pilot sample size")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--subsample", type=int, default=250)
    p.add_argument("--data", help="CSV with an angle_rad column "
                                  "(default: the regenerated pseudo dataset)")
    p.set_defaults(func=_cmd_sequential)

    p = sub.add_parser("coverage", parents=[common],
                       help="Monte Carlo coverage/efficiency of the stopping rule")
    p.add_argument("--lambda", dest="lambda_true", type=float, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=1000)
    p.set_defaults(func=_cmd_coverage)

    p = sub.add_parser("reproduce", parents=[common],
                       help="one-shot reproduction of the built-in analyses")
    p.add_argument("--table", choices=["1", "2", "3"], required=True,
                   help="1: embedded series; 2: model comparison; 3: sequential analysis")
    p.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Rendering helpers: every report path can emit a matplotlib figure.

All functions save to a file path and close the figure; nothing is shown
interactively (the Agg backend is forced so the CLI works headless).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_series(series, path, fitted=None) -> None:
    """Scatter a contact-angle series; optionally overlay a fitted curve.

    ``fitted`` is an optional ``(times, angles)`` pair sampled from a
    regression model.
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.0), layout="constrained")
    ax.scatter(series.times, series.angles, s=18, color="tab:blue", label="observed")
    if fitted is not None:
        ax.plot(fitted[0], fitted[1], color="tab:red", lw=1.5, label="fitted cubic")
        ax.legend(frameon=False)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("contact angle (rad)")
    ax.set_title("contact angle decay")
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_fit_diagnostics(angles, curves, path) -> None:
    """Histogram/density, ECDF/CDF and circular panels for fitted models.

    ``curves`` maps a model label to ``(grid, pdf_values, cdf_values)``.
    """
    angles = np.asarray(angles, dtype=float)
    fig, axes = plt.subplots(1, 3, figsize=(12.0, 3.8), layout="constrained")

    ax = axes[0]
    ax.hist(angles, bins="auto", density=True, color="0.8", edgecolor="0.5", label="data")
    for label, (grid, pdf, _) in curves.items():
        ax.plot(grid, pdf, lw=1.4, label=label)
    ax.set_xlabel("angle (rad)")
    ax.set_ylabel("density")
    ax.legend(frameon=False, fontsize=8)

    ax = axes[1]
    sorted_angles = np.sort(angles)
    ecdf = np.arange(1, angles.size + 1) / angles.size
    ax.step(sorted_angles, ecdf, where="post", color="0.3", lw=1.0, label="empirical")
    for label, (grid, _, cdf) in curves.items():
        ax.plot(grid, cdf, lw=1.4, label=label)
    ax.set_xlabel("angle (rad)")
    ax.set_ylabel("cumulative probability")
    ax.legend(frameon=False, fontsize=8)

    fig.delaxes(axes[2])
    ax = fig.add_subplot(1, 3, 3, projection="polar")
    ax.scatter(angles, np.ones_like(angles), s=10, alpha=0.35, color="tab:blue")
    ax.set_yticks([])
    ax.set_thetamin(0)
    ax.set_thetamax(180)
    ax.set_title("circular view", fontsize=9)

    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_model_comparison(reports, path) -> None:
    """Horizontal AIC bars for the fitted models (failed fits skipped)."""
    rows = [r for r in reports if not r.failed]
    fig, ax = plt.subplots(figsize=(6.0, 3.5), layout="constrained")
    labels = [r.model_id for r in rows][::-1]
    aics = [r.aic for r in rows][::-1]
    ax.barh(labels, aics, color="tab:blue")
    ax.set_xlabel("AIC (lower is better)")
    ax.set_title("model comparison")
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sequential(d_grid, results, path) -> None:
    """Stopping times and chained intervals across the half-width grid."""
    d = np.asarray(list(d_grid), dtype=float)
    fig, axes = plt.subplots(1, 3, figsize=(12.0, 3.6), layout="constrained")

    ax = axes[0]
    ax.plot(d, [r.n_stop for r in results], marker="o", color="tab:blue")
    ax.set_xlabel("half-width d")
    ax.set_ylabel("stopping time N")

    ax = axes[1]
    centers = np.array([r.lambda_hat for r in results])
    ax.errorbar(d, centers, yerr=d, fmt="o", capsize=3, color="tab:red")
    ax.set_xlabel("half-width d")
    ax.set_ylabel("rate interval")

    ax = axes[2]
    have = [(di, r.ci_drying_time) for di, r in zip(d, results) if r.ci_drying_time]
    if have:
        xs = [di for di, _ in have]
        los = [c[0] for _, c in have]
        his = [c[1] for _, c in have]
        mid = [(lo + hi) / 2.0 for lo, hi in zip(los, his)]
        err = [(hi - lo) / 2.0 for lo, hi in zip(los, his)]
        ax.errorbar(xs, mid, yerr=err, fmt="o", capsize=3, color="tab:green")
    ax.set_xlabel("half-width d")
    ax.set_ylabel("drying-time interval (s)")

    fig.savefig(path, dpi=150)
    plt.close(fig)

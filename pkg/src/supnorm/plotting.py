"""Figure rendering for CLI reports (headless matplotlib, files only)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_scan_heatmap(result, path: str) -> str:
    """Heatmap of log10 S_k over the scan grid, argmax marked."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    vals = np.where(np.isfinite(result.values), result.values, np.nan)
    with np.errstate(invalid="ignore", divide="ignore"):
        logv = np.log10(vals)
    mesh = ax.pcolormesh(result.xs, result.ys, logv.T, shading="nearest",
                         cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=r"$\log_{10} S_k(z)$")
    ax.plot([result.argmax.x], [result.argmax.y], "r*", markersize=12,
            label=f"argmax ({result.argmax.x:.3f}, {result.argmax.y:.3f})")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_yscale("log")
    ax.set_title(f"Bergman diagonal, weight {result.weight}, "
                 f"region {result.region}")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_growth_fit(fit, path: str, label: str = "") -> str:
    """Log-log scatter of (k, sup) with the fitted power law."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ks = np.array([k for k, _ in fit.points])
    vs = np.array([v for _, v in fit.points])
    ax.loglog(ks, vs, "o", label="measured sup")
    kk = np.geomspace(ks.min(), ks.max(), 100)
    ax.loglog(kk, np.exp(fit.intercept) * kk ** fit.slope, "-",
              label=f"fit slope {fit.slope:.3f}")
    ax.set_xlabel("k")
    ax.set_ylabel("sup $S_k$")
    if label:
        ax.set_title(label)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_heat_curves(rhos, curves: dict, path: str) -> str:
    """log K_k(t; rho) against rho for one or more (k, t) parameter pairs."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for label, logs in curves.items():
        ax.plot(rhos, np.asarray(logs) / math.log(10.0), label=label)
    ax.set_xlabel(r"$\rho$")
    ax.set_ylabel(r"$\log_{10} K_k(t;\rho)$")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path

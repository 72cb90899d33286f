"""Figure rendering for CLI reports (headless; writes image files only)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .counting import ChainedEstimate  # noqa: E402
from .qcore import DensityMatrix  # noqa: E402
from .qsim import SweepRow, predicted_delta  # noqa: E402

__all__ = [
    "plot_delta_sweep",
    "plot_group_probabilities",
    "plot_density_matrix",
]

_BASIS_TICKS = ("HH", "HV", "VH", "VV")


def plot_delta_sweep(rows: Sequence[SweepRow], path: str | Path,
                     visibility: float = 1.0) -> Path:
    """Simulated delta versus N against the smooth predicted curve."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    n_values = [row.n_bases for row in rows]
    grid = np.linspace(min(n_values), max(n_values), 200)
    ax.plot(grid, [predicted_delta_smooth(n, visibility) for n in grid],
            color="tab:blue", label=f"predicted (V={visibility:g})")
    ax.errorbar(
        n_values,
        [row.simulated for row in rows],
        yerr=[row.sigma for row in rows],
        fmt="o", color="tab:red", capsize=3, label="simulated",
    )
    ax.set_xlabel("number of bases N")
    ax.set_ylabel(r"$\delta_N$")
    ax.set_xticks(sorted(set(n_values)))
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def predicted_delta_smooth(n: float, visibility: float) -> float:
    """The predicted curve evaluated at real-valued N for plotting."""
    return n / 2.0 * (1.0 - visibility * np.cos(np.pi / (2.0 * n)))


def plot_group_probabilities(estimate: ChainedEstimate,
                             path: str | Path) -> Path:
    """Per-group correlated probabilities and biases as paired bars."""
    path = Path(path)
    fig, (ax_p, ax_nu) = plt.subplots(2, 1, figsize=(7, 5), sharex=True)
    labels = [f"({g.a},{g.b})" for g in estimate.per_group]
    positions = np.arange(len(labels))
    ax_p.bar(positions, [g.probability for g in estimate.per_group],
             color="tab:blue")
    ax_p.set_ylabel("P(correlated)")
    ax_p.set_ylim(0.0, 1.0)
    ax_nu.bar(positions, [g.bias for g in estimate.per_group],
              color="tab:orange")
    ax_nu.set_ylabel("bias")
    ax_nu.set_xticks(positions)
    ax_nu.set_xticklabels(labels, rotation=45, ha="right")
    ax_nu.set_xlabel("group (a, b)")
    fig.suptitle(
        rf"$I_{{{estimate.n_bases}}}$ = {estimate.i_n:.4f},  "
        rf"$\nu$ = {estimate.nu_n:.4f},  $\delta$ = {estimate.delta_n:.4f}"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_density_matrix(rho: DensityMatrix, path: str | Path) -> Path:
    """Real and imaginary parts of a two-qubit state, side by side."""
    path = Path(path)
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    parts = (("Re", rho.entries.real), ("Im", rho.entries.imag))
    for ax, (label, matrix) in zip(axes, parts):
        image = ax.imshow(matrix, vmin=-0.55, vmax=0.55, cmap="RdBu_r")
        ax.set_title(label)
        ax.set_xticks(range(4))
        ax.set_yticks(range(4))
        ax.set_xticklabels(_BASIS_TICKS)
        ax.set_yticklabels(_BASIS_TICKS)
        fig.colorbar(image, ax=ax, fraction=0.046)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path

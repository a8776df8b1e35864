"""The four figure kinds rendered from solver CSV artifacts."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .schemas import load_condition, load_convergence, load_grid  # noqa: E402


def plot_convergence(csv_path: str, out_path: str,
                     title: str = "Convergence") -> str:
    """Semilog-y scatter of eps vs system size with a reference decay line."""
    data = load_convergence(csv_path)
    size, eps = data[:, 2], data[:, 3]

    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    ax.semilogy(size, eps, "o", color="tab:blue", label=r"$\varepsilon$")
    if len(size) > 1 and eps[-1] != eps[0]:
        # exponential reference through the end points
        rate = np.log(eps[-1] / eps[0]) / (size[-1] - size[0])
        ax.semilogy(size, eps[0] * np.exp(rate * (size - size[0])),
                    "--", color="gray", linewidth=1, label="reference decay")
    ax.set_xlabel("system size $N$")
    ax.set_ylabel(r"relative error $\varepsilon$")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_condition(csv_path: str, out_path: str,
                   title: str = "Conditioning vs corner rounding") -> str:
    """Log-log plot of both condition-number series against h."""
    data = load_condition(csv_path)
    h = data[:, 0]

    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    ax.loglog(h, data[:, 1], "o-", color="tab:blue",
              label=r"$\kappa$ (completed DLP)")
    ax.loglog(h, data[:, 2], "s-", color="tab:red",
              label=r"$\kappa$ (direct)")
    ax.set_xlabel("corner rounding $h$")
    ax.set_ylabel(r"condition number $\kappa$")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_heatmap(csv_path: str, out_path: str, column: str = "w",
                 title: str | None = None, log_scale: bool = False,
                 mark_loads: bool = True) -> str:
    """Masked pcolormesh of one grid column with a colorbar.

    Exterior cells (inside=0) are blank.  ``column`` is one of
    w / w_ref / abs_err; ``log_scale`` colors by log10 of the values
    (useful for error heatmaps).  Point-load positions in the sidecar
    are marked unless disabled.
    """
    grid = load_grid(csv_path)
    values = getattr(grid, column)
    if values is None:
        raise ValueError(f"{csv_path} carries no '{column}' column")
    masked = np.ma.masked_invalid(
        np.log10(np.where(values > 0, values, np.nan)) if log_scale
        else values)

    fig, ax = plt.subplots(figsize=(6.2, 3.4))
    mesh = ax.pcolormesh(grid.x, grid.y, masked, shading="nearest",
                         cmap="viridis")
    label = f"$\\log_{{10}}$ {column}" if log_scale else column
    fig.colorbar(mesh, ax=ax, label=label)
    loads = grid.extras.get("loads")
    if mark_loads and loads:
        loads = np.asarray(loads, dtype=float)
        ax.plot(loads[:, 0], loads[:, 1], "r+", markersize=6)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(title if title is not None else column)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path

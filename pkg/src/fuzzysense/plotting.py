"""Figure rendering for the report paths.

Figures are written straight to files (Agg backend); the delimited output
remains the machine-readable contract.
"""

from __future__ import annotations

from pathlib import Path


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def save_roc_figure(curves: dict, path) -> Path:
    """Plot one or more ROC curves; ``curves`` maps label -> list[RocPoint]."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    for label, points in curves.items():
        pts = sorted(points, key=lambda p: (p.empirical_pf, p.empirical_pd))
        ax.plot(
            [p.empirical_pf for p in pts],
            [p.empirical_pd for p in pts],
            marker="o",
            markersize=3,
            linewidth=1.2,
            label=label,
        )
    ax.plot([0, 1], [0, 1], linestyle=":", color="grey", linewidth=0.8)
    ax.set_xlabel("probability of false alarm")
    ax.set_ylabel("probability of detection")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1.02)
    ax.grid(True, linestyle="--", linewidth=0.4)
    ax.legend(loc="lower right")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_surface_figure(xs, ys, values, path, fixed_label: str = "") -> Path:
    """Heatmap of the fuzzy decision surface over two inputs."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    mesh = ax.pcolormesh(xs, ys, values, shading="auto", vmin=0.0, vmax=1.0, cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="fusion output")
    ax.set_xlabel("input a")
    ax.set_ylabel("input b")
    if fixed_label:
        ax.set_title(fixed_label)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_validation_figure(rows, path) -> Path:
    """Theory curve versus measured detection probabilities."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    targets = [r.target_pf for r in rows]
    ax.plot(targets, [r.theoretical_pd for r in rows], "-", label="closed form")
    ax.plot(targets, [r.empirical_pd for r in rows], "s", label="simulated")
    ax.set_xlabel("target probability of false alarm")
    ax.set_ylabel("probability of detection")
    ax.grid(True, linestyle="--", linewidth=0.4)
    ax.legend(loc="lower right")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path

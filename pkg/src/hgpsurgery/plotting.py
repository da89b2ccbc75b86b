"""Figures for run reports: check-matrix spy plots and meta-check lattices.

Uses the non-interactive Agg backend so figures render without a display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .cone import DeformedCssCode  # noqa: E402


def _separators(ax, split, axis: str):
    anc, base = split
    if anc and base:
        if axis == "x":
            ax.axvline(anc - 0.5, color="tab:red", lw=0.8)
        else:
            ax.axhline(anc - 0.5, color="tab:red", lw=0.8)


def plot_css(css: DeformedCssCode, title: str = ""):
    """Spy plots of ``H_X``, ``H_Z`` and ``M_Z`` with ancilla/base separators.

    Returns:
        The matplotlib figure.
    """
    mats = [("H_X", css.hx, "x_checks", "qubits"), ("H_Z", css.hz, "z_checks", "qubits"),
            ("M_Z", css.meta, "meta_checks", "z_checks")]
    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    for ax, (name, m, row_role, col_role) in zip(axes, mats):
        if m.rows and m.cols:
            ax.spy(m.to_dense(), markersize=max(1.0, 120.0 / max(m.rows, m.cols)), color="k")
            _separators(ax, css.split(col_role), "x")
            _separators(ax, css.split(row_role), "y")
        else:
            ax.text(0.5, 0.5, "empty", ha="center", va="center", transform=ax.transAxes)
        ax.set_title(f"{name} ({m.rows}x{m.cols})", fontsize=10)
        ax.tick_params(labelsize=7)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return fig


def plot_meta_lattice(meta, title: str = ""):
    """Draw a meta-check graph on its ``(vertex, bit)`` grid.

    Straight edges are drawn between neighbours; wrap-around edges are drawn
    as short dashed stubs at both ends so periodic directions stand out.
    """
    nv, nd = meta.shape
    fig, ax = plt.subplots(figsize=(1.2 * nd + 2, 1.2 * nv + 2))
    colors = {"D": "tab:blue", "G": "tab:orange"}
    for u, w, data in meta.graph.edges(data=True):
        (v1, k1), (v2, k2) = u, w
        color = colors.get(data.get("direction"), "k")
        if abs(v1 - v2) + abs(k1 - k2) == 1:
            ax.plot([k1, k2], [v1, v2], color=color, lw=1.5)
        else:
            for (va, ka), (vb, kb) in ((u, w), (w, u)):
                dv = 0.0 if va == vb else (0.35 if vb < va else -0.35)
                dk = 0.0 if ka == kb else (0.35 if kb < ka else -0.35)
                ax.plot([ka, ka + dk], [va, va + dv], color=color, lw=1.5, ls="--")
    nodes = list(meta.graph.nodes)
    ax.scatter([k for _, k in nodes], [v for v, _ in nodes], s=60, color="k", zorder=3)
    ax.set_xlabel("bit of D")
    ax.set_ylabel("gadget vertex")
    ax.set_xticks(range(nd))
    ax.set_yticks(range(nv))
    ax.set_aspect("equal")
    ax.invert_yaxis()
    ax.set_title(title or f"meta-check graph, min undetected flip {meta.min_undetected_flip}", fontsize=10)
    fig.tight_layout()
    return fig


def render_report_figures(report, out_dir) -> list[Path]:
    """Save one PNG per CSS code and per meta-check graph in a report."""
    out = Path(out_dir)
    paths = []
    for name, css in report.codes.items():
        fig = plot_css(css, name)
        path = out / f"{name}_matrices.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        paths.append(path)
    for name, meta in report.meta_graphs.items():
        fig = plot_meta_lattice(meta)
        path = out / f"{name}_metacheck.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        paths.append(path)
    return paths

"""Matplotlib figures for the CLI reports (written next to the JSON/CSV files)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

plt.rcParams.update({
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
})

CAP = 3.0


def _rect_polygon(R):
    cap = lambda z: max(-CAP, min(CAP, float(z)))  # noqa: E731
    u0, u1, v0, v1 = cap(R.u0), cap(R.u1), cap(R.v0), cap(R.v1)
    corners = [(u0, v0), (u1, v0), (u1, v1), (u0, v1)]
    return [((v - u) / 2, (u + v) / 2) for u, v in corners]


def plot_catalog(catalog, path, t_range=(-1.2, 1.2)):
    ids = catalog.ids
    n = len(ids)
    cols = min(4, n)
    rows = math.ceil(n / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(2.2 * cols, 2.4 * rows), squeeze=False)
    width = 1.0  # region bounds are in units of the strip width
    for ax, rid in zip(axes.flat, ids):
        region = catalog[rid]
        color = "tab:blue" if catalog.interior[rid] else "tab:orange"
        for R in region.rects:
            ax.add_patch(Polygon(_rect_polygon(R), closed=True, fc=color, ec="k", lw=0.5, alpha=0.6))
        ax.axvline(0, color="k", lw=1)
        if catalog.spacetime.band is not None:
            ax.axvline(width, color="k", lw=1)
        ax.set_xlim(0, width)
        ax.set_ylim(*t_range)
        ax.set_title(rid, fontsize=8)
        ax.set_xticks([0, width])
        ax.set_yticks([])
    for ax in list(axes.flat)[n:]:
        ax.axis("off")
    fig.suptitle(f"catalog {catalog.name}: interior (blue), boundary (orange)")
    fig.savefig(path)
    plt.close(fig)


def plot_support_masks(grids, phi_disks, width, path):
    """Support of G(phi) next to the mode-function support, with the light cones."""
    t = grids["t"]
    fig, axes = plt.subplots(1, 3, figsize=(10, 3.6), sharey=True)
    extent = [0, width, t[0], t[-1]]
    vmax = float(np.max(np.abs(grids["green"]))) or 1.0
    axes[0].imshow(grids["green"], origin="lower", extent=extent, aspect="auto", cmap="RdBu_r", vmin=-vmax, vmax=vmax)
    axes[0].set_title("G(phi)")
    axes[1].imshow(grids["green_mask"], origin="lower", extent=extent, aspect="auto", cmap="Greys", vmin=0, vmax=1)
    axes[1].set_title("supp G(phi)")
    axes[2].imshow(grids["mode_mask"], origin="lower", extent=extent, aspect="auto", cmap="Greys", vmin=0, vmax=1)
    axes[2].set_title("supp sin(x) cos(t)")
    for ax in axes[:2]:
        for t0, x0, r in phi_disks:
            R = r * math.sqrt(2)
            for s in (-1, 1):
                xs = np.array([0.0, x0, width])
                ax.plot(xs, t0 + s * (np.abs(xs - x0) - R), color="tab:red", lw=0.6, ls="--")
            ax.add_patch(plt.Circle((x0, t0), r, fill=False, color="tab:green", lw=0.8))
        ax.set_ylim(t[0], t[-1])
    for ax in axes:
        ax.set_xlabel("x")
    axes[0].set_ylabel("t")
    fig.savefig(path)
    plt.close(fig)


def plot_tau_convergence(radii, values, path):
    fig, ax = plt.subplots(figsize=(3.6, 2.8))
    gap = np.abs(np.asarray(values) - 0.5)
    ax.semilogy(radii, np.maximum(gap, 1e-16), "o-")
    ax.set_xlabel("bump radius")
    ax.set_ylabel("|tau - 1/2|")
    ax.invert_xaxis()
    fig.savefig(path)
    plt.close(fig)


def plot_residuals(report, path):
    names = [c.name for c in report.checks if isinstance(c.witness, float) and isinstance(c.tolerance, float)]
    ratios = [c.witness / c.tolerance for c in report.checks if isinstance(c.witness, float) and isinstance(c.tolerance, float)]
    fig, ax = plt.subplots(figsize=(6, 2.8))
    ax.semilogy(np.maximum(ratios, 1e-18), ".", ms=4)
    ax.axhline(1.0, color="tab:red", lw=0.8)
    ax.set_xlabel(f"check ({len(names)})")
    ax.set_ylabel("residual / tolerance")
    fig.savefig(path)
    plt.close(fig)


def plot_dims(rows, path, title=""):
    """Bar chart of per-object dimensions from a characterization table."""
    ids = list(rows)
    dims = [rows[v]["dim"] for v in ids]
    gen = [rows[v]["generated_dim"] for v in ids]
    xs = np.arange(len(ids))
    fig, ax = plt.subplots(figsize=(max(3, 0.7 * len(ids)), 2.8))
    ax.bar(xs - 0.2, dims, 0.4, label="dim B(V)")
    ax.bar(xs + 0.2, gen, 0.4, label="generated by interior")
    ax.set_xticks(xs)
    ax.set_xticklabels(ids, rotation=45, ha="right")
    ax.legend(frameon=False)
    ax.set_title(title)
    fig.savefig(path)
    plt.close(fig)

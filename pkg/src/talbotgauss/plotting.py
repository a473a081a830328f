"""Figures written straight to files (Agg backend, no display needed)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_carpet(raster, path, rational_times=(), title="Talbot carpet"):
    """Intensity image with x across and t down, rational times marked."""
    fig, ax = plt.subplots(figsize=(6, 5))
    extent = (raster.x_axis[0], raster.x_axis[-1], raster.t_axis[-1], raster.t_axis[0])
    im = ax.imshow(raster.intensity, extent=extent, aspect="auto", cmap="inferno")
    for num, den, t in rational_times:
        ax.axhline(t, color="cyan", lw=0.5, alpha=0.6)
        ax.text(extent[1], t, f" {num}/{den}", color="cyan", fontsize=7, va="center")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.set_title(title)
    fig.colorbar(im, ax=ax, label="|u|^2")
    _save(fig, path)


def plot_field(t_axis, x_axis, field, path, title="evolved field"):
    """|u| and arg u over the (t, x) grid."""
    field = np.atleast_2d(field)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    extent = (x_axis[0], x_axis[-1], t_axis[-1], t_axis[0])
    if field.shape[0] == 1:
        axes[0].plot(x_axis, np.abs(field[0]))
        axes[0].set_ylabel("|u|")
        axes[1].plot(x_axis, np.angle(field[0]))
        axes[1].set_ylabel("arg u")
        for ax in axes:
            ax.set_xlabel("x")
    else:
        for ax, data, label, cmap in ((axes[0], np.abs(field), "|u|", "viridis"),
                                      (axes[1], np.angle(field), "arg u", "twilight")):
            im = ax.imshow(data, extent=extent, aspect="auto", cmap=cmap)
            ax.set_xlabel("x")
            ax.set_ylabel("t")
            fig.colorbar(im, ax=ax, label=label)
    fig.suptitle(title)
    _save(fig, path)


def plot_gauss_values(rows, path, title="Gauss sums"):
    """Values of G(-p, kappa, q) in the complex plane, one marker per kappa."""
    fig, ax = plt.subplots(figsize=(5, 5))
    re = [r["re"] for r in rows]
    im = [r["im"] for r in rows]
    ax.scatter(re, im, zorder=3)
    for r in rows:
        ax.annotate(str(r["kappa"]), (r["re"], r["im"]), textcoords="offset points",
                    xytext=(4, 4), fontsize=8)
    if rows:
        radius = max(max(r["modulus"] for r in rows), 1e-12)
        circle = plt.Circle((0, 0), radius, fill=False, ls="--", color="grey")
        ax.add_patch(circle)
        lim = 1.2 * radius
        ax.set_xlim(-lim, lim)
        ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.axhline(0, color="k", lw=0.5)
    ax.axvline(0, color="k", lw=0.5)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title)
    _save(fig, path)


def plot_convergence(ns, errors, path, xlabel="N", title="convergence", labels=None):
    """Log-log error curves; ``errors`` is one sequence or a list of them."""
    errors = np.atleast_2d(np.asarray(errors, dtype=float))
    fig, ax = plt.subplots(figsize=(5, 4))
    for i, err in enumerate(errors):
        label = labels[i] if labels else None
        ax.loglog(ns, np.maximum(err, 1e-300), "o-", label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("error")
    ax.set_title(title)
    if labels:
        ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    _save(fig, path)

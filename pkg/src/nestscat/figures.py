"""Figure rendering for the CLI report paths.

Each command that writes delimited output renders one PNG next to it
(suppressible with --no-plot).  Rendering is kept separate from the
numerics so library users never pull in matplotlib.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_compare", "render_field_line", "render_field_plane",
           "render_spectrum", "render_sweep"]


def render_spectrum(asymptotics, roots, path) -> None:
    """Asymptotic vs exact resonances in the complex plane."""
    asymptotics = np.asarray(asymptotics)
    roots = np.asarray(roots)
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(asymptotics.real, asymptotics.imag, "o", mfc="none", ms=9,
            color="tab:blue", label="capacitance asymptotics")
    ax.plot(roots.real, roots.imag, "x", ms=6, color="tab:red",
            label="determinant roots")
    ax.set_xlabel(r"Re $\omega$")
    ax.set_ylabel(r"Im $\omega$")
    ax.legend(loc="best", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep(omegas, norms, markers, path) -> None:
    """Total L2 norm against the incident frequency, resonances marked."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(omegas, norms, "-", lw=1.0, color="tab:blue")
    for i, w in enumerate(markers):
        ax.axvline(w, color="tab:red", lw=0.8, ls="--", alpha=0.7,
                   label="Re $\\omega_i^+$" if i == 0 else None)
    ax.set_xlabel(r"$\omega_{in}$")
    ax.set_ylabel(r"$\|u\|_{L^2(D)}$")
    ax.set_yscale("log")
    if len(markers):
        ax.legend(loc="best", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_field_plane(x1, x2, re_u, radii, path) -> None:
    """Re u on the incidence plane with the shell boundaries overlaid."""
    fig, ax = plt.subplots(figsize=(5.6, 4.6))
    lim = max(abs(np.min(re_u)), abs(np.max(re_u)))
    mesh = ax.pcolormesh(x1, x2, re_u, shading="auto", cmap="RdBu_r",
                         vmin=-lim, vmax=lim)
    theta = np.linspace(0.0, 2.0 * np.pi, 256)
    for r in radii:
        ax.plot(r * np.cos(theta), r * np.sin(theta), "k-", lw=0.5)
    ax.set_aspect("equal")
    ax.set_xlabel(r"$x_1$")
    ax.set_ylabel(r"$x_2$")
    fig.colorbar(mesh, ax=ax, label=r"Re $u$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_field_line(x1, re_u, radii, path) -> None:
    """Re u along the incidence axis with the shell boundaries marked."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(x1, re_u, "-", lw=1.0, color="tab:blue")
    for r in radii:
        for s in (-1.0, 1.0):
            ax.axvline(s * r, color="k", lw=0.5, alpha=0.5)
    ax.set_xlabel(r"$x_1$")
    ax.set_ylabel(r"Re $u$")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_compare(asym, swe_roots, dtn_roots, path) -> None:
    """Three-way root comparison in the complex plane."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    asym = np.asarray(asym)
    swe_roots = np.asarray(swe_roots)
    dtn_roots = np.asarray(dtn_roots)
    ax.plot(asym.real, asym.imag, "o", mfc="none", ms=10,
            color="tab:blue", label="capacitance")
    ax.plot(swe_roots.real, swe_roots.imag, "x", ms=6, color="tab:red",
            label="wave expansion")
    ax.plot(dtn_roots.real, dtn_roots.imag, "+", ms=8, color="tab:green",
            label="DtN")
    ax.set_xlabel(r"Re $\omega$")
    ax.set_ylabel(r"Im $\omega$")
    ax.legend(loc="best", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

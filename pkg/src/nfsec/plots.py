"""
Figure rendering for sweep and spectrum outputs.

Figures are written next to the CSV they illustrate, using the
non-interactive Agg backend.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

LABELS = {
    "proposed": "Proposed",
    "signal_only": "Signal focusing only",
    "nullspace_an": "Null-space AN",
    "an_at_eve": "AN focused at eavesdropper",
    "oracle": "MRT grid oracle",
}
MARKERS = {"proposed": "o", "signal_only": "s", "nullspace_an": "^", "an_at_eve": "v", "oracle": ""}
AXIS_LABELS = {"alpha": r"Power allocation ratio $\alpha$", "r_E": r"Eavesdropper range $r_E$ (m)"}

rc = {
    "font.size": 11,
    "axes.labelsize": 11,
    "legend.fontsize": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
}


def figure_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".png")


def plot_sweep(result, path) -> Path:
    path = Path(path)
    with plt.rc_context(rc):
        fig, ax = plt.subplots(figsize=(6, 4))
        for scheme in result.schemes:
            name = scheme.value
            ax.plot(result.axis_values, result.column(scheme), label=LABELS.get(name, name),
                    marker=MARKERS.get(name, ""), markevery=max(1, len(result.axis_values) // 12),
                    linestyle="--" if name == "oracle" else "-")
        star = result.metadata.get("alpha_star_proposed")
        if result.axis_name == "alpha" and star is not None:
            ax.axvline(star, color="k", linewidth=0.8, linestyle=":", label=r"closed-form $\alpha^*$")
        ax.set_xlabel(AXIS_LABELS.get(result.axis_name, result.axis_name))
        ax.set_ylabel(r"Secrecy rate $R_S$ (bit/s/Hz)")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_spectrum(spectrum, path) -> Path:
    path = Path(path)
    design = spectrum.design
    with plt.rc_context(rc):
        fig, ax = plt.subplots(figsize=(6, 4))
        mesh = ax.pcolormesh(spectrum.radii, spectrum.angles, spectrum.values,
                             shading="auto", cmap="viridis", vmin=0.0, vmax=1.0)
        fig.colorbar(mesh, ax=ax, label="Normalised power")
        focus = design.qs if spectrum.which == "signal" else design.qa
        if focus is not None:
            ax.plot([focus.radius], [focus.angle], marker="x", color="w", markersize=8)
        ax.set_xlabel("Range (m)")
        ax.set_ylabel("Angle (rad)")
        ax.set_title("Signal beam" if spectrum.which == "signal" else "AN beam")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path

"""Line charts of belief and polarization time series."""
from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# SVG user units are points (1/72 in): 800x500 viewport
FIGSIZE = (800 / 72, 500 / 72)

RC = {
    "svg.hashsalt": "beliefpolar",
    "svg.fonttype": "path",
    "axes.linewidth": 0.8,
    "font.size": 11,
    "lines.linewidth": 1.0,
}


def _render(fig) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()


def beliefs_figure(beliefs: np.ndarray, title: str = "") -> str:
    """SVG text with one polyline per agent."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=FIGSIZE)
        t = np.arange(beliefs.shape[0])
        colors = plt.cm.viridis(np.linspace(0, 1, max(beliefs.shape[1], 2)))
        for i in range(beliefs.shape[1]):
            ax.plot(t, beliefs[:, i], color=colors[i])
        ax.set_xlabel("time step")
        ax.set_ylabel("belief")
        ax.set_ylim(-0.02, 1.02)
        ax.set_xlim(0, max(t[-1], 1))
        if title:
            ax.set_title(title)
        return _render(fig)


def polarization_figure(rho: np.ndarray, title: str = "") -> str:
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=FIGSIZE)
        t = np.arange(len(rho))
        ax.plot(t, rho, color="black")
        ax.set_xlabel("time step")
        ax.set_ylabel("Esteban-Ray polarization")
        ax.set_xlim(0, max(len(rho) - 1, 1))
        ax.set_ylim(0, max(float(np.max(rho)) * 1.05, 1.0))
        if title:
            ax.set_title(title)
        return _render(fig)

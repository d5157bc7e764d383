"""Matplotlib figures written next to the CSV/JSON outputs.

Figures are for quick inspection. SVG output is made byte-stable by fixing
the hash salt and dropping the creation date.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_RC = {"svg.hashsalt": "biaspolar", "font.size": 9}
_META = {"Date": None}


def _save(fig, path):
    fig.savefig(path, metadata=_META if str(path).endswith(".svg") else None)
    plt.close(fig)


def plot_trace(trace, path, max_agents: int = 200):
    """Beliefs (top) and polarization (bottom) against time."""
    with plt.rc_context(_RC):
        fig, (ax_b, ax_p) = plt.subplots(2, 1, sharex=True, figsize=(6, 5))
        n = trace.configs.shape[1]
        stride = max(1, n // max_agents)
        ax_b.plot(trace.steps, trace.configs[:, ::stride], linewidth=0.6)
        for edge in trace.discretization.interior:
            ax_b.axhline(edge, color="0.8", linewidth=0.5, linestyle="--")
        ax_b.set_ylim(-0.02, 1.02)
        ax_b.set_ylabel("belief")
        ax_p.plot(trace.steps, trace.polarization, color="k")
        ax_p.set_ylabel("polarization")
        ax_p.set_xlabel("t")
        ax_b.set_title(f"{trace.graph_name}, {trace.rule}")
        fig.tight_layout()
        _save(fig, path)


def plot_batch_grid(series, graph_kinds, belief_kinds, path):
    """Polarization curves, one row per graph kind and one column per belief kind.

    ``series`` maps ``(graph_kind, belief_kind)`` to ``(steps, rho)``.
    """
    rows, cols = len(graph_kinds), len(belief_kinds)
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(rows, cols, figsize=(2.4 * cols, 1.9 * rows), squeeze=False, sharey=True)
        for r, g in enumerate(graph_kinds):
            for c, b in enumerate(belief_kinds):
                ax = axes[r][c]
                curve = series.get((g, b))
                if curve is not None:
                    ax.plot(*curve, color="k", linewidth=0.8)
                if r == 0:
                    ax.set_title(b if isinstance(b, str) else "explicit")
                if c == 0:
                    ax.set_ylabel(g)
        fig.tight_layout()
        _save(fig, path)

"""Matplotlib rendering of figure datasets to PNG files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_figure"]

_AXIS_LABELS = {
    "fig1": "preset relay power $P_r$ (dBm)",
    "fig2": "preset relay power $P_r$ (dBm)",
    "fig3": r"relay noise power $\sigma^2_{n_r}$ (dBm)",
    "fig4": r"destination noise power $\sigma^2_{n_d}$ (dBm)",
    "fig6": r"threshold SNR $\gamma_o$ (dB)",
}

_TITLES = {
    "fig1": "AF relaying: throughput vs preset relay power",
    "fig2": "DF relaying: throughput vs preset relay power",
    "fig3": "optimal throughput vs relay noise power",
    "fig4": "optimal throughput vs destination noise power",
    "fig6": "optimal throughput vs threshold SNR",
}

# noise sweeps span several decades of tau
_LOG_Y = {"fig3", "fig4"}

_STYLE = {
    "af_cont": ("tab:blue", "o"),
    "af_disc": ("tab:orange", "s"),
    "df_cont": ("tab:green", "^"),
    "df_disc": ("tab:red", "v"),
    "baseline": ("tab:gray", "x"),
}


def render_figure(rows: list[dict], fig_id: str, out_png: str) -> None:
    """Draw analytic curves as lines and simulated points as markers."""
    series: dict[tuple[str, str], tuple[list, list]] = {}
    for r in rows:
        key = (r["protocol"], r["mode"])
        xs, ys = series.setdefault(key, ([], []))
        xs.append(r["axis"])
        ys.append(r["tau"])

    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    for (protocol, mode), (xs, ys) in sorted(series.items()):
        color, marker = _STYLE.get(protocol, ("k", "."))
        if mode == "analytic":
            ax.plot(xs, ys, color=color, linestyle="-",
                    label=f"{protocol} (analytic)")
        else:
            ax.plot(xs, ys, color=color, linestyle="none", marker=marker,
                    markerfacecolor="none", label=f"{protocol} (sim)")
    if fig_id in _LOG_Y:
        ax.set_yscale("log")
    ax.set_xlabel(_AXIS_LABELS.get(fig_id, "axis (dB)"))
    ax.set_ylabel(r"throughput efficiency $\tau$")
    ax.set_title(_TITLES.get(fig_id, fig_id))
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)

"""Matplotlib rendering of lag curves and diagnostic reports.

Figures are file-only artifacts (Agg backend): a stem plot of the per-lag
statistic, with optional step-line quantile envelopes.  Rendering never
touches the numbers; the tab-separated output written alongside a figure
is the exact data it was drawn from.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_ENVELOPE_STYLES = ["C1", "C2", "C3", "C4"]


def _draw_lag_panel(ax, lags, values, envelopes=None, title="", ylabel=""):
    markerline, stemlines, baseline = ax.stem(lags, values)
    plt.setp(markerline, markersize=3.5)
    plt.setp(stemlines, linewidth=1.0)
    plt.setp(baseline, color="0.4", linewidth=0.8)
    if envelopes:
        for i, (name, quantiles) in enumerate(envelopes.items()):
            color = _ENVELOPE_STYLES[i % len(_ENVELOPE_STYLES)]
            for level in sorted(quantiles):
                style = "-" if level == max(quantiles) else "--"
                label = f"{name} q{100 * level:g}" if name else f"q{100 * level:g}"
                ax.step(
                    lags,
                    quantiles[level],
                    where="mid",
                    color=color,
                    linestyle=style,
                    linewidth=1.0,
                    label=label,
                )
        ax.legend(fontsize=7, loc="upper right")
    ax.set_xlabel("lag")
    if ylabel:
        ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title, fontsize=9)


def lag_curve_figure(lags, values, envelopes=None, title="", ylabel="value"):
    """One stem-plot panel with optional quantile envelopes."""
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    _draw_lag_panel(ax, lags, values, envelopes, title=title, ylabel=ylabel)
    fig.tight_layout()
    return fig

def diagnose_figure(report: dict):
    """Four-panel residual diagnostic figure.

    Panels: ACF of the series, ACF of the residuals, ACF of the squared
    residuals, and the scaled residual lag statistic with its adjusted
    (parametric-bootstrap) and iid (permutation) envelopes.
    """
    fig, axes = plt.subplots(2, 2, figsize=(10.0, 7.0))
    _draw_lag_panel(
        axes[0, 0], report["acf_series"]["lags"], report["acf_series"]["values"],
        title="ACF of series", ylabel="acf",
    )
    _draw_lag_panel(
        axes[0, 1],
        report["acf_residuals"]["lags"],
        report["acf_residuals"]["values"],
        title=f"ACF of AR({report['order']}) residuals", ylabel="acf",
    )
    _draw_lag_panel(
        axes[1, 0],
        report["acf_residuals_squared"]["lags"],
        report["acf_residuals_squared"]["values"],
        title="ACF of squared residuals", ylabel="acf",
    )
    _draw_lag_panel(
        axes[1, 1],
        report["lags"],
        report["values"],
        envelopes={
            "adj ": report["envelopes"],
            "iid ": report["permutation_envelopes"],
        },
        title="scaled residual distance autocorrelation", ylabel="n*R(h)",
    )
    fig.tight_layout()
    return fig


def save_figure(fig, path) -> None:
    fig.savefig(path)
    plt.close(fig)

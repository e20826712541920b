"""Matplotlib figure rendering for CLI reports.

Only the command-line layer imports this module; the library metrics in
:mod:`probtree.stats` stay free of plotting concerns.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .stats import ConvergenceReport, FrequencyTable  # noqa: E402


def save_convergence_figure(report: ConvergenceReport, path: str | Path) -> None:
    """Log-log plot of mean L1 error against sample size, with a 1/sqrt(n)
    reference anchored at the first measured point."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(report.sizes, report.errors, "o-", color="#348ABD", label="mean L1 error")
    if report.errors and report.errors[0] > 0:
        n0, e0 = report.sizes[0], report.errors[0]
        ref = [e0 * (n0 / n) ** 0.5 for n in report.sizes]
        ax.loglog(report.sizes, ref, "--", color="#999999", label=r"$n^{-1/2}$ reference")
    slope = "undefined" if report.fitted_slope is None else f"{report.fitted_slope:.3f}"
    ax.set_xlabel("generated records n")
    ax.set_ylabel("mean L1 frequency error")
    ax.set_title(f"Monte Carlo convergence (fitted slope: {slope})")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_marginal_figure(exact: FrequencyTable, observed: FrequencyTable,
                         path: str | Path, n: int) -> None:
    """Side-by-side bars of exact vs sampled frequencies plus their signed
    differences, for one column."""
    values = sorted(exact.freqs.keys() | observed.freqs.keys(), key=str)
    xs = range(len(values))
    exact_f = [exact.freqs.get(v, 0.0) for v in values]
    obs_f = [observed.freqs.get(v, 0.0) for v in values]
    diff = [o - e for o, e in zip(obs_f, exact_f)]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    width = 0.38
    ax1.bar([x - width / 2 for x in xs], exact_f, width, color="#348ABD", label="tree marginal")
    ax1.bar([x + width / 2 for x in xs], obs_f, width, color="#E24A33",
            label=f"generated (n={n})")
    ax1.set_xticks(list(xs))
    ax1.set_xticklabels([str(v) for v in values])
    ax1.set_xlabel(f"values of {exact.column}")
    ax1.set_ylabel("frequency")
    ax1.legend()

    ax2.bar(list(xs), diff, color="#777777")
    ax2.axhline(0.0, color="black", linewidth=0.8)
    ax2.set_xticks(list(xs))
    ax2.set_xticklabels([str(v) for v in values])
    ax2.set_xlabel(f"values of {exact.column}")
    ax2.set_ylabel("generated - exact")

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

"""Figure rendering for the tabular reports.

Uses the Agg backend so rendering works headless; each function writes one
PNG next to whatever delimited output the caller produced and returns the
path it wrote.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .counting import CountTable, GrowthReport, ZetaData  # noqa: E402


def plot_count_table(table: CountTable, path: str) -> str:
    ns = [r.n for r in table.rows]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    ax1.semilogy(ns, [r.q_n + 1 for r in table.rows], "k--",
                 label="q^n + 1")
    ax1.semilogy(ns, [r.N for r in table.rows], "o-", label="N_n")
    ax1.set_ylabel("points")
    ax1.legend()
    ax1.set_title(f"{table.curve} over F_{table.field}")
    ax2.bar(ns, [r.A for r in table.rows], color="tab:blue", label="A(n)")
    bounds = [r.hw_bound for r in table.rows]
    if all(b is not None for b in bounds):
        ax2.plot(ns, bounds, "r:", label="Hasse-Weil bound")
        ax2.plot(ns, [-b for b in bounds], "r:")
    ax2.set_xlabel("n")
    ax2.set_ylabel("A(n) = q^n + 1 - N_n")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_zeta(zeta: ZetaData, path: str) -> str:
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    radius = math.sqrt(zeta.q)
    circle = plt.Circle((0, 0), radius, fill=False, color="gray",
                        linestyle="--", label=f"|z| = sqrt({zeta.q})")
    ax.add_patch(circle)
    if zeta.alphas:
        ax.plot([a.real for a in zeta.alphas],
                [a.imag for a in zeta.alphas], "o", color="tab:red",
                label="reciprocal roots")
    lim = radius * 1.3 + 0.1
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.axhline(0, color="k", lw=0.5)
    ax.axvline(0, color="k", lw=0.5)
    coeffs = " + ".join(f"{c}T^{i}" if i else str(c)
                        for i, c in enumerate(zeta.coeffs))
    ax.set_title(f"P(T) = {coeffs}\nmax | |a| - sqrt(q) | = "
                 f"{zeta.max_weil_deviation:.2e}")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_growth(report: GrowthReport, path: str) -> str:
    ns = [r.n for r in report.rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    nz_n = [r.n for r in report.rows if not r.is_zero]
    nz_a = [abs(r.A) for r in report.rows if not r.is_zero]
    z_n = [r.n for r in report.rows if r.is_zero]
    if nz_n:
        ax.semilogy(nz_n, nz_a, "o-", color="tab:blue", label="|A(n)| > 0")
    if z_n:
        ax.plot(z_n, [1] * len(z_n), "x", color="tab:gray",
                label="A(n) = 0", clip_on=False)
    ax.semilogy(ns, [r.hw_ceiling for r in report.rows], "r:",
                label="2g sqrt(q^n) ceiling")
    if report.m_threshold is not None:
        ax.axhline(report.m_threshold, color="tab:green", linestyle="--",
                   label=f"M = {report.m_threshold}")
    if report.n_threshold is not None:
        ax.axvline(report.n_threshold, color="tab:olive", linestyle="--",
                   label=f"N = {report.n_threshold}")
    ax.set_xlabel("n")
    ax.set_ylabel("|A(n)|")
    ax.set_title(f"defect growth: {report.curve} over F_{report.field}\n"
                 f"({report.pattern}; finite range only)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_for(report, path: str) -> str:
    if isinstance(report, CountTable):
        return plot_count_table(report, path)
    if isinstance(report, ZetaData):
        return plot_zeta(report, path)
    if isinstance(report, GrowthReport):
        return plot_growth(report, path)
    raise ValueError(f"no figure defined for {type(report).__name__}")

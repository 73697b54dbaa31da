"""Figures for bench and census output."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .workbench import BenchRow, CensusRow  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (5.0, 3.4),
    "savefig.dpi": 150,
}


def plot_bench(rows: Sequence[BenchRow], path: str) -> None:
    """Log-log runtime against n, with a linear reference through the first point."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ns = [r.n for r in rows]
        ax.loglog(ns, [r.seconds for r in rows], "o-", label="generated (in class)")
        ax.loglog(ns, [r.perturbed_seconds for r in rows], "s--", label="one edge added")
        if rows and rows[0].seconds > 0:
            base = rows[0].seconds / rows[0].n
            ax.loglog(ns, [base * n for n in ns], ":", color="0.5", label="linear reference")
        ax.set_xlabel("vertices n")
        ax.set_ylabel("fast_recognize wall time (s)")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


CENSUS_SERIES = (
    ("graphs", "all"),
    ("dh", "DH"),
    ("at_free_dh", "DH, AT-free"),
    ("dh_co_dh", "DH ∩ co-DH"),
    ("cograph", "cograph"),
)


def plot_census(rows: Sequence[CensusRow], path: str) -> None:
    """Class counts per n on a log scale, one line per class."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ns = [r.n for r in rows]
        for attr, label in CENSUS_SERIES:
            ax.plot(ns, [getattr(r, attr) for r in rows], "o-", label=label)
        ax.set_yscale("log")
        ax.set_xticks(ns)
        ax.set_xlabel("vertices n")
        ax.set_ylabel("graphs up to isomorphism")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)

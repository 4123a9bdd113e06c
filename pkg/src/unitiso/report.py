"""Tabular and graphical summaries of the bound formulas.

The CSV is the machine-readable artifact; the figures are companions for
eyeballing how fast the bounds decay.  Every number in the table is an
exact fraction plus a 12-significant-digit decimal; the decimal column is
informational only.
"""

from __future__ import annotations

import csv
import decimal
from fractions import Fraction

from .bounds import floor_c_scan, theorem2_value

CSV_COLUMNS = [
    "n",
    "floor_c",
    "incidence_lower_num",
    "incidence_lower_den",
    "incidence_lower",
    "nonincidence_num",
    "nonincidence_den",
    "nonincidence",
]


def ratio_decimal(num: int, den: int, digits: int = 12) -> str:
    """Decimal rendering of num/den to the given significant digits."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        return str(decimal.Decimal(num) / decimal.Decimal(den))


def bound_table(n_max: int) -> list[dict]:
    """One row per order n = 2..n_max with both graph-flavor bound values."""
    rows = []
    for n, c in floor_c_scan(n_max):
        lower = Fraction(2 * (n ** 3 + 1 - c), n * n * (n * n + 1))
        non = theorem2_value(n)
        rows.append(
            {
                "n": n,
                "floor_c": c,
                "incidence_lower_num": lower.numerator,
                "incidence_lower_den": lower.denominator,
                "incidence_lower": ratio_decimal(lower.numerator, lower.denominator),
                "nonincidence_num": non.numerator,
                "nonincidence_den": non.denominator,
                "nonincidence": ratio_decimal(non.numerator, non.denominator),
            }
        )
    return rows


def write_bound_csv(path: str, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def write_bound_figure(path: str, rows: list[dict]) -> None:
    """Both bound values against order, with the 2n/(n^2+1) decay guide."""
    plt = _pyplot()
    ns = [row["n"] for row in rows]
    lower = [float(row["incidence_lower"]) for row in rows]
    non = [float(row["nonincidence"]) for row in rows]
    guide = [2 * n / (n * n + 1) for n in ns]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ns, lower, "o-", markersize=3, label="incidence lower bound")
    ax.plot(ns, non, "s-", markersize=3, label="non-incidence value")
    ax.plot(ns, guide, "--", color="gray", label="2n/(n^2+1)")
    ax.set_xlabel("unital order n")
    ax.set_ylabel("isoperimetric bound")
    ax.set_yscale("log")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_floor_c_figure(path: str, rows: list[dict]) -> None:
    """Integer threshold against order, with the n^2 ceiling for scale."""
    plt = _pyplot()
    ns = [row["n"] for row in rows]
    cs = [row["floor_c"] for row in rows]
    cap = [n * n for n in ns]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ns, cs, "o-", markersize=3, label="floor_c(n)")
    ax.plot(ns, cap, "--", color="gray", label="n^2")
    ax.set_xlabel("unital order n")
    ax.set_ylabel("largest arc size the half-space absorbs")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

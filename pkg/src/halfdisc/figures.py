"""File-only matplotlib renderings of the convergence and envelope tables.

The CLI treats figures as an opt-in side output (--figures DIR): each
renderer takes the same row dictionaries the delimited tables are built
from and writes one PNG.  The Agg backend is forced before pyplot is
imported so rendering never needs a display, and nothing time- or
environment-dependent is drawn, keeping output stable across runs.
"""

from __future__ import annotations

import os
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

DPI = 150

LOCAL_FIGURE = "local_convergence.png"
FIBER_FIGURE = "fiber_envelope.png"
GLOBAL_FIGURE = "torsion_sums.png"


def _new_axes(title: str):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def convergence_figure(rows: list[dict], path: str) -> str:
    """Pairing ratio value/n^2 against n, with the target k and k/2 marked.

    `rows` are local-intersection table rows (keys n, ratio_num, ratio_den,
    k).  Both the nominal target k and its half are drawn: the computed
    sequences approach k/2, and showing both lines makes the gap visible
    instead of hiding it.
    """
    ns = [r["n"] for r in rows]
    ratios = [
        float(Fraction(r["ratio_num"], r["ratio_den"])) for r in rows
    ]
    fig, ax = _new_axes("Local pairing ratio vs n")
    ax.plot(ns, ratios, marker="o", color="tab:blue", label="value / n^2")
    ks = {r.get("k") for r in rows if r.get("k") is not None}
    if len(ks) == 1:
        (k,) = ks
        ax.axhline(k, color="tab:red", linestyle="--", label=f"k = {k}")
        ax.axhline(
            k / 2, color="tab:green", linestyle=":", label=f"k/2 = {k / 2}"
        )
    ax.set_xlabel("n")
    ax.set_ylabel("value / n^2")
    ax.legend()
    return _save(fig, path)


def envelope_figure(rows: list[dict], path: str) -> str:
    """Fiber-model main term per n^2 with its error envelope band.

    `rows` are fiber prediction rows (keys n, k, mainTerm, envelope); in
    joined mode the exact values (key exact) are overlaid as points.
    """
    ns = [r["n"] for r in rows]
    centers = [r["mainTerm"] / (r["n"] ** 2) for r in rows]
    halfwidth = [r["envelope"] / (r["n"] ** 2) for r in rows]
    fig, ax = _new_axes("Fiber-model prediction vs n")
    ax.plot(ns, centers, marker="o", color="tab:blue", label="mainTerm / n^2")
    ax.fill_between(
        ns,
        [c - h for c, h in zip(centers, halfwidth)],
        [c + h for c, h in zip(centers, halfwidth)],
        color="tab:blue",
        alpha=0.2,
        label="envelope",
    )
    if rows and "exact" in rows[0]:
        exact = [r["exact"] / (r["n"] ** 2) for r in rows]
        ax.plot(
            ns, exact, marker="x", linestyle="none", color="tab:red",
            label="exact / n^2",
        )
    ks = {r["k"] for r in rows}
    if len(ks) == 1:
        (k,) = ks
        ax.axhline(k, color="tab:gray", linestyle="--", label=f"k = {k}")
    ax.set_xlabel("n")
    ax.set_ylabel("pairing / n^2")
    ax.legend()
    return _save(fig, path)


def torsion_sum_figure(rows: list[dict], target: float, path: str) -> str:
    """Archimedean torsion sums S_n against the half-log-discriminant target.

    Both the target and its half are drawn; the computed sums approach
    half the target, and the figure shows that honestly.
    """
    ns = [r["n"] for r in rows]
    sns = [r["Sn"] for r in rows]
    fig, ax = _new_axes("Torsion log-sums vs n")
    ax.plot(ns, sns, marker="o", color="tab:blue", label="S_n")
    ax.axhline(
        target, color="tab:red", linestyle="--",
        label="(1/2) log|disc|",
    )
    ax.axhline(
        target / 2, color="tab:green", linestyle=":",
        label="(1/4) log|disc|",
    )
    ax.set_xlabel("n")
    ax.set_ylabel("S_n")
    ax.legend()
    return _save(fig, path)

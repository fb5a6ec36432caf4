"""Optional PNG figures for reports and tables (matplotlib, Agg backend)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .scalars import CycloNum, root_of_unity_exponent  # noqa: E402


def _save(fig, outdir: str, name: str) -> str:
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, name)
    fig.savefig(path, dpi=110, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
    return path


def report_figure(report, outdir: str) -> list[str]:
    """Bar chart of per-check case counts, coloured by status."""
    checks = report.checks
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(checks) + 1.2))
    y = np.arange(len(checks))
    ax.barh(y, [max(c.count, 1) for c in checks], color=["tab:green" if c.passed else "tab:red" for c in checks])
    ax.set_yticks(y, [c.name for c in checks])
    ax.set_xscale("log")
    ax.set_xlim(0.8, 2 * max(max(c.count, 1) for c in checks))
    ax.set_xlabel("cases checked")
    ax.set_title(f"{report.suite} {report.params}")
    ax.invert_yaxis()
    return [_save(fig, outdir, f"{report.suite}-checks.png")]


def _abs2(v: CycloNum) -> float:
    return float((v * v.conj()).to_fraction())


def strata_figure(fn, outdir: str, name: str) -> list[str]:
    """|f(b)|^2 for every form b, grouped by corank."""
    from .strata import corank

    pts = list(fn.items())
    ranks = [corank(b, fn.q) for b, _ in pts]
    vals = [_abs2(v) for _, v in pts]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.scatter(range(len(vals)), vals, c=ranks, cmap="viridis", s=12)
    ax.set_xlabel("form index")
    ax.set_ylabel("|value|^2")
    ax.set_title(f"{name}, d={fn.d}, q={fn.q}")
    return [_save(fig, outdir, f"strata-{name}-d{fn.d}-q{fn.q}.png")]


def cocycle_figure(table: dict, group: list, outdir: str) -> list[str]:
    """Heatmap of the cocycle exponents k with c = zeta_N^k."""
    n = len(group)
    E = np.array([[root_of_unity_exponent(table[a, b]) for b in group] for a in group]).reshape(n, n)
    fig, ax = plt.subplots(figsize=(5, 4.5))
    im = ax.imshow(E, cmap="twilight", interpolation="nearest")
    fig.colorbar(im, ax=ax, label="exponent of zeta_N")
    ax.set_xlabel("g2")
    ax.set_ylabel("g1")
    return [_save(fig, outdir, "cocycle-table.png")]


def p1_figure(records: list[dict], q: int, outdir: str) -> list[str]:
    """log_q |f_p|^2 against r + corank for each swept extension class."""
    xs = [r["r"] + r["corank"] for r in records]
    ys = [np.log(_abs2(CycloNum.from_json(r["f_p"]))) / np.log(q) for r in records]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.scatter(xs, ys, s=14, alpha=0.6)
    lim = [min(xs + ys) - 0.5, max(xs + ys) + 0.5]
    ax.plot(lim, lim, "k--", lw=0.8)
    ax.set_xlabel("r + corank")
    ax.set_ylabel("log_q |f_p|^2")
    return [_save(fig, outdir, "p1-weights.png")]

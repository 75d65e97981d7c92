"""Figures for the report directory: norm-product sizes and L(1/3) constants."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import complexity, quality  # noqa: E402

_STYLE = {"CONJ": "-", "GJL": "--", "JLSV1": ":", "JLSV2": "-."}


def norm_figure(n: int, rows, path):
    """Bits of the norm product against the size of Q, one line per (method, degrees)."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    series = {}
    for dd, _, _, method, dF, dG, total in rows:
        series.setdefault((method, dF, dG), []).append((dd, total))
    for (method, dF, dG), pts in series.items():
        xs, ys = zip(*pts)
        ax.plot(xs, ys, _STYLE.get(method, "-"), label=f"{method} ({dG},{dF})")
    ax.set_xlabel("Q (decimal digits)")
    ax.set_ylabel("norm product (bits)")
    ax.set_title(f"F_p^{n}")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def complexity_figure(points, path):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    conj = [pt for pt in points if pt.method == complexity.CONJ_BOUNDARY]
    gjl = [pt for pt in points if pt.method == complexity.GJL]
    ax.plot([pt.cp for pt in conj], [pt.c for pt in conj], label="conjugation, best t")
    if gjl:
        ax.plot([pt.cp for pt in gjl], [pt.c for pt in gjl], "--", label="GJL")
    ax.axhline(complexity.complexity_constant(complexity.CONJ_MEDIUM), color="gray", lw=0.8,
               ls=":", label="conjugation, medium p")
    ax.set_xlabel("c_p")
    ax.set_ylabel("c in L_Q(1/3, c)")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(outdir, q_dd=range(60, 221, 20), degrees=(2, 3, 4, 5, 6)):
    """CSV tables with a PNG rendering next to each; returns the written paths."""
    from pathlib import Path
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    pts = complexity.emit_curves()
    (out / "complexity.csv").write_text(complexity.curves_csv(pts), encoding="utf-8")
    complexity_figure(pts, out / "complexity.png")
    written += [out / "complexity.csv", out / "complexity.png"]
    for n in degrees:
        rows = quality.curve_rows(n, q_dd)
        (out / f"norms_n{n}.csv").write_text(quality.curves_csv(rows), encoding="utf-8")
        norm_figure(n, rows, out / f"norms_n{n}.png")
        written += [out / f"norms_n{n}.csv", out / f"norms_n{n}.png"]
    return written

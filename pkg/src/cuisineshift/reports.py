"""Delimited reports and matplotlib figures for the CLI report paths.

Everything here is presentation: TSV files for machine consumption and
PNG figures for eyeballs. The deterministic SVG renderer for diagrams
lives in layout.render_svg; these figures are companions, not the
contract.
"""

from __future__ import annotations

from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .classifier import EvaluationReport
from .layout import CircleLayout, DiagramPoint

_PNG_META = {"Software": None}  # keep figure bytes independent of the toolchain version


def write_tsv(path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(str(h) for h in header) + "\n")
        for row in rows:
            fh.write("\t".join(_cell(v) for v in row) + "\n")


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def confusion_rows(report: EvaluationReport):
    """Rows of (true country, per-predicted counts...) matching the header."""
    header = ["true\\predicted"] + list(report.countries)
    rows = [
        [country] + [int(c) for c in report.confusion[i]]
        for i, country in enumerate(report.countries)
    ]
    return header, rows


def save_confusion_png(report: EvaluationReport, path) -> None:
    counts = report.confusion.astype(np.float64)
    totals = counts.sum(axis=1, keepdims=True)
    rates = np.divide(counts, totals, out=np.zeros_like(counts), where=totals > 0)
    n = len(report.countries)
    fig, ax = plt.subplots(figsize=(0.45 * n + 2.5, 0.45 * n + 2))
    im = ax.imshow(rates, cmap="Blues", vmin=0.0, vmax=1.0)
    ax.set_xticks(range(n), report.countries, rotation=90, fontsize=8)
    ax.set_yticks(range(n), report.countries, fontsize=8)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    ax.set_title(f"accuracy {report.accuracy:.3f}")
    fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)


def save_loss_curve_png(loss_history: Sequence[float], path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(range(len(loss_history)), loss_history, lw=1.2)
    ax.set_xlabel("epoch")
    ax.set_ylabel("mean cross-entropy")
    ax.set_title("training loss")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)


def save_diagram_png(layout: CircleLayout, path,
                     points: Optional[Sequence[DiagramPoint]] = None,
                     labels: Optional[Sequence[str]] = None) -> None:
    """Country circle with an optional trail of recipe points."""
    points = list(points or [])
    labels = list(labels or [])
    fig, ax = plt.subplots(figsize=(7, 7))
    theta = np.linspace(0.0, 2.0 * np.pi, 361)
    ax.plot(np.cos(theta), np.sin(theta), color="#999999", lw=1.0)
    xs = layout.positions[:, 0]
    ys = layout.positions[:, 1]
    ax.scatter(xs, ys, s=28, color="#1f4e79", zorder=3)
    for country, x, y in zip(layout.countries, xs, ys):
        ax.annotate(country, (x, y), xytext=(4, 4), textcoords="offset points",
                    fontsize=8, color="#1f4e79")
    if points:
        px = [p.x for p in points]
        py = [p.y for p in points]
        if len(points) > 1:
            ax.plot(px, py, color="#c0392b", lw=1.2, zorder=4)
        ax.scatter(px, py, s=22, color="#c0392b", zorder=5)
        for i, p in enumerate(points):
            tag = labels[i] if labels else str(i)
            ax.annotate(tag, (p.x, p.y), xytext=(4, -9), textcoords="offset points",
                        fontsize=7, color="#c0392b")
    ax.set_aspect("equal")
    ax.set_xlim(-1.25, 1.25)
    ax.set_ylim(-1.25, 1.25)
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)

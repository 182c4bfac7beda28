"""Figure rendering for sweep results (written next to the CSV output)."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def read_sweep_csv(path: str | Path) -> list[dict]:
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for key in ("p", "wer", "wer_lo", "wer_hi", "qer"):
            row[key] = float(row[key])
        for key in ("n", "m", "trials"):
            row[key] = int(row[key])
    return rows


def render_sweep_figure(csv_paths: list[str | Path], out_path: str | Path,
                        title: str | None = None) -> None:
    """Word (solid) and qubit (dashed) error rates vs p, one color per code."""
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for path in csv_paths:
        rows = read_sweep_csv(path)
        if not rows:
            continue
        rows.sort(key=lambda r: r["p"])
        n, m = rows[0]["n"], rows[0]["m"]
        label = f"n={n}, m={m} (GF({2 ** m}))"
        p = [r["p"] for r in rows]
        wer = [r["wer"] for r in rows]
        lo = [r["wer"] - r["wer_lo"] for r in rows]
        hi = [r["wer_hi"] - r["wer"] for r in rows]
        line = ax.errorbar(p, wer, yerr=[lo, hi], marker="o", capsize=2,
                           label=f"WER {label}")
        ax.plot(p, [r["qer"] for r in rows], marker="s", linestyle="--",
                color=line.lines[0].get_color(), alpha=0.7, label=f"QER {label}")
    ax.set_xlabel("depolarizing probability p")
    ax.set_ylabel("error rate")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
